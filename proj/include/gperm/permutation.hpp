#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace gperm {

/// One-based permutation of [n]: sigma[i-1] holds the value at position i.
struct Permutation {
    std::vector<std::int32_t> sigma;

    Permutation() = default;
    explicit Permutation(std::vector<std::int32_t> values) : sigma(std::move(values)) {}

    static Permutation identity(int n) {
        Permutation p;
        p.sigma.resize(static_cast<std::size_t>(n));
        std::iota(p.sigma.begin(), p.sigma.end(), 1);
        return p;
    }

    int n() const { return static_cast<int>(sigma.size()); }

    /// Value at one-based position i.
    std::int32_t operator()(int i) const { return sigma[static_cast<std::size_t>(i) - 1]; }

    bool is_bijection() const {
        std::vector<bool> seen(sigma.size(), false);
        for (const auto v : sigma) {
            if (v < 1 || v > n() || seen[static_cast<std::size_t>(v) - 1]) return false;
            seen[static_cast<std::size_t>(v) - 1] = true;
        }
        return true;
    }

    Permutation inverse() const {
        Permutation inv;
        inv.sigma.resize(sigma.size());
        for (int i = 1; i <= n(); ++i) inv.sigma[static_cast<std::size_t>((*this)(i)) - 1] = i;
        return inv;
    }

    bool operator==(const Permutation&) const = default;
};

}  // namespace gperm
