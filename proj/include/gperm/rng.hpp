#pragma once

#include <cstdint>
#include <stdexcept>

namespace gperm {

/// Seedable, stream-addressable random generator (xoshiro256++ core, state
/// derived from (seed, stream) with SplitMix64). Identical (seed, stream)
/// reproduces identical output bit-for-bit on every platform; distinct
/// stream ids give independent streams without coordination, so replicas
/// parallelize by stream id alone.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed = 0, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {
        std::uint64_t z = seed;
        z = splitmix(z);
        z ^= stream * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL;
        for (auto& s : s_) {
            z = splitmix(z);
            s = z;
        }
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in the open interval (0, 1).
    double next_open() {
        double u;
        do {
            u = next_double();
        } while (u == 0.0);
        return u;
    }

    /// Unbiased uniform integer in [0, bound).
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
        const std::uint64_t limit = (~std::uint64_t{0} / bound) * bound;
        std::uint64_t r;
        do {
            r = next_u64();
        } while (r >= limit);
        return r % bound;
    }

    /// Unbiased uniform integer in [lo, hi], inclusive.
    std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw std::invalid_argument("next_int: empty range");
        return lo + static_cast<std::int64_t>(
                        next_below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    static std::uint64_t splitmix(std::uint64_t state) {
        std::uint64_t z = state + 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t s_[4];
    std::uint64_t seed_;
    std::uint64_t stream_;
};

}  // namespace gperm
