#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace gperm {

/// Fenwick tree over counts indexed 1..n.
class FenwickCounter {
public:
    explicit FenwickCounter(int n) : n_(n), tree_(static_cast<std::size_t>(n) + 1, 0) {
        if (n < 0) throw std::invalid_argument("FenwickCounter: negative size");
        msb_ = n > 0 ? std::bit_floor(static_cast<unsigned>(n)) : 0;
    }

    int size() const { return n_; }

    /// Reset to one count at every index, in O(n).
    void fill_ones() {
        for (int i = 1; i <= n_; ++i) tree_[i] = i & -i;
    }

    void add(int i, std::int64_t delta) {
        if (i < 1 || i > n_) throw std::out_of_range("FenwickCounter::add: index");
        for (; i <= n_; i += i & -i) tree_[i] += delta;
    }

    /// Sum of counts over [1, i].
    std::int64_t prefix(int i) const {
        if (i < 0) return 0;
        if (i > n_) i = n_;
        std::int64_t s = 0;
        for (; i > 0; i -= i & -i) s += tree_[i];
        return s;
    }

    std::int64_t total() const { return prefix(n_); }

    /// Smallest index p with prefix(p) >= c, for 1 <= c <= total().
    int kth(std::int64_t c) const {
        int pos = 0;
        for (unsigned pw = msb_; pw > 0; pw >>= 1) {
            const int next = pos + static_cast<int>(pw);
            if (next <= n_ && tree_[next] < c) {
                pos = next;
                c -= tree_[pos];
            }
        }
        return pos + 1;
    }

private:
    int n_;
    unsigned msb_;
    std::vector<std::int64_t> tree_;
};

/// Order-statistic deck over card labels 1..n: select_remove(c) returns the
/// card with exactly c-1 smaller cards still present and removes it, in
/// O(log n). Starts with all n cards present.
class FenwickDeck {
public:
    explicit FenwickDeck(int n) : counter_(n), remaining_(n) {
        if (n < 1) throw std::invalid_argument("FenwickDeck: need n >= 1");
        counter_.fill_ones();
    }

    int capacity() const { return counter_.size(); }
    int remaining() const { return remaining_; }

    int select_remove(int c) {
        if (c < 1 || c > remaining_) throw std::out_of_range("FenwickDeck::select_remove: c");
        const int label = counter_.kth(c);
        counter_.add(label, -1);
        --remaining_;
        return label;
    }

private:
    FenwickCounter counter_;
    int remaining_;
};

}  // namespace gperm
