#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace zomat {

// Fixed-size bit vector packed into 64-bit words. Bits beyond size() are
// kept zero so whole-word operations stay valid.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(int n) : n_(n), words_((n + 63) / 64, 0) {}

    int size() const { return n_; }

    bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(int i) { words_[i >> 6] |= uint64_t{1} << (i & 63); }
    void reset(int i) { words_[i >> 6] &= ~(uint64_t{1} << (i & 63)); }
    void assign(int i, bool v) { v ? set(i) : reset(i); }

    long long count() const {
        long long c = 0;
        for (uint64_t w : words_) c += std::popcount(w);
        return c;
    }

    BitVec& operator&=(const BitVec& o) {
        for (size_t w = 0; w < words_.size(); ++w) words_[w] &= o.words_[w];
        return *this;
    }

    BitVec& operator|=(const BitVec& o) {
        for (size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
        return *this;
    }

    bool any() const {
        for (uint64_t w : words_) if (w) return true;
        return false;
    }

    // Population count over the inclusive index range [lo, hi].
    long long count_in(int lo, int hi) const {
        if (lo > hi) return 0;
        long long c = 0;
        for (int w = lo >> 6, last = hi >> 6; w <= last; ++w) {
            uint64_t m = words_[w];
            if (w == (lo >> 6)) m &= ~uint64_t{0} << (lo & 63);
            if (w == last && (hi & 63) != 63) m &= (uint64_t{1} << ((hi & 63) + 1)) - 1;
            c += std::popcount(m);
        }
        return c;
    }

    // Smallest set index in [lo, hi], or -1.
    int find_first_in(int lo, int hi) const {
        if (lo > hi) return -1;
        for (int w = lo >> 6, last = hi >> 6; w <= last; ++w) {
            uint64_t m = words_[w];
            if (w == (lo >> 6)) m &= ~uint64_t{0} << (lo & 63);
            if (w == last && (hi & 63) != 63) m &= (uint64_t{1} << ((hi & 63) + 1)) - 1;
            if (m) return (w << 6) + std::countr_zero(m);
        }
        return -1;
    }

    bool any_in(int lo, int hi) const { return find_first_in(lo, hi) >= 0; }

    // Smallest set index >= from, or -1.
    int next_set(int from) const {
        if (from >= n_) return -1;
        return find_first_in(from, n_ - 1);
    }

    std::vector<int> to_indices() const {
        std::vector<int> out;
        for (int i = next_set(0); i >= 0; i = next_set(i + 1)) out.push_back(i);
        return out;
    }

    const std::vector<uint64_t>& words() const { return words_; }

    friend bool operator==(const BitVec& a, const BitVec& b) {
        return a.n_ == b.n_ && a.words_ == b.words_;
    }

private:
    int n_ = 0;
    std::vector<uint64_t> words_;
};

}  // namespace zomat
