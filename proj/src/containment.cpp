#include "zomat/containment.hpp"

#include <algorithm>
#include <vector>

#include "zomat/errors.hpp"

namespace zomat {

namespace {

// Backtracking state: pattern rows are placed in increasing order onto host
// rows; feasible[y] is the set of host columns still usable for pattern
// column y given the rows placed so far.
struct EmbedSearch {
    const Matrix01& host;
    const Matrix01& pat;
    int a, b, m, n;
    int pinned_row;        // host row forced for pattern row `pinned_at`, or -1
    int pinned_at;
    std::vector<std::vector<int>> ones_of_row;
    std::vector<BitVec> feasible;  // stack: a+1 frames of b column sets
    std::vector<int> row_map;

    EmbedSearch(const Matrix01& host_, const Matrix01& pat_, int pinned_row_, int pinned_at_)
        : host(host_), pat(pat_), a(pat_.n_rows()), b(pat_.n_cols()),
          m(host_.n_rows()), n(host_.n_cols()),
          pinned_row(pinned_row_), pinned_at(pinned_at_) {
        ones_of_row.resize(a);
        for (int u = 0; u < a; ++u) ones_of_row[u] = pat.row(u).to_indices();
        BitVec full(n);
        for (int j = 0; j < n; ++j) full.set(j);
        feasible.assign(static_cast<size_t>(a + 1) * b, full);
        row_map.assign(a, -1);
    }

    BitVec* frame(int depth) { return feasible.data() + static_cast<size_t>(depth) * b; }

    // Greedy increasing transversal across the b column sets; complete for
    // feasibility since picking the leftmost legal column never hurts later
    // columns. Returns the lexicographically smallest col_map, or empty.
    std::optional<std::vector<int>> transversal(const BitVec* sets) const {
        std::vector<int> cols(b);
        int prev = -1;
        for (int y = 0; y < b; ++y) {
            int c = sets[y].next_set(prev + 1);
            if (c < 0) return std::nullopt;
            cols[y] = c;
            prev = c;
        }
        return cols;
    }

    std::optional<Embedding> run() {
        if (a > m || b > n) return std::nullopt;
        if (!transversal(frame(0))) return std::nullopt;
        if (search(0, 0)) {
            auto cols = transversal(frame(a));
            return Embedding{row_map, *cols};
        }
        return std::nullopt;
    }

    bool search(int u, int min_row) {
        if (u == a) return true;
        int lo = min_row, hi = m - (a - u);
        if (u == pinned_at) lo = hi = pinned_row;
        else if (pinned_at >= 0 && u < pinned_at)
            hi = std::min(hi, pinned_row - (pinned_at - u));
        if (lo > hi) return false;
        const BitVec* cur = frame(u);
        BitVec* next = frame(u + 1);
        for (int i = lo; i <= hi; ++i) {
            for (int y = 0; y < b; ++y) next[y] = cur[y];
            for (int y : ones_of_row[u]) next[y] &= host.row(i);
            if (!transversal(next)) continue;
            row_map[u] = i;
            if (search(u + 1, i + 1)) return true;
        }
        return false;
    }
};

}  // namespace

std::optional<Embedding> find_embedding(const Matrix01& host, const Pattern& pattern) {
    EmbedSearch s(host, pattern.matrix(), -1, -1);
    return s.run();
}

std::optional<Embedding> find_embedding_last_row_at(const Matrix01& host,
                                                    const Pattern& pattern,
                                                    int last_row) {
    const Matrix01& a = pattern.matrix();
    int last_one_row = -1;
    for (int u = a.n_rows() - 1; u >= 0; --u)
        if (a.row_weight(u) > 0) { last_one_row = u; break; }
    if (last_one_row < 0) return find_embedding(host, pattern);  // all-zero pattern
    // Trailing all-zero pattern rows still need distinct host rows below.
    int trailing = a.n_rows() - 1 - last_one_row;
    if (last_row + trailing >= host.n_rows()) return std::nullopt;
    if (last_row < last_one_row) return std::nullopt;
    EmbedSearch s(host, a, last_row, last_one_row);
    return s.run();
}

bool oracle_contains(const Matrix01& host, const Pattern& pattern) {
    const Matrix01& a = pattern.matrix();
    if (host.n_rows() > 6 || host.n_cols() > 6)
        throw ArgumentError("oracle_contains host guard is 6x6");
    if (a.n_rows() > 4 || a.n_cols() > 4)
        throw ArgumentError("oracle_contains pattern guard is 4x4");
    int m = host.n_rows(), n = host.n_cols();
    int ar = a.n_rows(), ac = a.n_cols();
    if (ar > m || ac > n) return false;

    std::vector<int> rows(ar), cols(ac);
    // enumerate all increasing row selections via combination stepping
    auto next_comb = [](std::vector<int>& comb, int limit) {
        int k = static_cast<int>(comb.size());
        for (int i = k - 1; i >= 0; --i) {
            if (comb[i] < limit - (k - i)) {
                ++comb[i];
                for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
                return true;
            }
        }
        return false;
    };

    for (int i = 0; i < ar; ++i) rows[i] = i;
    do {
        for (int j = 0; j < ac; ++j) cols[j] = j;
        do {
            bool dominated = true;
            for (int u = 0; u < ar && dominated; ++u)
                for (int y = 0; y < ac && dominated; ++y)
                    if (a.get(u, y) && !host.get(rows[u], cols[y])) dominated = false;
            if (dominated) return true;
        } while (next_comb(cols, n));
    } while (next_comb(rows, m));
    return false;
}

}  // namespace zomat
