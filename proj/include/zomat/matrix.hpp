#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zomat/bitvec.hpp"
#include "zomat/rng.hpp"

namespace zomat {

// An m x n zero-one matrix with packed bit rows. Row 0 is the topmost row,
// column 0 the leftmost column; "above" always means smaller row index.
// Immutable use after construction is the norm; all operations on shared
// matrices are pure.
class Matrix01 {
public:
    static constexpr int kMaxDim = 1 << 14;

    Matrix01() = default;
    Matrix01(int n_rows, int n_cols);  // all zeros

    static Matrix01 zeros(int n_rows, int n_cols) { return Matrix01(n_rows, n_cols); }
    static Matrix01 ones(int n_rows, int n_cols);
    static Matrix01 identity(int n);
    static Matrix01 from_rows(const std::vector<std::vector<int>>& rows);
    static Matrix01 random(int n_rows, int n_cols, double density, Rng& rng);

    // Parses the .zom text format: one row per line, characters '0'/'1'
    // only, every line the same length. Throws FormatError otherwise.
    static Matrix01 parse(std::string_view text);

    int n_rows() const { return n_rows_; }
    int n_cols() const { return n_cols_; }

    bool get(int i, int j) const { return rows_[i].test(j); }
    void set(int i, int j, bool v) { rows_[i].assign(j, v); }

    const BitVec& row(int i) const { return rows_[i]; }

    long long weight() const;
    long long row_weight(int i) const { return rows_[i].count(); }

    // Bits of column j collected over all rows.
    BitVec column(int j) const;

    std::string to_text() const;  // inverse of parse

    Matrix01 mirrored_vertical() const;  // row i <- row n_rows-1-i

    // Stable content hash (FNV-1a over dimensions and row words).
    uint64_t content_hash() const;

    friend bool operator==(const Matrix01& a, const Matrix01& b) {
        return a.n_rows_ == b.n_rows_ && a.n_cols_ == b.n_cols_ && a.rows_ == b.rows_;
    }

private:
    int n_rows_ = 0;
    int n_cols_ = 0;
    std::vector<BitVec> rows_;
};

inline long long weight(const Matrix01& m) { return m.weight(); }
Matrix01 mirror_vertical(const Matrix01& m);
Matrix01 parse_pattern(std::string_view text);

// A small forbidden matrix with derived metadata: t is the maximum number of
// 1-entries in any row; column_cut, when present, is the list of t interval
// widths of a vertical partition in which every row of every part has at
// most one 1-entry.
class Pattern {
public:
    static constexpr int kMaxRows = 8;
    static constexpr int kMaxCols = 12;

    explicit Pattern(Matrix01 m);
    Pattern(Matrix01 m, std::vector<int> cut_widths);

    // Bypasses the 8x12 guard; used for internally padded patterns.
    static Pattern unchecked(Matrix01 m, std::optional<std::vector<int>> cut = std::nullopt);

    // Greedy minimal vertical partition with <= 1 one per row per part.
    // Returns widths, empty only for zero-column input.
    static std::vector<int> greedy_column_cut(const Matrix01& m);

    const Matrix01& matrix() const { return mat_; }
    int n_rows() const { return mat_.n_rows(); }
    int n_cols() const { return mat_.n_cols(); }
    int t() const { return t_; }
    const std::optional<std::vector<int>>& column_cut() const { return cut_; }

    // Column indices of the 1-entries in row u, ascending.
    std::vector<int> row_ones(int u) const { return mat_.row(u).to_indices(); }

    friend bool operator==(const Pattern& a, const Pattern& b) {
        return a.mat_ == b.mat_ && a.cut_ == b.cut_;
    }

private:
    Pattern(Matrix01 m, std::optional<std::vector<int>> cut, bool checked);

    Matrix01 mat_;
    int t_ = 0;
    std::optional<std::vector<int>> cut_;
};

// Witness of ordered containment: strictly increasing row and column maps
// such that every 1 of the pattern lands on a 1 of the host.
struct Embedding {
    std::vector<int> row_map;
    std::vector<int> col_map;

    bool valid_for(const Matrix01& host, const Pattern& pattern) const;
};

}  // namespace zomat
