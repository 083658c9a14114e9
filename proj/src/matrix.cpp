#include "zomat/matrix.hpp"

#include <algorithm>
#include <numeric>

#include "zomat/errors.hpp"

namespace zomat {

namespace {

void check_dims(int n_rows, int n_cols) {
    if (n_rows < 0 || n_cols < 0)
        throw ArgumentError("matrix dimensions must be non-negative");
    if (n_rows > Matrix01::kMaxDim || n_cols > Matrix01::kMaxDim)
        throw ArgumentError("matrix dimension exceeds the 2^14 desk-scale guard");
}

}  // namespace

Matrix01::Matrix01(int n_rows, int n_cols) : n_rows_(n_rows), n_cols_(n_cols) {
    check_dims(n_rows, n_cols);
    rows_.assign(n_rows, BitVec(n_cols));
}

Matrix01 Matrix01::ones(int n_rows, int n_cols) {
    Matrix01 m(n_rows, n_cols);
    for (int i = 0; i < n_rows; ++i)
        for (int j = 0; j < n_cols; ++j) m.rows_[i].set(j);
    return m;
}

Matrix01 Matrix01::identity(int n) {
    Matrix01 m(n, n);
    for (int i = 0; i < n; ++i) m.rows_[i].set(i);
    return m;
}

Matrix01 Matrix01::from_rows(const std::vector<std::vector<int>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
    Matrix01 m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c)
            throw ArgumentError("ragged row list");
        for (int j = 0; j < c; ++j)
            if (rows[i][j]) m.rows_[i].set(j);
    }
    return m;
}

Matrix01 Matrix01::random(int n_rows, int n_cols, double density, Rng& rng) {
    Matrix01 m(n_rows, n_cols);
    for (int i = 0; i < n_rows; ++i)
        for (int j = 0; j < n_cols; ++j)
            if (rng.bernoulli(density)) m.rows_[i].set(j);
    return m;
}

Matrix01 Matrix01::parse(std::string_view text) {
    if (text.empty()) throw FormatError("empty matrix text");
    std::vector<std::string_view> lines;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            if (pos < text.size()) lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    // A single trailing newline is tolerated; interior blank lines are not.
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw FormatError("empty matrix text");

    size_t width = lines[0].size();
    for (const auto& line : lines)
        if (line.size() != width) throw FormatError("ragged lines in matrix text");
    if (width == 0) throw FormatError("empty matrix row");
    check_dims(static_cast<int>(lines.size()), static_cast<int>(width));

    Matrix01 m(static_cast<int>(lines.size()), static_cast<int>(width));
    for (size_t i = 0; i < lines.size(); ++i) {
        for (size_t j = 0; j < width; ++j) {
            char ch = lines[i][j];
            if (ch == '1')
                m.rows_[i].set(static_cast<int>(j));
            else if (ch != '0')
                throw FormatError("invalid character in matrix text");
        }
    }
    return m;
}

long long Matrix01::weight() const {
    long long w = 0;
    for (const auto& r : rows_) w += r.count();
    return w;
}

BitVec Matrix01::column(int j) const {
    BitVec col(n_rows_);
    for (int i = 0; i < n_rows_; ++i)
        if (rows_[i].test(j)) col.set(i);
    return col;
}

std::string Matrix01::to_text() const {
    std::string out;
    out.reserve(static_cast<size_t>(n_rows_) * (n_cols_ + 1));
    for (int i = 0; i < n_rows_; ++i) {
        for (int j = 0; j < n_cols_; ++j) out.push_back(rows_[i].test(j) ? '1' : '0');
        if (i + 1 < n_rows_) out.push_back('\n');
    }
    return out;
}

Matrix01 Matrix01::mirrored_vertical() const {
    Matrix01 m(n_rows_, n_cols_);
    for (int i = 0; i < n_rows_; ++i) m.rows_[i] = rows_[n_rows_ - 1 - i];
    return m;
}

uint64_t Matrix01::content_hash() const {
    uint64_t h = 0xCBF29CE484222325ull;
    auto mix = [&h](uint64_t x) {
        for (int b = 0; b < 8; ++b) {
            h ^= (x >> (8 * b)) & 0xFF;
            h *= 0x100000001B3ull;
        }
    };
    mix(static_cast<uint64_t>(n_rows_));
    mix(static_cast<uint64_t>(n_cols_));
    for (const auto& r : rows_)
        for (uint64_t w : r.words()) mix(w);
    return h;
}

Matrix01 mirror_vertical(const Matrix01& m) { return m.mirrored_vertical(); }

Matrix01 parse_pattern(std::string_view text) { return Matrix01::parse(text); }

Pattern::Pattern(Matrix01 m) : Pattern(std::move(m), std::nullopt, true) {}

Pattern::Pattern(Matrix01 m, std::vector<int> cut_widths)
    : Pattern(std::move(m), std::optional<std::vector<int>>(std::move(cut_widths)), true) {}

Pattern Pattern::unchecked(Matrix01 m, std::optional<std::vector<int>> cut) {
    return Pattern(std::move(m), std::move(cut), false);
}

Pattern::Pattern(Matrix01 m, std::optional<std::vector<int>> cut, bool checked)
    : mat_(std::move(m)), cut_(std::move(cut)) {
    if (mat_.n_rows() == 0 || mat_.n_cols() == 0)
        throw ArgumentError("pattern must have at least one row and one column");
    if (checked && (mat_.n_rows() > kMaxRows || mat_.n_cols() > kMaxCols))
        throw ArgumentError("pattern exceeds the 8x12 guard");
    for (int i = 0; i < mat_.n_rows(); ++i)
        t_ = std::max(t_, static_cast<int>(mat_.row_weight(i)));
    if (cut_) {
        long long total = std::accumulate(cut_->begin(), cut_->end(), 0LL);
        if (total != mat_.n_cols() || cut_->empty())
            throw ArgumentError("column cut widths must sum to the column count");
        int start = 0;
        for (int width : *cut_) {
            if (width <= 0) throw ArgumentError("column cut widths must be positive");
            for (int i = 0; i < mat_.n_rows(); ++i) {
                long long ones = mat_.row(i).count_in(start, start + width - 1);
                if (ones > 1)
                    throw ArgumentError("column cut part has a row with more than one 1-entry");
            }
            start += width;
        }
    }
}

std::vector<int> Pattern::greedy_column_cut(const Matrix01& m) {
    std::vector<int> widths;
    int start = 0;
    while (start < m.n_cols()) {
        int end = start;  // widest interval [start, end] with <= 1 one per row
        std::vector<int> seen(m.n_rows(), 0);
        while (end < m.n_cols()) {
            bool ok = true;
            for (int i = 0; i < m.n_rows() && ok; ++i)
                if (m.get(i, end) && seen[i]) ok = false;
            if (!ok) break;
            for (int i = 0; i < m.n_rows(); ++i)
                if (m.get(i, end)) seen[i] = 1;
            ++end;
        }
        widths.push_back(end - start);
        start = end;
    }
    return widths;
}

bool Embedding::valid_for(const Matrix01& host, const Pattern& pattern) const {
    const Matrix01& a = pattern.matrix();
    if (static_cast<int>(row_map.size()) != a.n_rows()) return false;
    if (static_cast<int>(col_map.size()) != a.n_cols()) return false;
    for (size_t i = 0; i < row_map.size(); ++i) {
        if (row_map[i] < 0 || row_map[i] >= host.n_rows()) return false;
        if (i > 0 && row_map[i] <= row_map[i - 1]) return false;
    }
    for (size_t j = 0; j < col_map.size(); ++j) {
        if (col_map[j] < 0 || col_map[j] >= host.n_cols()) return false;
        if (j > 0 && col_map[j] <= col_map[j - 1]) return false;
    }
    for (int u = 0; u < a.n_rows(); ++u)
        for (int y = 0; y < a.n_cols(); ++y)
            if (a.get(u, y) && !host.get(row_map[u], col_map[y])) return false;
    return true;
}

}  // namespace zomat
