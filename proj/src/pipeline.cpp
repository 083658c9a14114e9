#include "zomat/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_set>

#include "zomat/containment.hpp"
#include "zomat/errors.hpp"
#include "zomat/util.hpp"

namespace zomat {

namespace {

constexpr int kCandidateRows = 256;
constexpr long long kTSetCap = 100'000;
constexpr int kTraceTSetCap = 512;
constexpr int kIdentityCheckCap = 16;

// Columns of a matrix as row-indexed bitsets, computed on demand.
class ColumnCache {
public:
    explicit ColumnCache(const Matrix01& m)
        : m_(m), cols_(m.n_cols()), ready_(m.n_cols(), 0) {}

    const BitVec& get(int j) {
        if (!ready_[j]) {
            cols_[j] = m_.column(j);
            ready_[j] = 1;
        }
        return cols_[j];
    }

private:
    const Matrix01& m_;
    std::vector<BitVec> cols_;
    std::vector<char> ready_;
};

BitVec common_rows(ColumnCache& cache, const std::vector<int>& tset) {
    BitVec common = cache.get(tset[0]);
    for (size_t i = 1; i < tset.size(); ++i) common &= cache.get(tset[i]);
    return common;
}

// Per-(r, params) interval chain; only steps where the surviving block
// actually changes can shrink anything.
struct StepGeometry {
    std::vector<RowInterval> intervals;  // R_0..R_s
    struct ActiveStep {
        int j;
        RowInterval prev, cur;
    };
    std::vector<ActiveStep> active;

    static StepGeometry compute(int r, int n, const ProcessParams& params) {
        StepGeometry g;
        g.intervals.reserve(params.s + 1);
        for (int j = 0; j <= params.s; ++j)
            g.intervals.push_back(surviving_rows(r, j, n, params));
        for (int j = 1; j <= params.s; ++j)
            if (!(g.intervals[j] == g.intervals[j - 1]))
                g.active.push_back({j, g.intervals[j - 1], g.intervals[j]});
        return g;
    }
};

struct TSetScore {
    int shrinking = 0;
    int up = 0;
    int down = 0;
};

TSetScore score_tset(const BitVec& common, const StepGeometry& g) {
    TSetScore sc;
    for (const auto& st : g.active) {
        bool above = st.cur.lo > st.prev.lo && common.any_in(st.prev.lo, st.cur.lo - 1);
        bool below = st.cur.hi < st.prev.hi && common.any_in(st.cur.hi + 1, st.prev.hi);
        if (above || below) {
            ++sc.shrinking;
            above ? ++sc.up : ++sc.down;
        }
    }
    return sc;
}

void finish_color(TSetClassification& c, const ProcessParams& params) {
    c.good = c.shrinking_steps >= 2 * params.a;
    if (!c.good) return;
    int up = 0, down = 0;
    for (int j = 1; j <= params.s; ++j) {
        if (c.type[j - 1] != StepType::Shrinking) continue;
        c.subtype[j - 1] == Subtype::Up ? ++up : ++down;
    }
    c.z = up > down ? Subtype::Up : Subtype::Down;  // ties prefer down
    c.steps.clear();
    for (int j = params.s; j >= 1 && static_cast<int>(c.steps.size()) < params.a; --j)
        if (c.type[j - 1] == StepType::Shrinking && c.subtype[j - 1] == c.z)
            c.steps.push_back(j);
    if (static_cast<int>(c.steps.size()) < params.a) {  // cannot happen when 2a shrink
        c.good = false;
        c.z = Subtype::None;
        c.steps.clear();
    }
}

TSetClassification classify_with(const BitVec& common, const std::vector<int>& tset,
                                 const StepGeometry& g, const ProcessParams& params) {
    TSetClassification c;
    c.cols = tset;
    c.type.assign(params.s, StepType::NonShrinking);
    c.subtype.assign(params.s, Subtype::None);
    c.witness_row.assign(params.s, -1);
    c.common_in_block.assign(params.s + 1, 0);
    c.common_in_block[0] = common.count();
    size_t next_active = 0;
    for (int j = 1; j <= params.s; ++j) {
        if (next_active >= g.active.size() || g.active[next_active].j != j) {
            c.common_in_block[j] = c.common_in_block[j - 1];
            continue;
        }
        const auto& st = g.active[next_active++];
        c.common_in_block[j] = common.count_in(st.cur.lo, st.cur.hi);
        int above = st.cur.lo > st.prev.lo ? common.find_first_in(st.prev.lo, st.cur.lo - 1) : -1;
        int below = st.cur.hi < st.prev.hi ? common.find_first_in(st.cur.hi + 1, st.prev.hi) : -1;
        if (above < 0 && below < 0) continue;
        c.type[j - 1] = StepType::Shrinking;
        c.subtype[j - 1] = above >= 0 ? Subtype::Up : Subtype::Down;
        c.witness_row[j - 1] = above >= 0 ? above : below;
        ++c.shrinking_steps;
    }
    finish_color(c, params);
    return c;
}

uint64_t hash_tset(const std::vector<int>& tset) {
    uint64_t h = 0xCBF29CE484222325ull;
    for (int v : tset) {
        h ^= static_cast<uint64_t>(v) + 0x9E3779B97F4A7C15ull;
        h *= 0x100000001B3ull;
    }
    return h;
}

struct VecHash {
    size_t operator()(const std::vector<int>& v) const { return hash_tset(v); }
};

}  // namespace

const char* to_string(StepType t) {
    return t == StepType::Shrinking ? "shrinking" : "non-shrinking";
}

const char* to_string(Subtype z) {
    switch (z) {
        case Subtype::Up: return "up";
        case Subtype::Down: return "down";
        case Subtype::None: return "-";
    }
    return "?";
}

ProcessParams ProcessParams::general(int n, int a, int t, double epsilon, uint64_t seed) {
    if (n < 1) throw ArgumentError("n must be at least 1");
    if (a < 1 || t < 1) throw ArgumentError("pattern must have rows and 1-entries");
    if (!(epsilon > 0.0 && epsilon < 0.1))
        throw ArgumentError("epsilon must lie in (0, 1/10)");
    ProcessParams p;
    p.epsilon = epsilon;
    p.a = a;
    p.t = t;
    p.seed = seed;
    p.s = static_cast<int>(std::ceil(4.0 * a / epsilon));
    if (p.s < 1 || p.s > kMaxSteps) throw ArgumentError("step count out of range");
    p.k = 1;
    while (saturating_pow(p.k, p.s) < n) ++p.k;  // smallest k with k^s >= n
    return p;
}

ProcessParams ProcessParams::column_partite(int n, int a, int t, uint64_t seed) {
    if (n < 1) throw ArgumentError("n must be at least 1");
    if (a < 1 || t < 1) throw ArgumentError("pattern must have rows and 1-entries");
    ProcessParams p;
    p.a = a;
    p.t = t;
    p.seed = seed;
    p.k = 2;
    p.s = 1;
    while (saturating_pow(2, p.s) < n) ++p.s;
    return p;
}

long long ProcessParams::block_size(int j) const { return saturating_pow(k, s - j); }

std::vector<int> kary_digits(long long i, long long k, int s) {
    if (k < 1 || s < 1) throw ArgumentError("k and s must be positive");
    if (i < 0 || i >= saturating_pow(k, s))
        throw ArgumentError("row index out of range for k^s");
    std::vector<int> digits(s, 0);
    long long rest = i;
    for (int j = s - 1; j >= 0; --j) {
        digits[j] = static_cast<int>(rest % k);
        rest /= k;
    }
    return digits;
}

RowInterval surviving_rows(int r, int j, int n, const ProcessParams& params) {
    if (r < 0 || r >= n) throw ArgumentError("base row out of range");
    if (j < 0 || j > params.s) throw ArgumentError("step index out of range");
    long long p = params.block_size(j);
    long long lo = (static_cast<long long>(r) / p) * p;
    long long hi = std::min<long long>(n - 1, lo + p - 1);
    return RowInterval{static_cast<int>(lo), static_cast<int>(hi)};
}

TSetClassification classify_steps(const Matrix01& m, int r, const std::vector<int>& tset,
                                  const ProcessParams& params) {
    if (tset.empty()) throw ArgumentError("t-set must not be empty");
    for (size_t i = 1; i < tset.size(); ++i)
        if (tset[i] <= tset[i - 1]) throw ArgumentError("t-set must be strictly ascending");
    for (int c : tset)
        if (c < 0 || c >= m.n_cols() || !m.get(r, c))
            throw ArgumentError("base row must have 1-entries in every t-set column");
    ColumnCache cache(m);
    BitVec common = common_rows(cache, tset);
    StepGeometry g = StepGeometry::compute(r, m.n_rows(), params);
    return classify_with(common, tset, g, params);
}

int RootedTree::add_child(int parent, int label) {
    int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    nodes[id].parent = parent;
    nodes[parent].children.emplace_back(label, id);
    return id;
}

int RootedTree::child_with_label(int v, int label) const {
    for (const auto& [lab, child] : nodes[v].children)
        if (lab == label) return child;
    return -1;
}

RootedTree build_prefix_tree(const std::vector<int>& rows, long long k, int s) {
    RootedTree tree;
    std::vector<int> sorted(rows);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (int i : sorted) {
        std::vector<int> digits = kary_digits(i, k, s);
        int node = 0;
        for (int d : digits) {
            int child = tree.child_with_label(node, d);
            node = child >= 0 ? child : tree.add_child(node, d);
        }
    }
    return tree;
}

long long count_leaves_few_branching(const RootedTree& tree, int m) {
    long long count = 0;
    // DFS carrying the number of branching ancestors.
    std::vector<std::pair<int, int>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [v, branching] = stack.back();
        stack.pop_back();
        if (tree.is_leaf(v)) {
            if (v != 0 && branching <= m) ++count;
            continue;
        }
        int below = branching + (tree.is_branching(v) ? 1 : 0);
        for (const auto& [label, child] : tree.nodes[v].children)
            stack.emplace_back(child, below);
    }
    return count;
}

std::vector<bool> branching_flags_along(const RootedTree& tree, const std::vector<int>& digits) {
    std::vector<bool> flags;
    flags.reserve(digits.size());
    int node = 0;
    for (int d : digits) {
        flags.push_back(tree.is_branching(node));
        node = tree.child_with_label(node, d);
        if (node < 0) throw ArgumentError("digit path not present in prefix tree");
    }
    return flags;
}

BaseRowChoice select_base_row(const Matrix01& m, int t, const ProcessParams& params) {
    int n = m.n_rows();
    if (n < 1 || m.n_cols() < 1) throw ArgumentError("matrix must be nonempty");
    if (t < 1) throw ArgumentError("t must be at least 1");

    Rng rng = Rng::derive(params.seed, kStreamSelectBaseRow);
    std::vector<int> candidates;
    std::vector<char> seen(n, 0);
    int draws = std::min(n, kCandidateRows);
    for (int d = 0; d < draws; ++d) {
        int r = static_cast<int>(rng.uniform(static_cast<uint64_t>(n)));
        if (!seen[r]) {
            seen[r] = 1;
            candidates.push_back(r);
        }
    }

    ColumnCache cache(m);
    int best_row = -1;
    long long best_good = -1;
    for (int r : candidates) {
        std::vector<int> columns = m.row(r).to_indices();
        if (columns.empty()) continue;
        long long good = 0;
        int c = static_cast<int>(columns.size());
        if (c >= t) {
            StepGeometry g = StepGeometry::compute(r, n, params);
            std::vector<int> comb(t);
            for (int i = 0; i < t; ++i) comb[i] = i;
            long long enumerated = 0;
            do {
                if (++enumerated > kTSetCap) break;
                std::vector<int> tset(t);
                for (int i = 0; i < t; ++i) tset[i] = columns[comb[i]];
                BitVec common = common_rows(cache, tset);
                TSetScore sc = score_tset(common, g);
                if (sc.shrinking >= 2 * params.a) ++good;
            } while (next_combination(comb, c));
        }
        if (good > best_good) {
            best_good = good;
            best_row = r;
        }
    }
    if (best_row < 0)
        throw NoBaseRowError("every sampled row has no 1-entries");

    // Full classification for the winning row only.
    BaseRowChoice choice;
    choice.r = best_row;
    choice.columns = m.row(best_row).to_indices();
    choice.good_count = 0;
    int c = static_cast<int>(choice.columns.size());
    if (c >= t) {
        StepGeometry g = StepGeometry::compute(best_row, n, params);
        std::vector<int> comb(t);
        for (int i = 0; i < t; ++i) comb[i] = i;
        long long enumerated = 0;
        do {
            if (++enumerated > kTSetCap) {
                choice.truncated = true;
                break;
            }
            std::vector<int> tset(t);
            for (int i = 0; i < t; ++i) tset[i] = choice.columns[comb[i]];
            BitVec common = common_rows(cache, tset);
            choice.tsets.push_back(classify_with(common, tset, g, params));
            if (choice.tsets.back().good) ++choice.good_count;
        } while (next_combination(comb, c));
    }
    return choice;
}

ColorFamily ColorFamily::from_choice(const BaseRowChoice& choice, int t) {
    ColorFamily family;
    family.t = t;
    family.ground = choice.columns;
    std::map<std::pair<int, std::vector<int>>, int> palette_index;
    for (const auto& cls : choice.tsets) {
        if (!cls.good) continue;
        auto key = std::make_pair(static_cast<int>(cls.z), cls.steps);
        auto [it, fresh] = palette_index.emplace(key, static_cast<int>(family.palette.size()));
        if (fresh) family.palette.push_back(ShrinkColor{cls.z, cls.steps});
        family.tsets.push_back(cls.cols);
        family.color.push_back(it->second);
    }
    return family;
}

namespace {

// Color class ids ordered largest class first; id order breaks ties.
std::vector<int> class_order(const ColorFamily& family, std::vector<long long>& sizes) {
    sizes.assign(family.palette.size(), 0);
    for (int c : family.color) ++sizes[c];
    std::vector<int> order(family.palette.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return sizes[a] > sizes[b]; });
    return order;
}

struct CliqueSearch {
    const std::unordered_set<std::vector<int>, VecHash>& members;
    const std::vector<int>& candidates;
    int t, b;
    long long* budget;
    std::vector<int> chosen;

    bool extendable(int c) {
        int have = static_cast<int>(chosen.size());
        if (have < t - 1) return true;
        std::vector<int> idx(t - 1);
        for (int i = 0; i < t - 1; ++i) idx[i] = i;
        do {
            std::vector<int> probe(t);
            for (int i = 0; i < t - 1; ++i) probe[i] = chosen[idx[i]];
            probe[t - 1] = c;
            std::sort(probe.begin(), probe.end());
            if (!members.count(probe)) return false;
        } while (next_combination(idx, have));
        return true;
    }

    bool search(size_t start) {
        if (static_cast<int>(chosen.size()) == b) return true;
        for (size_t i = start; i < candidates.size(); ++i) {
            if (--*budget < 0) return false;
            int c = candidates[i];
            if (!extendable(c)) continue;
            chosen.push_back(c);
            if (search(i + 1)) return true;
            chosen.pop_back();
        }
        return false;
    }
};

}  // namespace

std::optional<Extraction> extract_monochromatic(const ColorFamily& family, int b,
                                                long long budget) {
    if (b < 1) throw ArgumentError("target size must be at least 1");
    if (static_cast<int>(family.ground.size()) < b) return std::nullopt;

    std::vector<long long> sizes;
    std::vector<int> order = class_order(family, sizes);
    for (int color : order) {
        if (sizes[color] == 0) continue;
        std::unordered_set<std::vector<int>, VecHash> members;
        std::vector<int> candidates;
        {
            std::vector<char> present;
            for (size_t i = 0; i < family.tsets.size(); ++i) {
                if (family.color[i] != color) continue;
                members.insert(family.tsets[i]);
                for (int c : family.tsets[i]) {
                    if (present.size() <= static_cast<size_t>(c)) present.resize(c + 1, 0);
                    if (!present[c]) {
                        present[c] = 1;
                        candidates.push_back(c);
                    }
                }
            }
            std::sort(candidates.begin(), candidates.end());
        }
        if (static_cast<int>(candidates.size()) < b) continue;
        CliqueSearch search{members, candidates, family.t, b, &budget, {}};
        if (search.search(0)) return Extraction{search.chosen, color};
        if (budget < 0) return std::nullopt;
    }
    return std::nullopt;
}

namespace {

struct ProductSearch {
    const std::unordered_set<std::vector<int>, VecHash>& members;
    const std::vector<int>& ground;
    const std::vector<int>& widths;
    long long* budget;
    std::vector<std::vector<int>> parts;

    bool transversals_ok(int c) {
        // c is being added to the last part; check every transversal it
        // completes against the color class.
        int t = static_cast<int>(widths.size());
        std::vector<int> probe(t);
        probe[t - 1] = c;
        std::vector<size_t> pick(t - 1, 0);
        for (;;) {
            for (int i = 0; i < t - 1; ++i) probe[i] = parts[i][pick[i]];
            std::vector<int> sorted(probe);
            std::sort(sorted.begin(), sorted.end());
            if (!members.count(sorted)) return false;
            int i = t - 2;
            while (i >= 0 && ++pick[i] == parts[i].size()) pick[i--] = 0;
            if (i < 0) break;
        }
        return true;
    }

    bool search(int part, int fill, size_t start) {
        int t = static_cast<int>(widths.size());
        if (fill == widths[part]) {
            if (part + 1 == t) return true;
            parts.emplace_back();
            if (search(part + 1, 0, start)) return true;
            parts.pop_back();
            return false;
        }
        for (size_t i = start; i < ground.size(); ++i) {
            if (--*budget < 0) return false;
            int c = ground[i];
            if (part == t - 1 && !transversals_ok(c)) continue;
            parts[part].push_back(c);
            if (search(part, fill + 1, i + 1)) return true;
            parts[part].pop_back();
        }
        return false;
    }
};

}  // namespace

std::optional<ProductExtraction> extract_product(const ColorFamily& family,
                                                 const std::vector<int>& widths,
                                                 long long budget) {
    if (widths.empty() || static_cast<int>(widths.size()) != family.t)
        throw ArgumentError("widths must match the family arity");
    long long total = 0;
    for (int w : widths) {
        if (w < 1) throw ArgumentError("part widths must be positive");
        total += w;
    }
    if (total > static_cast<long long>(family.ground.size())) return std::nullopt;

    std::vector<long long> sizes;
    std::vector<int> order = class_order(family, sizes);
    for (int color : order) {
        if (sizes[color] == 0) continue;
        std::unordered_set<std::vector<int>, VecHash> members;
        for (size_t i = 0; i < family.tsets.size(); ++i)
            if (family.color[i] == color) members.insert(family.tsets[i]);
        ProductSearch search{members, family.ground, widths, &budget, {}};
        search.parts.emplace_back();
        if (search.search(0, 0, 0)) return ProductExtraction{search.parts, color};
        if (budget < 0) return std::nullopt;
    }
    return std::nullopt;
}

Embedding assemble_embedding(const Matrix01& m, const Pattern& padded,
                             const std::vector<int>& cols, Subtype z,
                             const std::vector<int>& steps_desc, int r,
                             const ProcessParams& params) {
    int n = m.n_rows();
    int a = padded.n_rows();
    if (z == Subtype::None) throw ArgumentError("assembly needs an up or down subtype");
    if (static_cast<int>(steps_desc.size()) != a)
        throw ArgumentError("need one step per pattern row");
    for (size_t i = 0; i < steps_desc.size(); ++i) {
        if (steps_desc[i] < 1 || steps_desc[i] > params.s)
            throw ArgumentError("step index out of range");
        if (i > 0 && steps_desc[i] >= steps_desc[i - 1])
            throw ArgumentError("steps must be strictly decreasing");
    }
    if (static_cast<int>(cols.size()) != padded.n_cols())
        throw ArgumentError("column set size must match the pattern");

    if (z == Subtype::Up) {
        Matrix01 mirrored = m.mirrored_vertical();
        Pattern mirrored_pattern = Pattern::unchecked(padded.matrix().mirrored_vertical());
        Embedding down = assemble_embedding(mirrored, mirrored_pattern, cols, Subtype::Down,
                                            steps_desc, n - 1 - r, params);
        std::vector<int> rows(a);
        for (int u = 0; u < a; ++u) rows[u] = n - 1 - down.row_map[a - 1 - u];
        Embedding out{rows, cols};
        if (!out.valid_for(m, padded))
            throw InternalConsistencyError("un-mirrored embedding failed validation");
        return out;
    }

    std::vector<int> rows(a, -1);
    for (int u = 0; u < a; ++u) {
        int j = steps_desc[u];
        RowInterval prev = surviving_rows(r, j - 1, n, params);
        RowInterval cur = surviving_rows(r, j, n, params);
        std::vector<int> needed;
        for (int y = 0; y < padded.n_cols(); ++y)
            if (padded.matrix().get(u, y)) needed.push_back(cols[y]);
        int found = -1;
        for (int i = cur.hi + 1; i <= prev.hi && found < 0; ++i) {
            bool all = true;
            for (int c : needed)
                if (!m.get(i, c)) { all = false; break; }
            if (all) found = i;
        }
        if (found < 0)
            throw InternalConsistencyError("no departing row below the surviving block");
        rows[u] = found;
    }
    for (int u = 1; u < a; ++u)
        if (rows[u] <= rows[u - 1])
            throw InternalConsistencyError("assembled rows are not increasing");
    Embedding out{rows, cols};
    if (!out.valid_for(m, padded))
        throw InternalConsistencyError("assembled embedding failed validation");
    return out;
}

Pattern pad_pattern(const Pattern& pattern) {
    const Matrix01& a = pattern.matrix();
    int t = pattern.t();
    long long missing = 0;
    for (int u = 0; u < a.n_rows(); ++u) missing += t - a.row_weight(u);
    if (missing == 0) return Pattern::unchecked(a, pattern.column_cut());

    Matrix01 padded(a.n_rows(), a.n_cols() + static_cast<int>(missing));
    for (int u = 0; u < a.n_rows(); ++u)
        for (int y = 0; y < a.n_cols(); ++y)
            if (a.get(u, y)) padded.set(u, y, true);
    int next = a.n_cols();
    for (int u = 0; u < a.n_rows(); ++u)
        for (long long d = a.row_weight(u); d < t; ++d) padded.set(u, next++, true);
    return Pattern::unchecked(std::move(padded));
}

PaddedPartite pad_column_partite(const Pattern& pattern) {
    if (!pattern.column_cut())
        throw ArgumentError("pattern carries no column cut");
    const Matrix01& a = pattern.matrix();
    const std::vector<int>& widths = *pattern.column_cut();
    int parts = static_cast<int>(widths.size());

    std::vector<std::vector<int>> deficient(parts);
    int start = 0;
    for (int p = 0; p < parts; ++p) {
        for (int u = 0; u < a.n_rows(); ++u)
            if (a.row(u).count_in(start, start + widths[p] - 1) == 0)
                deficient[p].push_back(u);
        start += widths[p];
    }

    long long added = 0;
    for (const auto& d : deficient) added += static_cast<long long>(d.size());
    std::vector<int> original(a.n_cols());
    if (added == 0) {
        for (int y = 0; y < a.n_cols(); ++y) original[y] = y;
        return PaddedPartite{Pattern::unchecked(a, widths), original};
    }

    Matrix01 padded(a.n_rows(), a.n_cols() + static_cast<int>(added));
    std::vector<int> new_widths(parts);
    int src = 0, dst = 0;
    for (int p = 0; p < parts; ++p) {
        for (int w = 0; w < widths[p]; ++w, ++src, ++dst) {
            original[src] = dst;
            for (int u = 0; u < a.n_rows(); ++u)
                if (a.get(u, src)) padded.set(u, dst, true);
        }
        for (int u : deficient[p]) padded.set(u, dst++, true);
        new_widths[p] = widths[p] + static_cast<int>(deficient[p].size());
    }
    return PaddedPartite{Pattern::unchecked(std::move(padded), new_widths), original};
}

std::string StepTrace::serialize() const {
    std::ostringstream out;
    out << "zomat-trace v1\n";
    out << "n: " << n << "\n";
    out << "k: " << k << "\n";
    out << "s: " << s << "\n";
    out << "r: " << r << "\n";
    out << "columns:";
    for (int c : columns) out << ' ' << c;
    out << "\n";
    out << "tsets-total: " << tsets_total << "\n";
    out << "tsets-tracked: " << tsets.size() << "\n";
    // Interval lines only where the surviving block changes.
    for (size_t j = 0; j < intervals.size(); ++j) {
        if (j > 0 && intervals[j] == intervals[j - 1]) continue;
        out << "interval: j=" << j << " lo=" << intervals[j].lo
            << " hi=" << intervals[j].hi << "\n";
    }
    auto cols_str = [](const std::vector<int>& cols) {
        std::ostringstream cs;
        for (size_t i = 0; i < cols.size(); ++i) {
            if (i) cs << ',';
            cs << cols[i];
        }
        return cs.str();
    };
    for (const auto& ts : tsets) {
        out << "tset: cols=" << cols_str(ts.cols) << " shrinking=" << ts.shrinking_steps
            << " good=" << (ts.good ? 1 : 0) << " z=" << to_string(ts.z) << " J=";
        if (ts.steps.empty()) out << '-';
        for (size_t i = 0; i < ts.steps.size(); ++i) {
            if (i) out << ',';
            out << ts.steps[i];
        }
        out << "\n";
        for (int j = 1; j <= s; ++j) {
            if (ts.type[j - 1] != StepType::Shrinking) continue;
            out << "event: cols=" << cols_str(ts.cols) << " j=" << j
                << " subtype=" << to_string(ts.subtype[j - 1])
                << " witness=" << ts.witness_row[j - 1]
                << " N=" << ts.common_in_block[j] << "\n";
        }
    }
    return out.str();
}

namespace {

StepTrace build_trace(const BaseRowChoice& choice, const Matrix01& m,
                      const ProcessParams& params) {
    StepTrace trace;
    trace.n = m.n_rows();
    trace.k = params.k;
    trace.s = params.s;
    trace.r = choice.r;
    trace.columns = choice.columns;
    StepGeometry g = StepGeometry::compute(choice.r, m.n_rows(), params);
    trace.intervals = g.intervals;
    trace.tsets_total = static_cast<long long>(choice.tsets.size());
    int keep = std::min<int>(kTraceTSetCap, static_cast<int>(choice.tsets.size()));
    trace.tsets.assign(choice.tsets.begin(), choice.tsets.begin() + keep);
    return trace;
}

PipelineResult finish_with_fallback(const Matrix01& m, const Pattern& pattern,
                                    PipelineResult result) {
    result.embedding = find_embedding(m, pattern);
    result.via_pipeline = false;
    return result;
}

}  // namespace

PipelineResult embed_via_pipeline(const Matrix01& m, const Pattern& pattern, double epsilon,
                                  uint64_t seed, int retry_budget) {
    if (m.n_rows() != m.n_cols())
        throw ArgumentError("pipeline host matrix must be square");
    if (!(epsilon > 0.0 && epsilon < 0.1))
        throw ArgumentError("epsilon must lie in (0, 1/10)");
    if (retry_budget < 0) throw ArgumentError("retry budget must be non-negative");

    PipelineResult result;
    if (pattern.matrix().weight() == 0 || m.weight() == 0)
        return finish_with_fallback(m, pattern, std::move(result));

    Pattern padded = pad_pattern(pattern);
    int n = m.n_rows();
    int a = padded.n_rows();
    int t = padded.t();
    int original_cols = pattern.n_cols();

    for (int attempt = 0; attempt < retry_budget; ++attempt) {
        ++result.attempts;
        uint64_t sub_seed = Rng::derive(seed, kStreamAttempt, attempt).next_u64();
        ProcessParams params = ProcessParams::general(n, a, t, epsilon, sub_seed);
        BaseRowChoice choice;
        try {
            choice = select_base_row(m, t, params);
        } catch (const NoBaseRowError&) {
            continue;
        }
        result.trace = build_trace(choice, m, params);
        ColorFamily family = ColorFamily::from_choice(choice, t);
        auto extraction = extract_monochromatic(family, padded.n_cols());
        if (!extraction) continue;
        const ShrinkColor& color = family.palette[extraction->color];
        Embedding emb;
        try {
            emb = assemble_embedding(m, padded, extraction->cols, color.z, color.steps,
                                     choice.r, params);
        } catch (const InternalConsistencyError&) {
            continue;
        }
        Embedding restricted{emb.row_map,
                             {emb.col_map.begin(), emb.col_map.begin() + original_cols}};
        if (restricted.valid_for(m, pattern)) {
            result.embedding = std::move(restricted);
            result.via_pipeline = true;
            return result;
        }
    }
    return finish_with_fallback(m, pattern, std::move(result));
}

PipelineResult embed_column_t_partite(const Matrix01& m, const Pattern& pattern,
                                      uint64_t seed, int retry_budget) {
    if (!pattern.column_cut())
        throw ArgumentError("column-t-partite pipeline needs a pattern with a column cut");
    if (m.n_rows() != m.n_cols())
        throw ArgumentError("pipeline host matrix must be square");
    if (retry_budget < 0) throw ArgumentError("retry budget must be non-negative");

    PipelineResult result;
    if (pattern.matrix().weight() == 0 || m.weight() == 0)
        return finish_with_fallback(m, pattern, std::move(result));

    PaddedPartite padded = pad_column_partite(pattern);
    const std::vector<int>& widths = *padded.pattern.column_cut();
    int n = m.n_rows();
    int a = padded.pattern.n_rows();
    int t = static_cast<int>(widths.size());

    for (int attempt = 0; attempt < retry_budget; ++attempt) {
        ++result.attempts;
        uint64_t sub_seed = Rng::derive(seed, kStreamAttempt, attempt).next_u64();
        ProcessParams params = ProcessParams::column_partite(n, a, t, sub_seed);
        BaseRowChoice choice;
        try {
            choice = select_base_row(m, t, params);
        } catch (const NoBaseRowError&) {
            continue;
        }
        result.trace = build_trace(choice, m, params);
        ColorFamily family = ColorFamily::from_choice(choice, t);
        auto extraction = extract_product(family, widths);
        if (!extraction) continue;
        std::vector<int> cols;
        for (const auto& part : extraction->parts)
            cols.insert(cols.end(), part.begin(), part.end());
        const ShrinkColor& color = family.palette[extraction->color];
        Embedding emb;
        try {
            emb = assemble_embedding(m, padded.pattern, cols, color.z, color.steps,
                                     choice.r, params);
        } catch (const InternalConsistencyError&) {
            continue;
        }
        std::vector<int> restricted_cols(pattern.n_cols());
        for (int y = 0; y < pattern.n_cols(); ++y)
            restricted_cols[y] = emb.col_map[padded.original_columns[y]];
        Embedding restricted{emb.row_map, restricted_cols};
        if (restricted.valid_for(m, pattern)) {
            result.embedding = std::move(restricted);
            result.via_pipeline = true;
            return result;
        }
    }
    return finish_with_fallback(m, pattern, std::move(result));
}

PipelineStats pipeline_stats(const Matrix01& m, const Pattern& pattern, double epsilon,
                             int samples, uint64_t seed, StatsVariant variant) {
    if (samples < 1) throw ArgumentError("samples must be at least 1");
    int n = m.n_rows();
    if (n < 1 || m.n_cols() < 1) throw ArgumentError("matrix must be nonempty");
    int a = pattern.n_rows();
    int t = pattern.t();
    if (t < 1) throw ArgumentError("pattern has no 1-entries");

    ProcessParams params = variant == StatsVariant::General
                               ? ProcessParams::general(n, a, t, epsilon, seed)
                               : ProcessParams::column_partite(n, a, t, seed);

    PipelineStats stats;
    stats.n = n;
    stats.variant = variant;
    stats.samples = samples;
    stats.heavy_threshold = variant == StatsVariant::General
                                ? std::pow(n, epsilon / 2.0)
                                : 5.0 * std::pow(2.0, 2 * a - 1);
    stats.bound = std::pow(static_cast<double>(params.k), 2 * a - 1) / stats.heavy_threshold;
    stats.bound_applicable = stats.bound < 1.0;
    stats.shrink_histogram.assign(params.s + 1, 0);

    ColumnCache cache(m);
    Rng rng = Rng::derive(seed, kStreamStats);
    std::unordered_set<std::vector<int>, VecHash> heavy_checked;
    long long column_total = 0;

    for (int sample = 0; sample < samples; ++sample) {
        int r = static_cast<int>(rng.uniform(static_cast<uint64_t>(n)));
        std::vector<int> columns = m.row(r).to_indices();
        column_total += static_cast<long long>(columns.size());
        if (columns.empty()) continue;
        ++stats.samples_with_columns;
        int c = static_cast<int>(columns.size());
        if (c < t) continue;

        StepGeometry g = StepGeometry::compute(r, n, params);
        std::vector<int> comb(t);
        for (int i = 0; i < t; ++i) comb[i] = i;
        long long enumerated = 0;
        int identity_done = 0;
        do {
            if (++enumerated > kTSetCap) break;
            std::vector<int> tset(t);
            for (int i = 0; i < t; ++i) tset[i] = columns[comb[i]];
            BitVec common = common_rows(cache, tset);
            long long common_total = common.count();
            TSetScore sc = score_tset(common, g);

            ++stats.tsets_seen;
            bool heavy = static_cast<double>(common_total) > stats.heavy_threshold;
            heavy ? ++stats.heavy : ++stats.light;
            bool bad = sc.shrinking < 2 * params.a;
            bad ? ++stats.bad : ++stats.good;
            if (heavy && bad) ++stats.heavy_and_bad;
            ++stats.shrink_histogram[sc.shrinking];

            if (heavy && !heavy_checked.count(tset)) {
                heavy_checked.insert(tset);
                ++stats.heavy_sets_checked;
                // Exact conditional frequency: over every base row in the
                // common set, how often does this t-set come out bad?
                long long bad_makers = 0;
                for (int i = common.next_set(0); i >= 0; i = common.next_set(i + 1)) {
                    StepGeometry gi = StepGeometry::compute(i, n, params);
                    if (score_tset(common, gi).shrinking < 2 * params.a) ++bad_makers;
                }
                double freq = static_cast<double>(bad_makers) / static_cast<double>(common_total);
                if (stats.bound_applicable && freq > stats.bound) ++stats.bound_violations;
            }

            if (identity_done < kIdentityCheckCap) {
                ++identity_done;
                ++stats.identity_checks;
                RootedTree tree = build_prefix_tree(common.to_indices(), params.k, params.s);
                std::vector<bool> flags =
                    branching_flags_along(tree, kary_digits(r, params.k, params.s));
                TSetClassification cls = classify_with(common, tset, g, params);
                for (int j = 1; j <= params.s; ++j) {
                    bool shrink = cls.type[j - 1] == StepType::Shrinking;
                    if (shrink != static_cast<bool>(flags[j - 1])) {
                        ++stats.identity_failures;
                        break;
                    }
                }
            }
        } while (next_combination(comb, c));
    }
    stats.mean_columns = static_cast<double>(column_total) / static_cast<double>(samples);
    return stats;
}

}  // namespace zomat
