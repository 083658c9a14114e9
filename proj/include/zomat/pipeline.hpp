#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zomat/matrix.hpp"
#include "zomat/rng.hpp"

namespace zomat {

// ---------------------------------------------------------------------------
// Randomized embedding process.
//
// Row indices carry base-k representations of length s (most significant
// digit first). Fixing a base row r, step j keeps the rows whose first j
// digits agree with r's: R_0 ⊇ R_1 ⊇ ... ⊇ R_s = {r}. For a t-set e of
// columns all lit in row r, step j is "shrinking" when some row with 1s in
// every column of e drops out of the surviving block at that step; the
// departing row sits either above (subtype up) or below (subtype down) the
// surviving block. Column sets whose t-sets shrink often enough and agree on
// a subtype/step-set color yield an embedding row by row from the departed
// blocks.
//
// Step indices are 1-based throughout (step j transitions R_{j-1} -> R_j);
// per-step vectors of length s store step j at position j-1.
// ---------------------------------------------------------------------------

struct ProcessParams {
    double epsilon = 0.05;  // only meaningful for the general variant
    int a = 1;              // pattern rows; goodness threshold is 2a
    int t = 1;              // column t-set arity
    int s = 1;              // refinement steps
    long long k = 2;        // branching factor
    uint64_t seed = 0;

    static constexpr int kMaxSteps = 4096;

    // s = ceil(4a/epsilon), k = ceil(n^(1/s)).
    static ProcessParams general(int n, int a, int t, double epsilon, uint64_t seed);

    // k = 2, s = ceil(log2 n) (at least 1).
    static ProcessParams column_partite(int n, int a, int t, uint64_t seed);

    long long block_size(int j) const;  // k^(s-j), saturated
};

// Digits sigma_1..sigma_s of i in base k, most significant first.
std::vector<int> kary_digits(long long i, long long k, int s);

// Inclusive row interval; R_j clamped to the live rows [0, n).
struct RowInterval {
    int lo, hi;
    friend bool operator==(RowInterval a, RowInterval b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
};

RowInterval surviving_rows(int r, int j, int n, const ProcessParams& params);

enum class StepType : uint8_t { NonShrinking, Shrinking };
enum class Subtype : uint8_t { None, Up, Down };

const char* to_string(StepType t);
const char* to_string(Subtype z);

struct TSetClassification {
    std::vector<int> cols;               // the t-set, ascending
    std::vector<StepType> type;          // length s
    std::vector<Subtype> subtype;        // length s; None when non-shrinking
    std::vector<int> witness_row;        // departing common row, -1 when none
    std::vector<long long> common_in_block;  // N_j for j = 0..s
    int shrinking_steps = 0;
    bool good = false;            // at least 2a shrinking steps
    Subtype z = Subtype::None;    // color subtype (good sets only)
    std::vector<int> steps;       // color step set J, descending, |J| = a
};

// Per-step classification of one t-set against base row r. Requires
// M(r,c) = 1 for every c in the t-set.
TSetClassification classify_steps(const Matrix01& m, int r, const std::vector<int>& tset,
                                  const ProcessParams& params);

// ---------------------------------------------------------------------------
// Prefix trees over k-ary representations.
// ---------------------------------------------------------------------------

struct RootedTree {
    struct Node {
        int parent = -1;
        std::vector<std::pair<int, int>> children;  // (edge label, child id)
    };
    std::vector<Node> nodes;  // node 0 is the root

    RootedTree() { nodes.emplace_back(); }
    int add_child(int parent, int label);
    bool is_leaf(int v) const { return nodes[v].children.empty(); }
    bool is_branching(int v) const { return nodes[v].children.size() >= 2; }
    int child_with_label(int v, int label) const;
};

// Trie of the digit strings of the given rows: root is the empty prefix,
// leaves at depth s are exactly the distinct sigma(i). Empty input gives the
// single-node tree.
RootedTree build_prefix_tree(const std::vector<int>& rows, long long k, int s);

// Non-root leaves whose ancestors (root included, leaf excluded) contain at
// most m branching nodes.
long long count_leaves_few_branching(const RootedTree& tree, int m);

// flags[d]: the depth-d node reached by digits[0..d) is branching. Requires
// the digit path to exist in the tree.
std::vector<bool> branching_flags_along(const RootedTree& tree, const std::vector<int>& digits);

// ---------------------------------------------------------------------------
// Base row selection and monochromatic extraction.
// ---------------------------------------------------------------------------

struct BaseRowChoice {
    int r = -1;
    std::vector<int> columns;                 // C: columns lit in row r
    std::vector<TSetClassification> tsets;    // every t-set of C (capped)
    long long good_count = 0;
    bool truncated = false;                   // t-set enumeration cap was hit
};

// Samples min(n, 256) row labels uniformly under the seed, classifies every
// t-set of each candidate's lit columns, and returns the candidate with the
// most good t-sets (earlier sample wins ties). Throws NoBaseRowError when
// every sampled row has no 1-entries.
class NoBaseRowError : public std::runtime_error {
public:
    explicit NoBaseRowError(const std::string& what) : std::runtime_error(what) {}
};

BaseRowChoice select_base_row(const Matrix01& m, int t, const ProcessParams& params);

// Color = (z, J): subtype plus a descending step set of size a.
struct ShrinkColor {
    Subtype z = Subtype::None;
    std::vector<int> steps;
    friend bool operator==(const ShrinkColor& a, const ShrinkColor& b) {
        return a.z == b.z && a.steps == b.steps;
    }
};

// A family of colored t-sets over a ground column set. Color ids index the
// palette; the palette order is the deterministic discovery order.
struct ColorFamily {
    int t = 1;
    std::vector<int> ground;                  // ascending column ids
    std::vector<std::vector<int>> tsets;      // ascending within each set
    std::vector<int> color;                   // parallel to tsets
    std::vector<ShrinkColor> palette;

    static ColorFamily from_choice(const BaseRowChoice& choice, int t);
};

struct Extraction {
    std::vector<int> cols;
    int color = -1;
};

inline constexpr long long kDefaultExtractBudget = 1'000'000;

// Exact backtracking search for b ground columns all of whose t-subsets
// belong to one color class. Classes are tried largest first.
std::optional<Extraction> extract_monochromatic(const ColorFamily& family, int b,
                                                long long budget = kDefaultExtractBudget);

struct ProductExtraction {
    std::vector<std::vector<int>> parts;  // part i entirely before part i+1
    int color = -1;
};

// Ordered product variant: find parts C_1,...,C_t with the given widths,
// each part entirely before the next, such that every transversal t-set
// (one column per part) has one shared color.
std::optional<ProductExtraction> extract_product(const ColorFamily& family,
                                                 const std::vector<int>& widths,
                                                 long long budget = kDefaultExtractBudget);

// ---------------------------------------------------------------------------
// Assembly and orchestration.
// ---------------------------------------------------------------------------

// Builds the embedding of `padded` (exactly t ones per row) on the column
// set `cols`, pulling row u from the block departing at the u-th largest
// step of J. The down case reads blocks below the survivors; the up case
// runs the down case on the vertically mirrored instance and un-mirrors.
// Throws InternalConsistencyError when a required witness row is missing.
Embedding assemble_embedding(const Matrix01& m, const Pattern& padded,
                             const std::vector<int>& cols, Subtype z,
                             const std::vector<int>& steps_desc, int r,
                             const ProcessParams& params);

// Appends fresh rightmost columns, each with a single 1 in a deficient row,
// until every row has exactly t ones. Any matrix containing the result
// contains the original (drop the added columns).
Pattern pad_pattern(const Pattern& pattern);

struct PaddedPartite {
    Pattern pattern;
    std::vector<int> original_columns;  // original column -> padded column
};

// Per-part padding for column-t-partite patterns: every row ends up with
// exactly one 1 in every part.
PaddedPartite pad_column_partite(const Pattern& pattern);

struct StepTrace {
    int n = 0;
    long long k = 0;
    int s = 0;
    int r = -1;
    std::vector<int> columns;
    std::vector<RowInterval> intervals;       // R_0..R_s
    std::vector<TSetClassification> tsets;    // tracked t-sets (capped)
    long long tsets_total = 0;                // before the tracking cap

    std::string serialize() const;
};

struct PipelineResult {
    std::optional<Embedding> embedding;
    bool via_pipeline = false;
    int attempts = 0;
    StepTrace trace;
};

// End-to-end Theorem-2.2 process: pad, select a base row, classify, color,
// extract a monochromatic column set, assemble, validate. Retries with fresh
// sub-seeds; after the retry budget, falls back to find_embedding so the
// operation is complete even when the probabilistic path fails.
PipelineResult embed_via_pipeline(const Matrix01& m, const Pattern& pattern, double epsilon,
                                  uint64_t seed, int retry_budget = 32);

// Column-t-partite variant: k = 2, s = ceil(log2 n), product extraction over
// consecutive column blocks with the widths of the pattern's cut.
PipelineResult embed_column_t_partite(const Matrix01& m, const Pattern& pattern,
                                      uint64_t seed, int retry_budget = 32);

// ---------------------------------------------------------------------------
// Statistics over sampled base rows (light/heavy/bad accounting).
// ---------------------------------------------------------------------------

enum class StatsVariant { General, ColumnPartite };

struct PipelineStats {
    int n = 0;
    StatsVariant variant = StatsVariant::General;
    int samples = 0;
    int samples_with_columns = 0;
    double mean_columns = 0.0;

    long long tsets_seen = 0;
    long long light = 0, heavy = 0, bad = 0, good = 0, heavy_and_bad = 0;
    double heavy_threshold = 0.0;  // n^(eps/2) or 5*2^(2a-1)
    double bound = 0.0;            // k^(2a-1) / heavy_threshold
    bool bound_applicable = false; // bound < 1

    // Exact per-heavy-t-set check: bad-making base rows / common rows
    // must stay within `bound` whenever it applies.
    long long heavy_sets_checked = 0;
    long long bound_violations = 0;

    // Shrinking steps == branching ancestors cross-check via prefix trees.
    long long identity_checks = 0;
    long long identity_failures = 0;

    std::vector<long long> shrink_histogram;  // index = shrinking step count
};

PipelineStats pipeline_stats(const Matrix01& m, const Pattern& pattern, double epsilon,
                             int samples, uint64_t seed,
                             StatsVariant variant = StatsVariant::General);

}  // namespace zomat
