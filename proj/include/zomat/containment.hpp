#pragma once

#include <optional>

#include "zomat/matrix.hpp"

namespace zomat {

// Ordered containment test with witness. Pattern rows are assigned to host
// rows top-down, smallest host row first, so the returned embedding is the
// lexicographically smallest (by row_map, then col_map). Column feasibility
// is propagated as intersections of bit rows; infeasible prefixes are pruned
// immediately. 0-entries of the pattern impose nothing.
std::optional<Embedding> find_embedding(const Matrix01& host, const Pattern& pattern);

// Variant used by the incremental branch-and-bound check: only embeddings
// whose last 1-carrying pattern row maps exactly to host row `last_row` are
// considered (trailing all-zero pattern rows may map below it).
std::optional<Embedding> find_embedding_last_row_at(const Matrix01& host,
                                                    const Pattern& pattern,
                                                    int last_row);

// Independent exhaustive oracle: true iff some a-subset of rows and b-subset
// of columns of the host, taken in order, dominates the pattern entrywise.
// Guarded to hosts up to 6x6 and patterns up to 4x4.
bool oracle_contains(const Matrix01& host, const Pattern& pattern);

}  // namespace zomat
