#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zomat/matrix.hpp"

namespace zomat {

// Bipartite graph whose vertex order puts all of X (the rows side) before
// all of Y (the columns side), each side in index order; interval chromatic
// number 2 by construction.
struct OrderedBipartiteGraph {
    int x_size = 0;
    int y_size = 0;
    std::vector<std::pair<int, int>> edges;  // sorted, no duplicates

    void normalize();  // sorts, dedupes, range-checks

    // Text format: first line "x_size y_size", then one "x y" edge per line.
    static OrderedBipartiteGraph parse(std::string_view text);
    std::string to_text() const;

    friend bool operator==(const OrderedBipartiteGraph& a, const OrderedBipartiteGraph& b) {
        return a.x_size == b.x_size && a.y_size == b.y_size && a.edges == b.edges;
    }
};

// Vertex for each row and column, edge (i, j) iff the entry is 1.
OrderedBipartiteGraph matrix_to_graph(const Matrix01& m);

// Inverse of matrix_to_graph.
Matrix01 graph_to_matrix(const OrderedBipartiteGraph& g);

// Direct order-preserving subgraph search on graphs, independent of the
// matrix containment machinery.
bool graph_contains_ordered(const OrderedBipartiteGraph& g, const OrderedBipartiteGraph& h);

// Cross-validation hook: true iff the graph-level search and find_embedding
// on the corresponding matrices agree. Guards: g at most 6 per side, h at
// most 4 per side and nonempty sides.
bool containment_transfer_check(const OrderedBipartiteGraph& g, const OrderedBipartiteGraph& h);

}  // namespace zomat
