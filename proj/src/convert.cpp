#include "zomat/convert.hpp"

#include <algorithm>
#include <sstream>

#include "zomat/containment.hpp"
#include "zomat/errors.hpp"
#include "zomat/util.hpp"

namespace zomat {

void OrderedBipartiteGraph::normalize() {
    if (x_size < 0 || y_size < 0) throw ArgumentError("vertex class sizes must be non-negative");
    for (auto [x, y] : edges)
        if (x < 0 || x >= x_size || y < 0 || y >= y_size)
            throw ArgumentError("edge endpoint out of range");
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

OrderedBipartiteGraph OrderedBipartiteGraph::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    OrderedBipartiteGraph g;
    if (!(in >> g.x_size >> g.y_size)) throw FormatError("missing graph size line");
    int x, y;
    while (in >> x >> y) g.edges.emplace_back(x, y);
    if (!in.eof()) throw FormatError("trailing junk in graph text");
    try {
        g.normalize();
    } catch (const ArgumentError& e) {
        throw FormatError(e.what());
    }
    return g;
}

std::string OrderedBipartiteGraph::to_text() const {
    std::ostringstream out;
    out << x_size << ' ' << y_size << '\n';
    for (auto [x, y] : edges) out << x << ' ' << y << '\n';
    return out.str();
}

OrderedBipartiteGraph matrix_to_graph(const Matrix01& m) {
    OrderedBipartiteGraph g;
    g.x_size = m.n_rows();
    g.y_size = m.n_cols();
    for (int i = 0; i < m.n_rows(); ++i)
        for (int j = 0; j < m.n_cols(); ++j)
            if (m.get(i, j)) g.edges.emplace_back(i, j);
    return g;
}

Matrix01 graph_to_matrix(const OrderedBipartiteGraph& g) {
    Matrix01 m(g.x_size, g.y_size);
    for (auto [x, y] : g.edges) {
        if (x < 0 || x >= g.x_size || y < 0 || y >= g.y_size)
            throw ArgumentError("edge endpoint out of range");
        m.set(x, y, true);
    }
    return m;
}

bool graph_contains_ordered(const OrderedBipartiteGraph& g, const OrderedBipartiteGraph& h) {
    if (h.x_size > g.x_size || h.y_size > g.y_size) return false;
    if (h.x_size == 0 || h.y_size == 0) return h.edges.empty();

    auto has_edge = [&g](int x, int y) {
        return std::binary_search(g.edges.begin(), g.edges.end(), std::make_pair(x, y));
    };

    std::vector<int> xs(h.x_size), ys(h.y_size);
    for (int i = 0; i < h.x_size; ++i) xs[i] = i;
    do {
        for (int j = 0; j < h.y_size; ++j) ys[j] = j;
        do {
            bool ok = true;
            for (auto [x, y] : h.edges)
                if (!has_edge(xs[x], ys[y])) { ok = false; break; }
            if (ok) return true;
        } while (next_combination(ys, g.y_size));
    } while (next_combination(xs, g.x_size));
    return false;
}

bool containment_transfer_check(const OrderedBipartiteGraph& g, const OrderedBipartiteGraph& h) {
    if (g.x_size > 6 || g.y_size > 6)
        throw ArgumentError("transfer check host guard is 6 per side");
    if (h.x_size > 4 || h.y_size > 4)
        throw ArgumentError("transfer check pattern guard is 4 per side");
    if (h.x_size < 1 || h.y_size < 1)
        throw ArgumentError("pattern graph needs nonempty sides");
    bool graph_route = graph_contains_ordered(g, h);
    bool matrix_route =
        find_embedding(graph_to_matrix(g), Pattern(graph_to_matrix(h))).has_value();
    return graph_route == matrix_route;
}

}  // namespace zomat
