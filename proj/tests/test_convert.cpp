#include <doctest.h>

#include "zomat/convert.hpp"
#include "zomat/errors.hpp"
#include "zomat/rng.hpp"

using namespace zomat;

TEST_CASE("matrix to graph") {
    OrderedBipartiteGraph id2 = matrix_to_graph(Matrix01::identity(2));
    CHECK(id2.x_size == 2);
    CHECK(id2.y_size == 2);
    CHECK(id2.edges == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}});

    CHECK(matrix_to_graph(Matrix01::zeros(3, 2)).edges.empty());
    CHECK(matrix_to_graph(Matrix01::parse("101\n011\n110")).edges.size() == 6);
}

TEST_CASE("graph to matrix") {
    OrderedBipartiteGraph empty{2, 3, {}};
    CHECK(graph_to_matrix(empty) == Matrix01::zeros(2, 3));

    OrderedBipartiteGraph single{1, 1, {{0, 0}}};
    CHECK(graph_to_matrix(single) == Matrix01::ones(1, 1));

    OrderedBipartiteGraph bad{1, 1, {{0, 5}}};
    CHECK_THROWS_AS(graph_to_matrix(bad), ArgumentError);
}

TEST_CASE("round trip both ways") {
    Rng rng(606);
    for (int it = 0; it < 60; ++it) {
        Matrix01 m = Matrix01::random(4, 4, 0.5, rng);
        CHECK(graph_to_matrix(matrix_to_graph(m)) == m);
    }
    OrderedBipartiteGraph g{3, 4, {{0, 1}, {2, 0}, {2, 3}}};
    g.normalize();
    CHECK(matrix_to_graph(graph_to_matrix(g)) == g);
}

TEST_CASE("graph text format") {
    OrderedBipartiteGraph g{2, 2, {{0, 0}, {1, 1}}};
    CHECK(g.to_text() == "2 2\n0 0\n1 1\n");
    CHECK(OrderedBipartiteGraph::parse(g.to_text()) == g);
    CHECK_THROWS_AS(OrderedBipartiteGraph::parse(""), FormatError);
    CHECK_THROWS_AS(OrderedBipartiteGraph::parse("2 2\n0 9"), FormatError);
}

TEST_CASE("ordered graph containment search") {
    OrderedBipartiteGraph diag{2, 2, {{0, 0}, {1, 1}}};
    OrderedBipartiteGraph anti{2, 2, {{0, 1}, {1, 0}}};
    CHECK(graph_contains_ordered(diag, diag));
    CHECK(!graph_contains_ordered(anti, diag));
    CHECK(!graph_contains_ordered(diag, anti));
}

TEST_CASE("containment transfer agrees") {
    OrderedBipartiteGraph diag{2, 2, {{0, 0}, {1, 1}}};
    OrderedBipartiteGraph anti{2, 2, {{0, 1}, {1, 0}}};
    CHECK(containment_transfer_check(diag, diag));
    CHECK(containment_transfer_check(anti, diag));
    CHECK(containment_transfer_check(diag, anti));

    Rng rng(777);
    for (int it = 0; it < 200; ++it) {
        int gx = 2 + static_cast<int>(rng.uniform(3));
        int gy = 2 + static_cast<int>(rng.uniform(3));
        int hx = 1 + static_cast<int>(rng.uniform(3));
        int hy = 1 + static_cast<int>(rng.uniform(3));
        OrderedBipartiteGraph g = matrix_to_graph(Matrix01::random(gx, gy, 0.5, rng));
        OrderedBipartiteGraph h = matrix_to_graph(Matrix01::random(hx, hy, 0.5, rng));
        CHECK(containment_transfer_check(g, h));
    }

    OrderedBipartiteGraph huge{7, 2, {}};
    CHECK_THROWS_AS(containment_transfer_check(huge, diag), ArgumentError);
    OrderedBipartiteGraph wide{2, 2, {}};
    OrderedBipartiteGraph big_pattern{5, 2, {}};
    CHECK_THROWS_AS(containment_transfer_check(wide, big_pattern), ArgumentError);
}
