#include <doctest.h>

#include "zomat/containment.hpp"
#include "zomat/errors.hpp"
#include "zomat/rng.hpp"

using namespace zomat;

TEST_CASE("diagonal pair in the identity") {
    auto emb = find_embedding(Matrix01::identity(3), Pattern(Matrix01::parse("10\n01")));
    REQUIRE(emb);
    CHECK(emb->row_map == std::vector<int>{0, 1});
    CHECK(emb->col_map == std::vector<int>{0, 1});
}

TEST_CASE("order sensitivity") {
    // The unordered bipartite graphs are isomorphic, yet no two 1s of the
    // anti-diagonal increase in both coordinates.
    Matrix01 anti = Matrix01::parse("01\n10");
    Pattern diag(Matrix01::parse("10\n01"));
    CHECK(!find_embedding(anti, diag));
    CHECK(!oracle_contains(anti, diag));
    Pattern antip(anti);
    CHECK(find_embedding(Matrix01::parse("01\n10"), antip));
}

TEST_CASE("figure-style schematic host") {
    // 11-row host with common 1s in rows 3/5/7/10 at columns 2/5/7.
    Matrix01 m(11, 10);
    for (int c : {2, 5, 7}) m.set(3, c, true);
    m.set(5, 2, true);
    m.set(5, 7, true);
    m.set(7, 5, true);
    m.set(7, 7, true);
    m.set(10, 2, true);
    m.set(10, 5, true);
    Pattern a(Matrix01::parse("101\n011\n110"));

    // the marked row triple is itself a witness
    CHECK(Embedding{{5, 7, 10}, {2, 5, 7}}.valid_for(m, a));
    auto emb = find_embedding(m, a);
    REQUIRE(emb);
    CHECK(emb->valid_for(m, a));
}

TEST_CASE("oracle basics") {
    CHECK(oracle_contains(Matrix01::ones(3, 3), Pattern(Matrix01::parse("11\n11"))));
    CHECK(!oracle_contains(Matrix01::zeros(2, 2), Pattern(Matrix01::parse("1"))));
    CHECK(!oracle_contains(Matrix01::parse("11\n10"), Pattern(Matrix01::parse("11\n11"))));
    CHECK_THROWS_AS(oracle_contains(Matrix01::zeros(7, 2), Pattern(Matrix01::parse("1"))),
                    ArgumentError);
    CHECK_THROWS_AS(oracle_contains(Matrix01::zeros(2, 2), Pattern(Matrix01::zeros(5, 5))),
                    ArgumentError);
}

TEST_CASE("oracle equivalence on random instances") {
    Rng rng(1234);
    for (int it = 0; it < 500; ++it) {
        Matrix01 m = Matrix01::random(5, 5, 0.5, rng);
        Matrix01 a = Matrix01::random(3, 3, 0.5, rng);
        Pattern pat(a);
        CHECK(find_embedding(m, pat).has_value() == oracle_contains(m, pat));
    }
}

TEST_CASE("self containment") {
    Rng rng(99);
    for (int it = 0; it < 40; ++it) {
        int r = 1 + static_cast<int>(rng.uniform(6));
        int c = 1 + static_cast<int>(rng.uniform(6));
        Matrix01 m = Matrix01::random(r, c, 0.5, rng);
        auto emb = find_embedding(m, Pattern(m));
        REQUIRE(emb);
        for (int i = 0; i < r; ++i) CHECK(emb->row_map[i] == i);
    }
}

TEST_CASE("adding a 1 never destroys containment") {
    Rng rng(555);
    int tested = 0;
    for (int it = 0; it < 300 && tested < 100; ++it) {
        Matrix01 m = Matrix01::random(6, 6, 0.4, rng);
        Matrix01 a = Matrix01::random(2, 3, 0.5, rng);
        Pattern pat(a);
        if (!find_embedding(m, pat)) continue;
        ++tested;
        int i = static_cast<int>(rng.uniform(6));
        int j = static_cast<int>(rng.uniform(6));
        m.set(i, j, true);
        CHECK(find_embedding(m, pat).has_value());
    }
    CHECK(tested == 100);
}

TEST_CASE("pinned last-row search") {
    Matrix01 m = Matrix01::identity(4);
    Pattern diag(Matrix01::parse("10\n01"));
    // the only embedding ending at row 3 pairs rows {0,1,2} with row 3
    auto emb = find_embedding_last_row_at(m, diag, 3);
    REQUIRE(emb);
    CHECK(emb->row_map[1] == 3);
    CHECK(!find_embedding_last_row_at(m, diag, 0));

    // consistency against the unpinned search over all hosts
    Rng rng(77);
    for (int it = 0; it < 200; ++it) {
        Matrix01 h = Matrix01::random(5, 5, 0.4, rng);
        Pattern pat(Matrix01::random(2, 2, 0.6, rng));
        bool any_pinned = false;
        for (int last = 0; last < 5; ++last)
            if (find_embedding_last_row_at(h, pat, last)) any_pinned = true;
        CHECK(any_pinned == find_embedding(h, pat).has_value());
    }
}

TEST_CASE("hosts smaller than the pattern") {
    Pattern tall(Matrix01::parse("1\n1"));
    CHECK(!find_embedding(Matrix01::ones(1, 1), tall));
    CHECK(!oracle_contains(Matrix01::ones(1, 1), tall));
}
