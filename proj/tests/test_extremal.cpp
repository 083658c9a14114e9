#include <doctest.h>

#include <cstdlib>

#include "zomat/containment.hpp"
#include "zomat/errors.hpp"
#include "zomat/extremal.hpp"

using namespace zomat;

namespace {

Pattern pat(const char* text) { return Pattern(Matrix01::parse(text)); }

// fixed small-pattern corpus used by the agreement suite
const char* kCorpus[] = {
    "1",          "11",          "1\n1",       "10\n01",
    "01\n10",     "11\n11",      "10\n11",     "111",
    "101",        "11\n10\n01",  "101\n011\n110", "010\n101",
};

}  // namespace

TEST_CASE("one-row pair pattern forces one 1 per row") {
    for (int n = 1; n <= 6; ++n) {
        ExtremalCertificate cert = ex_exact(n, pat("11"));
        CHECK(cert.value == n);
        CHECK(cert.validate());
        CHECK(cert.mode == (n <= 4 ? CertMode::Exhaustive : CertMode::BranchAndBound));
    }
}

TEST_CASE("diagonal 2x2 pattern gives 2n-1") {
    for (int n = 2; n <= 4; ++n) {
        ExtremalCertificate ex_mode = ex_exhaustive(n, pat("10\n01"));
        ExtremalCertificate bb_mode = ex_branch_and_bound(n, pat("10\n01"));
        CHECK(ex_mode.value == 2 * n - 1);
        CHECK(bb_mode.value == 2 * n - 1);
        CHECK(ex_mode.validate());
        CHECK(bb_mode.validate());
    }
}

TEST_CASE("all-ones 2x2 pattern at n=3") {
    CHECK(ex_exhaustive(3, pat("11\n11")).value == 6);
    CHECK(ex_branch_and_bound(3, pat("11\n11")).value == 6);
}

TEST_CASE("one row cannot host two pattern rows") {
    CHECK(ex_exact(1, pat("1\n1")).value == 1);
}

TEST_CASE("exhaustive and branch-and-bound agree on the corpus") {
    for (int n = 1; n <= 3; ++n)
        for (const char* text : kCorpus) {
            ExtremalCertificate a = ex_exhaustive(n, pat(text));
            ExtremalCertificate b = ex_branch_and_bound(n, pat(text));
            CAPTURE(text);
            CAPTURE(n);
            CHECK(a.value == b.value);
            CHECK(a.validate());
            CHECK(b.validate());
        }
}

TEST_CASE("mode guards and argument errors") {
    CHECK_THROWS_AS(ex_exhaustive(5, pat("11")), ArgumentError);
    CHECK_THROWS_AS(ex_exact(0, pat("11")), ArgumentError);
    CHECK_THROWS_AS(ex_exact(3, Pattern(Matrix01::zeros(2, 2))), ArgumentError);
}

TEST_CASE("budget exhaustion carries the best lower bound") {
    try {
        ex_branch_and_bound(5, pat("10\n01"), 100);
        FAIL("expected IncompleteSearchError");
    } catch (const IncompleteSearchError& e) {
        CHECK(e.best().mode == CertMode::LowerBoundOnly);
        CHECK(e.best().validate());
        CHECK(e.best().value <= 9);  // true ex(5) for the diagonal pattern
    }
}

TEST_CASE("trivial upper and lower bounds") {
    for (const char* text : {"10\n01", "11\n11"}) {
        for (int n = 3; n <= 4; ++n) {
            long long value = ex_exact(n, pat(text)).value;
            CHECK(value <= n * n);
            // a single full row avoids any pattern with >= 2 nonempty rows
            CHECK(value >= n);
        }
    }
}

TEST_CASE("certificate serialization round-trips") {
    ExtremalCertificate cert = ex_exact(3, pat("10\n01"));
    ExtremalCertificate back = ExtremalCertificate::parse(cert.serialize());
    CHECK(back.n == cert.n);
    CHECK(back.value == cert.value);
    CHECK(back.mode == cert.mode);
    CHECK(back.witness == cert.witness);
    CHECK(back.pattern.matrix() == cert.pattern.matrix());
    CHECK(back.validate());
    CHECK_THROWS_AS(ExtremalCertificate::parse("garbage"), FormatError);
}

TEST_CASE("random lower bound construction") {
    ExtremalCertificate zero = ex_lower_random(4, pat("11"), 0.0, 3, 1);
    CHECK(zero.value == 0);
    CHECK(zero.mode == CertMode::LowerBoundOnly);

    ExtremalCertificate dense = ex_lower_random(4, pat("11"), 1.0, 2, 1);
    CHECK(dense.value <= 4);  // after deletion every row has at most one 1
    CHECK(dense.validate());

    ExtremalCertificate a = ex_lower_random(16, pat("11\n11"), 0.4, 50, 7);
    ExtremalCertificate b = ex_lower_random(16, pat("11\n11"), 0.4, 50, 7);
    CHECK(a.value == b.value);
    CHECK(a.witness == b.witness);
    CHECK(a.validate());

    // scheduling independence: same result single- and multi-threaded
    setenv("ZOMAT_THREADS", "1", 1);
    ExtremalCertificate c = ex_lower_random(16, pat("11\n11"), 0.4, 50, 7);
    setenv("ZOMAT_THREADS", "4", 1);
    ExtremalCertificate d = ex_lower_random(16, pat("11\n11"), 0.4, 50, 7);
    unsetenv("ZOMAT_THREADS");
    CHECK(c.value == d.value);
    CHECK(c.witness == d.witness);
    CHECK(c.witness == a.witness);
}

TEST_CASE("monotone laws") {
    CHECK(monotone_checks(pat("11"), pat("11"), 3));
    CHECK(monotone_checks(pat("11\n11"), pat("11"), 3));
    CHECK(monotone_checks(pat("10\n01"), pat("10\n01"), 3));
    CHECK_THROWS_AS(monotone_checks(pat("11"), pat("11"), 6), ArgumentError);
}
