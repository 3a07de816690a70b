#include <doctest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "primechain/admissibility.hpp"
#include "primechain/prime_engine.hpp"

using namespace primechain;

TEST_CASE("offset tuple validation") {
    CHECK_THROWS_AS(OffsetTuple(std::vector<u64>{}), input_error);
    CHECK_THROWS_AS(OffsetTuple({3, 3}), input_error);
    CHECK_THROWS_AS(OffsetTuple({5, 2}), input_error);
    OffsetTuple t({0, 2, 6});
    CHECK(t.size() == 3);
    CHECK(t.prefix(2) == OffsetTuple({0, 2}));
    CHECK(t.shifted(5) == OffsetTuple({5, 7, 11}));
    CHECK_THROWS_AS(t.shifted(-1), input_error);
}

TEST_CASE("residue coverage") {
    CHECK(residue_coverage(OffsetTuple({0, 2, 4}), 3) == std::vector<u64>{0, 1, 2});
    CHECK(residue_coverage(OffsetTuple({0, 2}), 2) == std::vector<u64>{0});
    CHECK(residue_coverage(OffsetTuple({1, 9, 25}), 5) == std::vector<u64>{0, 1, 4});
    CHECK_THROWS_AS(residue_coverage(OffsetTuple({0}), 4), input_error);
}

TEST_CASE("admissibility verdicts") {
    CHECK(is_admissible(OffsetTuple({0, 2})).admissible);
    CHECK(is_admissible(OffsetTuple({0})).admissible);

    AdmissibilityReport bad = is_admissible(OffsetTuple({0, 2, 4}));
    CHECK_FALSE(bad.admissible);
    // Mod 3 is fully covered, and the report carries a covering offset per
    // residue class.
    bool found = false;
    for (const PrimeCoverage& cov : bad.per_prime) {
        if (cov.prime == 3) {
            found = true;
            CHECK(cov.covered_count == 3);
            CHECK_FALSE(cov.avoided.has_value());
            REQUIRE(cov.covering_offsets.size() == 3);
            for (u64 r = 0; r < 3; ++r)
                CHECK(cov.covering_offsets[r] % 3 == r);
        }
    }
    CHECK(found);

    CHECK(is_admissible(OffsetTuple({0, 2, 6, 8, 12})).admissible);
    CHECK(is_admissible(odd_square_offsets(20)).admissible);
}

TEST_CASE("reported avoided classes are genuinely uncovered") {
    std::mt19937_64 rng(91);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t k = 1 + rng() % 8;
        std::vector<u64> offs;
        u64 v = rng() % 5;
        for (std::size_t i = 0; i < k; ++i) {
            offs.push_back(v);
            v += 1 + rng() % 9;
        }
        OffsetTuple t(offs);
        AdmissibilityReport rep = is_admissible(t);
        for (const PrimeCoverage& cov : rep.per_prime) {
            if (!cov.avoided) continue;
            std::vector<u64> covered = residue_coverage(t, cov.prime);
            for (u64 r : covered) REQUIRE(r != *cov.avoided);
        }
    }
}

TEST_CASE("admissibility is shift invariant") {
    std::mt19937_64 rng(92);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t k = 1 + rng() % 6;
        std::vector<u64> offs;
        u64 v = rng() % 3;
        for (std::size_t i = 0; i < k; ++i) {
            offs.push_back(v);
            v += 1 + rng() % 7;
        }
        OffsetTuple t(offs);
        i64 c = static_cast<i64>(rng() % 50);
        CAPTURE(c);
        REQUIRE(is_admissible(t).admissible == is_admissible(t.shifted(c)).admissible);
    }
}

TEST_CASE("subtuples of admissible tuples are admissible") {
    std::mt19937_64 rng(93);
    for (int trial = 0; trial < 40; ++trial) {
        OffsetTuple t = odd_square_offsets(2 + rng() % 10, rng() % 100);
        REQUIRE(is_admissible(t).admissible);
        // Random subtuple.
        std::vector<u64> sub;
        for (u64 h : t)
            if (rng() % 2) sub.push_back(h);
        if (sub.empty()) sub.push_back(t[0]);
        REQUIRE(is_admissible(OffsetTuple(sub)).admissible);
    }
}

TEST_CASE("primitive classes by CRT") {
    CrtClass c1 = primitive_class(OffsetTuple({0, 2}), 3);
    CHECK(c1.W == 6);
    CHECK(c1.b == 5);

    CrtClass c2 = primitive_class(OffsetTuple({0}), 2);
    CHECK(c2.W == 2);
    CHECK(c2.b == 1);

    CrtClass c3 = primitive_class(OffsetTuple({0, 2, 6, 8, 12}), 5);
    CHECK(c3.W == 30);
    // Exhaustive scan: 11 is the only class with every shift coprime to 30.
    CHECK(c3.b == 11);
    for (u64 h : {0ull, 2ull, 6ull, 8ull, 12ull})
        CHECK(std::gcd(c3.b + h, c3.W) == 1);
}

TEST_CASE("primitive class satisfies the coprimality contract") {
    std::mt19937_64 rng(94);
    for (int trial = 0; trial < 40; ++trial) {
        OffsetTuple t = odd_square_offsets(1 + rng() % 12, rng() % 200);
        u64 z = std::vector<u64>{2, 3, 5, 7, 11}[rng() % 5];
        CrtClass cls = primitive_class(t, z);
        CHECK(cls.b < cls.W);
        for (u64 h : t) {
            CAPTURE(h);
            REQUIRE(std::gcd(cls.b + h, cls.W) == 1);
        }
    }
}

TEST_CASE("primitive class infeasibility names the obstruction") {
    try {
        primitive_class(OffsetTuple({0, 1}), 2);
        FAIL("expected infeasible_error");
    } catch (const infeasible_error& e) {
        CHECK(e.prime() == 2);
    }
    try {
        primitive_class(OffsetTuple({0, 2, 4}), 5);
        FAIL("expected infeasible_error");
    } catch (const infeasible_error& e) {
        CHECK(e.prime() == 3);
    }
}

TEST_CASE("odd square offsets") {
    CHECK(odd_square_offsets(3) == OffsetTuple({1, 9, 25}));
    CHECK(odd_square_offsets(2, 10) == OffsetTuple({25, 49}));
    CHECK_THROWS_AS(odd_square_offsets(0), input_error);
    CHECK(is_admissible(odd_square_offsets(50)).admissible);
}
