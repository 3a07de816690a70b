#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "primechain/prime_engine.hpp"

using namespace primechain;

TEST_CASE("sieve_range small windows") {
    CHECK(sieve_range(0, 10).to_vector() == std::vector<u64>{2, 3, 5, 7});
    CHECK(sieve_range(90, 100).to_vector() == std::vector<u64>{97});
    CHECK(sieve_range(0, 2).count() == 0);
}

TEST_CASE("sieve_range agrees with is_prime below 10^6") {
    PrimeRange r = sieve_range(0, 1000000);
    for (u64 n = 0; n < 1000000; ++n)
        REQUIRE(r.contains(n) == is_prime(n));
}

TEST_CASE("sieve_range independent of segmentation") {
    std::mt19937_64 rng(20240901);
    for (int trial = 0; trial < 12; ++trial) {
        u64 lo = rng() % 5000000;
        u64 hi = lo + 1 + rng() % 300000;
        SieveOptions opt;
        opt.segment_size = 64 + rng() % 50000;
        PrimeRange a = sieve_range(lo, hi);
        PrimeRange b = sieve_range(lo, hi, opt);
        REQUIRE(a.words() == b.words());
    }
}

TEST_CASE("sieve_range rejects oversized requests") {
    SieveOptions opt;
    opt.memory_budget = 1024;
    CHECK_THROWS_AS(sieve_range(0, 1u << 20, opt), resource_error);
    CHECK_THROWS_AS(sieve_range(10, 10), input_error);
}

TEST_CASE("is_prime matches trial division") {
    CHECK_FALSE(is_prime(0));
    CHECK_FALSE(is_prime(1));
    CHECK(is_prime(2));
    CHECK(is_prime(1000000007ull));
    std::mt19937_64 rng(71);
    for (int i = 0; i < 4000; ++i) {
        u64 n = rng() % 10000000;
        CAPTURE(n);
        REQUIRE(is_prime(n) == oracle::trial_division_prime(n));
    }
    // A few larger structured cases.
    CHECK(is_prime(18446744073709551557ull));   // largest 64-bit prime
    CHECK_FALSE(is_prime(18446744073709551555ull));
    CHECK_FALSE(is_prime(3215031751ull));       // strong pseudoprime to 2,3,5,7
}

TEST_CASE("mobius values and oracle") {
    CHECK(mobius(1) == 1);
    CHECK(mobius(12) == 0);
    CHECK(mobius(30) == -1);
    CHECK_THROWS_AS(mobius(0), input_error);
    std::mt19937_64 rng(72);
    for (int i = 0; i < 3000; ++i) {
        u64 n = 1 + rng() % 2000000;
        CAPTURE(n);
        REQUIRE(mobius(n) == oracle::naive_mobius(n));
    }
    // Cofactor corner cases: p*q with both factors above the cube root, and
    // the square of a large prime.
    CHECK(mobius(1000003ull * 1000033ull) == 1);
    CHECK(mobius(1000003ull * 1000003ull) == 0);
    CHECK(mobius(2ull * 1000003ull * 1000033ull) == -1);
}

TEST_CASE("find_witnesses twin pattern") {
    WitnessCertificate cert = find_witnesses(OffsetTuple({0, 2}), 1, 60, 100);
    CHECK(cert.witnesses == std::vector<u64>{3, 5, 11, 17, 29, 41, 59});
    CHECK(cert.witnesses == oracle::scan_witnesses({0, 2}, 1, 60));
    CHECK(cert.searched_up_to == 59);
    CHECK(cert.verify());
}

TEST_CASE("find_witnesses odd-square pattern") {
    WitnessCertificate cert = find_witnesses(OffsetTuple({1, 9, 25, 49}), 1, 100, 100);
    CHECK(cert.witnesses == std::vector<u64>{4, 22, 58, 88});
    CHECK(cert.witnesses == oracle::scan_witnesses({1, 9, 25, 49}, 1, 100));
}

TEST_CASE("find_witnesses mixed parity collapses to n = 2") {
    CHECK(find_witnesses(OffsetTuple({0, 1}), 1, 60, 10).witnesses ==
          std::vector<u64>{2});
    CHECK(find_witnesses(OffsetTuple({0, 1}), 10, 100, 10).witnesses.empty());
}

TEST_CASE("find_witnesses with a congruence class") {
    // Twins in [1, 60) restricted to n = 5 (mod 6): drops n = 3.
    WitnessCertificate cert =
        find_witnesses(OffsetTuple({0, 2}), 1, 60, 100, CrtClass{6, 5});
    CHECK(cert.witnesses == std::vector<u64>{5, 11, 17, 29, 41, 59});
}

TEST_CASE("find_witnesses respects max_count and reports the scan edge") {
    WitnessCertificate cert = find_witnesses(OffsetTuple({0, 2}), 1, 1000, 3);
    CHECK(cert.witnesses == std::vector<u64>{3, 5, 11});
    CHECK(cert.searched_up_to == 11);
}

TEST_CASE("find_witnesses single offset reproduces shifted primes") {
    PrimeRange r = sieve_range(0, 5000);
    for (u64 h : {0ull, 4ull, 30ull}) {
        WitnessCertificate cert = find_witnesses(OffsetTuple({h}), 0, 4000, 100000);
        std::vector<u64> expect;
        for (u64 n = 0; n < 4000; ++n)
            if (r.contains(n + h)) expect.push_back(n);
        CAPTURE(h);
        REQUIRE(cert.witnesses == expect);
    }
}

TEST_CASE("find_witnesses rejects overflow and empty ranges") {
    CHECK_THROWS_AS(find_witnesses(OffsetTuple({0, 2}), 5, 5, 1), input_error);
    CHECK_THROWS_AS(
        find_witnesses(OffsetTuple({0, ~u64(0) - 1}), ~u64(0) - 2, ~u64(0), 1),
        input_error);
}

TEST_CASE("witness certificate verification catches tampering") {
    WitnessCertificate cert = find_witnesses(OffsetTuple({0, 2}), 1, 60, 100);
    REQUIRE(cert.verify());
    cert.witnesses.push_back(45);  // 45, 47: 45 composite
    CHECK_FALSE(cert.verify());
}
