#include <doctest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "primechain/maynard_sieve.hpp"
#include "primechain/prime_engine.hpp"

using namespace primechain;

namespace {

// Scaled unit bump c (1 - 10t)^2 on [0, 1/10].
BasisFunction bump(const Rational& c) {
    return BasisFunction::single(
        Rational(1, 10), Poly({c, c * Rational(-20), c * Rational(100)}));
}

TensorSumF one_cell(u64 offset, const Rational& c) {
    SieveGrid grid({1}, {{offset}}, {1.0});
    return TensorSumF(grid, {{bump(c)}});
}

// Direct divisor-tuple enumeration of the squared weight, all cells crossed.
double naive_sieve_weight(u64 n, const SieveConfig& cfg, const TensorSumF& F) {
    if (n <= cfg.N || n > 2 * cfg.N) return 0;
    if (n % cfg.cls.W != cfg.cls.b % cfg.cls.W) return 0;
    std::size_t k = cfg.grid.cell_count();
    std::vector<std::vector<u64>> divisors(k);
    for (std::size_t c = 0; c < k; ++c) {
        u64 m = n + cfg.grid.offset(cfg.grid.cell_at(c));
        double s = to_double(F.cell_support(c));
        u64 bound = static_cast<u64>(
            std::exp(s * std::log(static_cast<double>(cfg.N))) + 1e-9);
        divisors[c] = oracle::naive_eligible_divisors(m, cfg.cls.W, bound);
    }
    std::vector<std::size_t> at(k, 0);
    double total = 0;
    for (;;) {
        std::vector<u64> d(k);
        for (std::size_t c = 0; c < k; ++c) d[c] = divisors[c][at[c]];
        total += lambda_weight(d, F, cfg.N, cfg.cls.W);
        std::size_t c = 0;
        while (c < k && ++at[c] == divisors[c].size()) {
            at[c] = 0;
            ++c;
        }
        if (c == k) break;
    }
    return total * total;
}

} // namespace

TEST_CASE("lambda_weight at the all-ones tuple") {
    TensorSumF F = one_cell(1, Rational(1));
    // F'(0) = -20.
    CHECK(lambda_weight({1}, F, 1u << 20) == doctest::Approx(-20.0));
}

TEST_CASE("lambda_weight vanishes beyond the support") {
    TensorSumF F = one_cell(1, Rational(1));
    u64 N = 1u << 20;
    // log d / log N = 0.5 >> 1/10.
    CHECK(lambda_weight({1u << 10}, F, N) == 0.0);
    // Non-squarefree divisors die through the Moebius factor.
    CHECK(lambda_weight({4}, F, N) == 0.0);
    // Divisors sharing a factor with W are gated off.
    CHECK(lambda_weight({3}, F, N, 6) == 0.0);
    CHECK_THROWS_AS(lambda_weight({0}, F, N), input_error);
    CHECK_THROWS_AS(lambda_weight({1, 1}, F, N), input_error);
}

TEST_CASE("lambda_weight reproduces mu(2) F'(log 2 / log N)") {
    // With c = 1/5 the derivative at t = 1/20 is exactly -2, and for
    // N = 2^20 the point log 2 / log N is exactly 1/20.
    TensorSumF F = one_cell(1, Rational(1, 5));
    u64 N = 1u << 20;
    double val = lambda_weight({2}, F, N);
    CHECK(val == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("sieve weight is zero off the class and nonnegative on it") {
    TensorSumF F0 = one_cell(0, Rational(1));
    SieveConfig cfg = SieveConfig::make(F0.grid(), 100000, 7);
    TensorSumF F = F0.with_grid(cfg.grid);
    u64 W = cfg.cls.W;
    CHECK(W == 210);
    u64 off_class = 100001;
    while (off_class % W == cfg.cls.b) ++off_class;
    CHECK(sieve_weight(off_class, cfg, F) == 0.0);
    CHECK(sieve_weight(50, cfg, F) == 0.0);  // outside (N, 2N]

    u64 on_class = 100000 + 1 + (cfg.cls.b + W - 100001 % W) % W;
    CHECK(sieve_weight(on_class, cfg, F) >= 0.0);
}

TEST_CASE("prime shifts above the divisor cutoff force w = F'(0)^2") {
    // A prime n + h > N^{1/10} has no divisor inside the cutoff except 1,
    // so w(n) collapses to F'(0)^2.
    TensorSumF F = one_cell(0, Rational(1));
    SieveConfig cfg = SieveConfig::make(F.grid(), 1000000000ull, 2);
    u64 n = 1000000007ull;  // prime, on the odd class
    REQUIRE(n % cfg.cls.W == cfg.cls.b);
    CHECK(sieve_weight(n, cfg, F) == doctest::Approx(400.0).epsilon(1e-12));
}

TEST_CASE("sieve weight matches the naive divisor enumeration") {
    // z = 2 keeps odd divisors alive; N = 10^9 admits divisors up to 7.
    SieveGrid grid({1}, {{0}}, {1.0});
    TensorSumF F(grid, {{bump(Rational(1))}});
    SieveConfig cfg = SieveConfig::make(grid, 1000000000ull, 2);
    CHECK(cfg.cls.W == 2);

    // 1000000155 = 3 * 5 * 7 * 9523811: divisors {1,3,5,7} inside the cutoff.
    std::vector<u64> picks{1000000155ull, 1000000001ull, 1000000035ull,
                           1064696069ull, 1299963601ull};
    for (u64 n : picks) {
        if (n % 2 != cfg.cls.b % 2) continue;
        CAPTURE(n);
        double fast = sieve_weight(n, cfg, F);
        double slow = naive_sieve_weight(n, cfg, F);
        REQUIRE(fast == doctest::Approx(slow).epsilon(1e-12));
    }

    // Two cells with asymmetric supports.
    SieveGrid grid2({2}, {{0, 2}}, {1.0});
    BasisFunction wide = BasisFunction::single(
        Rational(2, 25),
        Poly({Rational(1), Rational(-25), Rational(625, 4)}));  // (1 - t/0.08)^2
    BasisFunction narrow = BasisFunction::single(
        Rational(1, 50), Poly({Rational(1), Rational(-100), Rational(2500)}));
    TensorSumF F2(grid2, {{wide, narrow}});
    SieveConfig cfg2 = SieveConfig::make(grid2, 1000000000ull, 2);
    for (u64 base : {1000000155ull, 1000000245ull, 1000001001ull}) {
        u64 n = base;
        if (n % 2 != cfg2.cls.b % 2) ++n;
        CAPTURE(n);
        REQUIRE(sieve_weight(n, cfg2, F2) ==
                doctest::Approx(naive_sieve_weight(n, cfg2, F2)).epsilon(1e-12));
    }
}

TEST_CASE("class-wide weight sum matches a naive accumulation") {
    // z = 2 with a full-width support keeps divisor 3 alive at N = 1e5, so
    // the weights genuinely vary across the class.
    SieveGrid grid({1}, {{0}}, {1.0});
    TensorSumF F(grid, {{bump(Rational(1))}});
    SieveConfig cfg = SieveConfig::make(grid, 100000, 2);
    RawWeights raw = raw_sieve_weights(cfg, F);
    REQUIRE(raw.support.size() == 50000);

    long double naive = 0;
    bool varied = false;
    for (std::size_t i = 0; i < raw.support.size(); ++i) {
        double w = naive_sieve_weight(raw.support[i], cfg, F);
        REQUIRE(raw.weights[i] == doctest::Approx(w).epsilon(1e-12));
        if (w != raw.weights[0]) varied = true;
        naive += w;
    }
    CHECK(varied);
    CHECK(raw.total ==
          doctest::Approx(static_cast<double>(naive)).epsilon(1e-12));
}

TEST_CASE("pair sums never exceed their singles in the estimate report") {
    SieveGrid grid({2}, {{0, 2}}, {1.0});
    TensorSumF F = maynard_basis(2).with_grid(grid);
    SieveConfig cfg = SieveConfig::make(grid, 200000, 7);
    EstimateReport rep = verify_estimates(cfg, F);
    for (const PairEstimate& pe : rep.pairs)
        for (const CellEstimate& ce : rep.singles)
            if ((ce.cell == pe.a) || (ce.cell == pe.b))
                CHECK(pe.line.empirical <= ce.line.empirical + 1e-9);
}

TEST_CASE("empirical measure normalises to one") {
    TensorSumF F = one_cell(0, Rational(1));
    SieveConfig cfg = SieveConfig::make(F.grid(), 100000, 7);
    EmpiricalMeasure nu = empirical_measure(cfg, F);
    REQUIRE(!nu.support.empty());
    double total = 0;
    for (double w : nu.weights) total += w;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < nu.support.size(); ++i) {
        REQUIRE(nu.support[i] > cfg.N);
        REQUIRE(nu.support[i] <= 2 * cfg.N);
        REQUIRE(nu.support[i] % nu.W == nu.b % nu.W);
        REQUIRE(nu.weights[i] >= 0.0);
    }
}

TEST_CASE("empirical measure sees shifted primes with positive mass") {
    TensorSumF F = one_cell(0, Rational(1));
    SieveConfig cfg = SieveConfig::make(F.grid(), 100000, 7);
    EmpiricalMeasure nu = empirical_measure(cfg, F);
    double prime_mass = 0;
    for (std::size_t i = 0; i < nu.support.size(); ++i)
        if (is_prime(nu.support[i])) prime_mass += nu.weights[i];
    CHECK(prime_mass > 0.0);
}

TEST_CASE("degenerate measures are reported as such") {
    // A cutoff whose derivative vanishes at 0 with no surviving divisors
    // gives w = 0 on the whole class: t^2 (1 - 10 t)^2 has F'(0) = 0.
    SieveGrid grid({1}, {{0}}, {1.0});
    Poly t2({Rational(0), Rational(0), Rational(1)});
    BasisFunction f = BasisFunction::single(
        Rational(1, 10),
        t2 * Poly({Rational(1), Rational(-20), Rational(100)}));
    TensorSumF F(grid, {{f}});
    SieveConfig cfg = SieveConfig::make(grid, 100000, 7);
    CHECK_THROWS_AS(empirical_measure(cfg, F), degenerate_measure_error);
}

TEST_CASE("config validation") {
    SieveGrid grid({1}, {{0}}, {1.0});
    CHECK_THROWS_AS(SieveConfig::make(grid, 100, 7), input_error);  // N < 2W
    SieveConfig ok = SieveConfig::make(grid, 100000, 7);
    CHECK(ok.phi_W == 48);
    CHECK(ok.B == doctest::Approx((48.0 / 210.0) * std::log(100000.0)));
}

TEST_CASE("verify_estimates reports every quantity with predictions") {
    SieveGrid grid({2}, {{0, 2}}, {1.0});
    TensorSumF F = maynard_basis(2).with_grid(grid);
    SieveConfig cfg = SieveConfig::make(grid, 200000, 7);
    EstimateReport rep = verify_estimates(cfg, F);
    CHECK(rep.k == 2);
    CHECK(rep.class_count > 0);
    CHECK(rep.weight_sum.empirical > 0);
    CHECK(rep.weight_sum.predicted > 0);
    REQUIRE(rep.singles.size() == 2);
    for (const CellEstimate& ce : rep.singles) {
        CHECK(ce.line.predicted > 0);
        CHECK(ce.nu >= 0);
        CHECK(ce.nu <= 1.0 + 1e-12);
    }
    REQUIRE(rep.pairs.size() == 1);
    CHECK(rep.pairs[0].within_block);

    // Single-cell grids carry no pair column.
    TensorSumF F1 = one_cell(0, Rational(1));
    SieveConfig cfg1 = SieveConfig::make(F1.grid(), 100000, 7);
    EstimateReport rep1 = verify_estimates(cfg1, F1);
    CHECK(rep1.pairs.empty());
    CHECK(rep1.singles.size() == 1);
}

TEST_CASE("chunked sums are permutation-stable across chunk boundaries") {
    std::mt19937_64 rng(115);
    std::vector<double> xs(3 * kReductionChunk + 17);
    for (double& x : xs) x = std::uniform_real_distribution<>(-1, 1)(rng);
    double a = chunked_sum(xs);
    double b = chunked_sum(xs);
    CHECK(a == b);
    long double naive = 0;
    for (double x : xs) naive += x;
    CHECK(a == doctest::Approx(static_cast<double>(naive)).epsilon(1e-12));
}
