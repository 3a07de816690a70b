#include "primechain/maynard_sieve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "primechain/prime_engine.hpp"

namespace primechain {

SieveConfig SieveConfig::make(SieveGrid grid, u64 N, u64 z) {
    SieveConfig cfg{std::move(grid), N, z, {}, 0, 0};
    cfg.cls = primitive_class(cfg.grid.flat_offsets(), z);
    u64 W = cfg.cls.W;
    if (N < checked_mul(2, W))
        throw input_error("SieveConfig: N must be at least 2W");
    checked_add(checked_mul(2, N), cfg.grid.flat_offsets().back());
    cfg.phi_W = 1;
    for (u64 p : small_primes(z)) cfg.phi_W *= p - 1;
    cfg.B = (static_cast<double>(cfg.phi_W) / static_cast<double>(W)) *
            std::log(static_cast<double>(N));
    return cfg;
}

double lambda_weight(const std::vector<u64>& d, const TensorSumF& F, u64 N, u64 W) {
    if (d.size() != F.grid().cell_count())
        throw input_error("lambda_weight: one divisor per cell required");
    if (N < 2) throw input_error("lambda_weight: N must be at least 2");
    double logN = std::log(static_cast<double>(N));
    int mu_prod = 1;
    std::vector<double> u(d.size());
    for (std::size_t c = 0; c < d.size(); ++c) {
        if (d[c] == 0) throw input_error("lambda_weight: divisors must be >= 1");
        if (W > 1 && std::gcd(d[c], W) > 1) return 0.0;
        int mu = mobius(d[c]);
        if (mu == 0) return 0.0;
        mu_prod *= mu;
        u[c] = std::log(static_cast<double>(d[c])) / logN;
    }
    return mu_prod * F.derivative_product(u);
}

namespace {

struct DivisorTable {
    std::vector<u64> values;   // squarefree, coprime to W, <= bound
    std::vector<int> mu;       // matching Moebius signs
};

// Divisors of m that are squarefree, coprime to W and at most bound. Every
// such divisor is a product of distinct primes <= bound, so only the small
// prime factors of m matter.
DivisorTable eligible_divisors(u64 m, u64 W, u64 bound) {
    DivisorTable out;
    out.values.push_back(1);
    out.mu.push_back(1);
    if (bound < 2) return out;
    for (u64 p : small_primes(bound)) {
        if (m % p != 0 || W % p == 0) continue;
        std::size_t upto = out.values.size();
        for (std::size_t i = 0; i < upto; ++i) {
            if (out.values[i] > bound / p) continue;
            out.values.push_back(out.values[i] * p);
            out.mu.push_back(-out.mu[i]);
        }
    }
    return out;
}

u64 divisor_bound(u64 N, const Rational& support) {
    double s = to_double(support);
    if (s <= 0) return 1;
    double b = std::exp(s * std::log(static_cast<double>(N))) + 1e-9;
    if (b >= 9.0e18) return ~u64(0);
    return static_cast<u64>(b);
}

} // namespace

double sieve_weight(u64 n, const SieveConfig& cfg, const TensorSumF& F) {
    u64 N = cfg.N, W = cfg.cls.W;
    if (n <= N || n > 2 * N) return 0.0;
    if (n % W != cfg.cls.b % W) return 0.0;
    double logN = std::log(static_cast<double>(N));
    std::size_t k = cfg.grid.cell_count();

    // Per cell: eligible divisors with their signs, at log-scaled positions.
    std::vector<DivisorTable> tabs(k);
    std::vector<std::vector<double>> us(k);
    for (std::size_t c = 0; c < k; ++c) {
        u64 m = checked_add(n, cfg.grid.offset(cfg.grid.cell_at(c)));
        tabs[c] = eligible_divisors(m, W, divisor_bound(N, F.cell_support(c)));
        us[c].resize(tabs[c].values.size());
        for (std::size_t t = 0; t < tabs[c].values.size(); ++t)
            us[c][t] = std::log(static_cast<double>(tabs[c].values[t])) / logN;
    }

    // The divisor-tuple sum factorises per term into per-cell sums.
    double total = 0;
    for (std::size_t a = 0; a < F.term_count(); ++a) {
        double prod = 1;
        for (std::size_t c = 0; c < k && prod != 0; ++c) {
            double s = 0;
            for (std::size_t t = 0; t < tabs[c].values.size(); ++t)
                s += tabs[c].mu[t] * F.factor(a, c).derivative(us[c][t]);
            prod *= s;
        }
        total += prod;
    }
    return total * total;
}

RawWeights raw_sieve_weights(const SieveConfig& cfg, const TensorSumF& F) {
    u64 N = cfg.N, W = cfg.cls.W, b = cfg.cls.b % W;
    u64 first = N + 1 + (b + W - (N + 1) % W) % W;
    RawWeights out;
    if (first > 2 * N) return out;
    u64 count = (2 * N - first) / W + 1;
    out.support.resize(count);
    out.weights.resize(count);
    std::size_t chunks = (count + kReductionChunk - 1) / kReductionChunk;
    run_chunks(chunks, [&](std::size_t c) {
        std::size_t i0 = c * kReductionChunk;
        std::size_t i1 = std::min<std::size_t>(count, i0 + kReductionChunk);
        for (std::size_t i = i0; i < i1; ++i) {
            u64 n = first + static_cast<u64>(i) * W;
            out.support[i] = n;
            out.weights[i] = sieve_weight(n, cfg, F);
        }
    });
    out.total = chunked_sum(out.weights);
    return out;
}

double chunked_sum(std::span<const double> xs) {
    std::size_t chunks = (xs.size() + kReductionChunk - 1) / kReductionChunk;
    if (chunks <= 1) return pairwise_sum(xs);
    std::vector<double> partial(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        std::size_t i0 = c * kReductionChunk;
        std::size_t i1 = std::min<std::size_t>(xs.size(), i0 + kReductionChunk);
        partial[c] = pairwise_sum(xs.subspan(i0, i1 - i0));
    }
    return pairwise_sum(partial);
}

EmpiricalMeasure empirical_measure(const SieveConfig& cfg, const TensorSumF& F) {
    RawWeights raw = raw_sieve_weights(cfg, F);
    if (raw.total <= 0)
        throw degenerate_measure_error(
            "empirical_measure: all sieve weights vanish on the class");
    EmpiricalMeasure nu;
    nu.N = cfg.N;
    nu.W = cfg.cls.W;
    nu.b = cfg.cls.b;
    nu.support = std::move(raw.support);
    nu.weights = std::move(raw.weights);
    nu.raw_sum = raw.total;
    for (double& w : nu.weights) w /= raw.total;
    return nu;
}

EstimateReport verify_estimates(const SieveConfig& cfg, const TensorSumF& F) {
    RawWeights raw = raw_sieve_weights(cfg, F);
    const std::size_t count = raw.support.size();
    const auto cells = cfg.grid.cells();
    const std::size_t k = cells.size();

    EstimateReport rep;
    rep.N = cfg.N;
    rep.W = cfg.cls.W;
    rep.b = cfg.cls.b;
    rep.z = cfg.z;
    rep.k = k;
    rep.class_count = count;
    rep.B = cfg.B;

    double scale = (static_cast<double>(cfg.N) / static_cast<double>(cfg.cls.W)) *
                   std::pow(cfg.B, -static_cast<double>(k));
    auto line = [&](const std::string& name, double emp, double pred) {
        EstimateLine l{name, emp, pred, pred != 0 ? emp / pred : 0.0};
        return l;
    };

    rep.weight_sum = line("sum_w", raw.total, scale * I_functional(F));

    if (count == 0) return rep;

    // One primality table covering every shifted value.
    u64 lo = raw.support.front();
    u64 hi = checked_add(raw.support.back(), cfg.grid.flat_offsets().back()) + 1;
    PrimeRange table = sieve_range(lo, hi);

    std::vector<std::vector<char>> flag(k, std::vector<char>(count));
    for (std::size_t c = 0; c < k; ++c) {
        u64 h = cfg.grid.offset(cells[c]);
        for (std::size_t i = 0; i < count; ++i)
            flag[c][i] = table.contains(raw.support[i] + h);
    }

    std::vector<double> buf(count);
    auto masked_sum = [&](auto&& keep) {
        for (std::size_t i = 0; i < count; ++i)
            buf[i] = keep(i) ? raw.weights[i] : 0.0;
        return chunked_sum(buf);
    };

    for (std::size_t c = 0; c < k; ++c) {
        Cell cell = cells[c];
        double emp = masked_sum([&](std::size_t i) { return flag[c][i] != 0; });
        CellEstimate ce;
        ce.cell = cell;
        ce.offset = cfg.grid.offset(cell);
        ce.line = line("single", emp, scale * J_functional(F, cell));
        ce.nu = raw.total > 0 ? emp / raw.total : 0.0;
        double Ji = static_cast<double>(cfg.grid.block_sizes()[cell.i]);
        ce.target = Ji > 1 ? cfg.grid.theta(cell.i) * std::log(Ji) / Ji : 0.0;
        rep.singles.push_back(ce);
    }
    for (std::size_t c1 = 0; c1 < k; ++c1) {
        for (std::size_t c2 = c1 + 1; c2 < k; ++c2) {
            Cell a = cells[c1], b2 = cells[c2];
            double emp = masked_sum(
                [&](std::size_t i) { return flag[c1][i] && flag[c2][i]; });
            PairEstimate pe;
            pe.a = a;
            pe.b = b2;
            pe.offset_a = cfg.grid.offset(a);
            pe.offset_b = cfg.grid.offset(b2);
            pe.within_block = a.i == b2.i;
            pe.line = line("pair", emp, scale * L_functional(F, a, b2));
            pe.nu = raw.total > 0 ? emp / raw.total : 0.0;
            if (pe.within_block) {
                double Ji = static_cast<double>(cfg.grid.block_sizes()[a.i]);
                double t = Ji > 1 ? cfg.grid.theta(a.i) * std::log(Ji) / Ji : 0.0;
                pe.target = t * t;
            }
            rep.pairs.push_back(pe);
        }
    }
    return rep;
}

} // namespace primechain
