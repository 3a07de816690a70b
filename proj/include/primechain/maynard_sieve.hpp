#pragma once

#include <vector>

#include "primechain/admissibility.hpp"
#include "primechain/core.hpp"
#include "primechain/tensor_sum.hpp"

namespace primechain {

// Sieve run parameters plus everything derived from them: the residue class
// b (W) through which n is driven, and the normalisation B = phi(W)/W log N.
struct SieveConfig {
    SieveGrid grid;
    u64 N = 0;
    u64 z = 7;
    CrtClass cls;
    u64 phi_W = 0;
    double B = 0;

    static SieveConfig make(SieveGrid grid, u64 N, u64 z = 7);
};

// Weight of one divisor tuple (ordered by cell index):
// prod mu(d_c) * sum_alpha prod F'_{alpha,c}(log d_c / log N).
// Zero if any d_c is not squarefree or shares a factor with W.
double lambda_weight(const std::vector<u64>& d, const TensorSumF& F, u64 N,
                     u64 W = 1);

// w(n): zero off (N, 2N] or off the class b (W); otherwise the square of the
// divisor-tuple sum, with d_c ranging over squarefree divisors of n + h_c
// that are coprime to W and at most N^{support_end(cell)}.
double sieve_weight(u64 n, const SieveConfig& cfg, const TensorSumF& F);

// Probability measure on {n in (N, 2N] : n = b (W)} with density w / sum w.
struct EmpiricalMeasure {
    u64 N = 0, W = 1, b = 0;
    std::vector<u64> support;      // ascending
    std::vector<double> weights;   // normalized to 1
    double raw_sum = 0;            // sum of unnormalised weights
};

// Throws degenerate_measure_error when every weight vanishes.
EmpiricalMeasure empirical_measure(const SieveConfig& cfg, const TensorSumF& F);

struct EstimateLine {
    std::string quantity;
    double empirical = 0;
    double predicted = 0;
    double ratio = 0;  // empirical / predicted (0 when predicted is 0)
};

struct CellEstimate {
    Cell cell;
    u64 offset = 0;
    EstimateLine line;
    double nu = 0;          // empirical / sum w
    double target = 0;      // theta_i log J_i / J_i
};

struct PairEstimate {
    Cell a, b;
    u64 offset_a = 0, offset_b = 0;
    bool within_block = false;
    EstimateLine line;
    double nu = 0;
    double target = 0;      // (theta_i log J_i / J_i)^2, within-block only
};

// Empirical sums against the (N/W) B^{-k} {I, J, L} predictions. Pure
// measurement; thresholds live with the caller.
struct EstimateReport {
    u64 N = 0, W = 1, b = 0, z = 0;
    u64 k = 0;
    u64 class_count = 0;
    double B = 0;
    EstimateLine weight_sum;                 // sum w(n) vs (N/W) B^-k I
    std::vector<CellEstimate> singles;       // sum 1_P(n+h) w(n) vs ... J
    std::vector<PairEstimate> pairs;         // sum 1_P 1_P w(n) vs ... L
};

EstimateReport verify_estimates(const SieveConfig& cfg, const TensorSumF& F);

// Shared internal: raw (unnormalised) weights over the class, ascending n,
// summed with the fixed pairwise tree.
struct RawWeights {
    std::vector<u64> support;
    std::vector<double> weights;
    double total = 0;
};
RawWeights raw_sieve_weights(const SieveConfig& cfg, const TensorSumF& F);

// Deterministic chunked reduction used by every big sum in this module.
double chunked_sum(std::span<const double> xs);

} // namespace primechain
