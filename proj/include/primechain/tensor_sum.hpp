#pragma once

#include <compare>
#include <vector>

#include "primechain/admissibility.hpp"
#include "primechain/core.hpp"
#include "primechain/piecewise.hpp"

namespace primechain {

// Grid position: block i, slot j (0-based).
struct Cell {
    std::size_t i = 0, j = 0;
    auto operator<=>(const Cell&) const = default;
};

// Block layout (J_1, ..., J_I), one shift offset per cell, and the block
// scaling exponents theta. The flat offset tuple must be strictly increasing
// across the whole grid and admissible.
class SieveGrid {
public:
    SieveGrid(std::vector<std::size_t> block_sizes,
              std::vector<std::vector<u64>> offsets, std::vector<double> thetas);

    std::size_t block_count() const { return block_sizes_.size(); }
    const std::vector<std::size_t>& block_sizes() const { return block_sizes_; }
    std::size_t cell_count() const { return flat_.size(); }

    u64 offset(Cell c) const { return offsets_[c.i][c.j]; }
    double theta(std::size_t i) const { return thetas_[i]; }
    const std::vector<double>& thetas() const { return thetas_; }
    const OffsetTuple& flat_offsets() const { return flat_; }

    std::size_t cell_index(Cell c) const;
    Cell cell_at(std::size_t idx) const;
    std::vector<Cell> cells() const;

private:
    std::vector<std::size_t> block_sizes_;
    std::vector<std::vector<u64>> offsets_;
    std::vector<double> thetas_;
    OffsetTuple flat_;
};

// Cutoff of the form F(t) = sum_alpha prod_cells F_{alpha,cell}(t_cell).
// Every term's supports must sum to at most 1/10 across the grid.
class TensorSumF {
public:
    // terms[alpha][cell_index]; terms containing an identically-zero factor
    // are dropped, and at least one term must survive.
    TensorSumF(SieveGrid grid, std::vector<std::vector<BasisFunction>> terms);

    const SieveGrid& grid() const { return grid_; }
    std::size_t term_count() const { return terms_.size(); }
    const BasisFunction& factor(std::size_t alpha, std::size_t cell_idx) const {
        return terms_[alpha][cell_idx];
    }

    // Largest support end over terms for one cell.
    Rational cell_support(std::size_t cell_idx) const;

    // F evaluated at a full coordinate vector (doubles, hot path).
    double value(std::span<const double> t) const;
    // sum_alpha prod_cells F'_{alpha,cell}(u_cell).
    double derivative_product(std::span<const double> u) const;

    // Same shape and terms, different offsets/thetas.
    TensorSumF with_grid(SieveGrid grid) const;

private:
    SieveGrid grid_;
    std::vector<std::vector<BasisFunction>> terms_;
};

// Exact functionals: plain integral, squared one-fold inner integral, and
// squared two-fold inner integral, each reduced to products of 1-D exact
// polynomial integrals.
Rational I_exact(const TensorSumF& F);
Rational J_exact(const TensorSumF& F, Cell c);
Rational L_exact(const TensorSumF& F, Cell c1, Cell c2);

double I_functional(const TensorSumF& F);
double J_functional(const TensorSumF& F, Cell c);
double L_functional(const TensorSumF& F, Cell c1, Cell c2);

struct MaynardSmoothing {
    // Taylor order of the 1/(1+Jt) profile factor (0, 1 or 2).
    int profile_degree = 2;
    // Multiplier in (0, 1] on the truncation point.
    double support_scale = 1.0;
    // Cap on tensor terms; the per-cell support budget makes rank 1 exact.
    std::size_t max_rank = 1;
};

// Single-block cutoff on a 1 x J grid: a symmetric product of one profile
// g_J per cell, g_J a smoothed truncation of 1/(1+Jt) cut at
// t0 ~ support_scale * log(2) / (10 J log J), so supports sum to <= 1/10.
TensorSumF maynard_basis(std::size_t J, const MaynardSmoothing& smoothing = {});

// Measured functional ratios of a single-block cutoff against the
// (log J)/J and ((log J)/J)^2 benchmarks.
struct BasisRatios {
    std::size_t J = 0;
    double I = 0;
    std::vector<double> J_over_I;          // per cell
    std::vector<double> L_over_I;          // per unordered pair
    double single_target = 0;              // (log J)/J
    double pair_target = 0;                // ((log J)/J)^2
    double c_lower = 0;                    // min J/I divided by single_target
    double C_upper = 0;                    // max L/I divided by pair_target
};
BasisRatios measure_basis_ratios(const TensorSumF& block);

// F(t) = prod_i F_i(t_{i,1}/theta_i, ..., t_{i,J_i}/theta_i). Offsets for the
// combined grid may be supplied; defaults to consecutive odd squares.
TensorSumF scaled_product(const std::vector<TensorSumF>& blocks,
                          const std::vector<double>& thetas,
                          std::vector<std::vector<u64>> offsets = {});

} // namespace primechain
