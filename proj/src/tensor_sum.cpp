#include "primechain/tensor_sum.hpp"

#include <algorithm>
#include <cmath>

namespace primechain {

SieveGrid::SieveGrid(std::vector<std::size_t> block_sizes,
                     std::vector<std::vector<u64>> offsets,
                     std::vector<double> thetas)
    : block_sizes_(std::move(block_sizes)),
      offsets_(std::move(offsets)),
      thetas_(std::move(thetas)) {
    if (block_sizes_.empty()) throw input_error("SieveGrid: need at least one block");
    for (std::size_t J : block_sizes_)
        if (J < 1) throw input_error("SieveGrid: every block needs at least one cell");
    if (offsets_.size() != block_sizes_.size() || thetas_.size() != block_sizes_.size())
        throw input_error("SieveGrid: offsets/thetas must match the block count");

    Rational theta_sum = 0;
    for (double th : thetas_) {
        if (!(th > 0)) throw input_error("SieveGrid: thetas must be positive");
        theta_sum += rational_from_double(th);
    }
    if (theta_sum > 1) throw input_error("SieveGrid: thetas must sum to at most 1");

    std::vector<u64> flat;
    for (std::size_t i = 0; i < block_sizes_.size(); ++i) {
        if (offsets_[i].size() != block_sizes_[i])
            throw input_error("SieveGrid: block " + std::to_string(i + 1) +
                              " offset count mismatch");
        flat.insert(flat.end(), offsets_[i].begin(), offsets_[i].end());
    }
    flat_ = OffsetTuple(std::move(flat));  // enforces the strict global ordering
    if (!is_admissible(flat_).admissible)
        throw input_error("SieveGrid: the flat offset tuple is not admissible");
}

std::size_t SieveGrid::cell_index(Cell c) const {
    if (c.i >= block_sizes_.size() || c.j >= block_sizes_[c.i])
        throw input_error("SieveGrid: cell out of range");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < c.i; ++i) idx += block_sizes_[i];
    return idx + c.j;
}

Cell SieveGrid::cell_at(std::size_t idx) const {
    for (std::size_t i = 0; i < block_sizes_.size(); ++i) {
        if (idx < block_sizes_[i]) return Cell{i, idx};
        idx -= block_sizes_[i];
    }
    throw input_error("SieveGrid: cell index out of range");
}

std::vector<Cell> SieveGrid::cells() const {
    std::vector<Cell> out;
    out.reserve(cell_count());
    for (std::size_t i = 0; i < block_sizes_.size(); ++i)
        for (std::size_t j = 0; j < block_sizes_[i]; ++j) out.push_back(Cell{i, j});
    return out;
}

// ---------------------------------------------------------------------------

TensorSumF::TensorSumF(SieveGrid grid, std::vector<std::vector<BasisFunction>> terms)
    : grid_(std::move(grid)) {
    const Rational budget(1, 10);
    for (auto& term : terms) {
        if (term.size() != grid_.cell_count())
            throw construction_error("TensorSumF: term factor count mismatch");
        bool dead = false;
        Rational support_sum = 0;
        for (const BasisFunction& f : term) {
            if (f.is_zero()) dead = true;
            support_sum += f.support_end();
        }
        if (support_sum > budget)
            throw construction_error("TensorSumF: term supports sum beyond 1/10");
        if (!dead) terms_.push_back(std::move(term));
    }
    if (terms_.empty())
        throw construction_error("TensorSumF: cutoff is identically zero");
}

Rational TensorSumF::cell_support(std::size_t cell_idx) const {
    Rational s = 0;
    for (const auto& term : terms_)
        s = std::max(s, term[cell_idx].support_end());
    return s;
}

double TensorSumF::value(std::span<const double> t) const {
    double acc = 0;
    for (const auto& term : terms_) {
        double prod = 1;
        for (std::size_t c = 0; c < term.size() && prod != 0; ++c)
            prod *= term[c].value(t[c]);
        acc += prod;
    }
    return acc;
}

double TensorSumF::derivative_product(std::span<const double> u) const {
    double acc = 0;
    for (const auto& term : terms_) {
        double prod = 1;
        for (std::size_t c = 0; c < term.size() && prod != 0; ++c)
            prod *= term[c].derivative(u[c]);
        acc += prod;
    }
    return acc;
}

TensorSumF TensorSumF::with_grid(SieveGrid grid) const {
    if (grid.block_sizes() != grid_.block_sizes())
        throw construction_error("TensorSumF::with_grid: block shapes differ");
    return TensorSumF(std::move(grid), terms_);
}

// ---------------------------------------------------------------------------
// Functionals, reduced to 1-D exact integrals.

Rational I_exact(const TensorSumF& F) {
    Rational acc = 0;
    for (std::size_t a = 0; a < F.term_count(); ++a) {
        Rational prod = 1;
        for (std::size_t c = 0; c < F.grid().cell_count(); ++c)
            prod *= F.factor(a, c).integral();
        acc += prod;
    }
    return acc;
}

Rational J_exact(const TensorSumF& F, Cell cell) {
    std::size_t c1 = F.grid().cell_index(cell);
    std::size_t k = F.grid().cell_count();
    Rational acc = 0;
    for (std::size_t a = 0; a < F.term_count(); ++a) {
        for (std::size_t b = 0; b < F.term_count(); ++b) {
            Rational prod = F.factor(a, c1).integral() * F.factor(b, c1).integral();
            for (std::size_t c = 0; c < k && prod != 0; ++c) {
                if (c == c1) continue;
                prod *= BasisFunction::product_integral(F.factor(a, c), F.factor(b, c));
            }
            acc += prod;
        }
    }
    return acc;
}

Rational L_exact(const TensorSumF& F, Cell cell1, Cell cell2) {
    std::size_t c1 = F.grid().cell_index(cell1);
    std::size_t c2 = F.grid().cell_index(cell2);
    if (c1 == c2) throw input_error("L functional needs two distinct cells");
    std::size_t k = F.grid().cell_count();
    Rational acc = 0;
    for (std::size_t a = 0; a < F.term_count(); ++a) {
        for (std::size_t b = 0; b < F.term_count(); ++b) {
            Rational prod = F.factor(a, c1).integral() * F.factor(b, c1).integral() *
                            F.factor(a, c2).integral() * F.factor(b, c2).integral();
            for (std::size_t c = 0; c < k && prod != 0; ++c) {
                if (c == c1 || c == c2) continue;
                prod *= BasisFunction::product_integral(F.factor(a, c), F.factor(b, c));
            }
            acc += prod;
        }
    }
    return acc;
}

double I_functional(const TensorSumF& F) { return to_double(I_exact(F)); }
double J_functional(const TensorSumF& F, Cell c) { return to_double(J_exact(F, c)); }
double L_functional(const TensorSumF& F, Cell c1, Cell c2) {
    return to_double(L_exact(F, c1, c2));
}

// ---------------------------------------------------------------------------
// Concrete single-block construction.

namespace {

// Truncation point ~ scale * log2 / (10 J log J), rounded down to keep the
// support budget; exact for powers of two.
Rational truncation_point(std::size_t J, const Rational& scale) {
    if ((J & (J - 1)) == 0) {
        std::size_t m = 0;
        for (std::size_t v = J; v > 1; v >>= 1) ++m;
        return scale / Rational(10 * J * m);
    }
    double t0 = to_double(scale) * std::log(2.0) /
                (10.0 * static_cast<double>(J) * std::log(static_cast<double>(J)));
    auto grid = static_cast<long long>(std::floor(t0 * 1e9));
    if (grid <= 0)
        throw input_error("maynard_basis: truncation point underflows the grid");
    return Rational(grid, 1000000000LL);
}

std::vector<std::vector<u64>> default_offsets(const std::vector<std::size_t>& sizes) {
    std::size_t total = 0;
    for (std::size_t J : sizes) total += J;
    OffsetTuple squares = odd_square_offsets(total);
    std::vector<std::vector<u64>> out;
    std::size_t at = 0;
    for (std::size_t J : sizes) {
        out.emplace_back(squares.begin() + at, squares.begin() + at + J);
        at += J;
    }
    return out;
}

} // namespace

TensorSumF maynard_basis(std::size_t J, const MaynardSmoothing& smoothing) {
    if (J < 2) throw input_error("maynard_basis: J must be at least 2");
    if (smoothing.profile_degree < 0 || smoothing.profile_degree > 2)
        throw input_error("maynard_basis: profile_degree must be 0, 1 or 2");
    if (!(smoothing.support_scale > 0) || smoothing.support_scale > 1)
        throw input_error("maynard_basis: support_scale must lie in (0, 1]");
    if (smoothing.max_rank < 1)
        throw input_error("maynard_basis: max_rank must be at least 1");

    Rational scale = rational_from_double(smoothing.support_scale);
    Rational t0 = truncation_point(J, scale);

    // g(t) = (1 - t/t0)^2 * q(t), q the Taylor start of 1/(1+Jt). The window
    // gives the C^1 double zero at t0; q is positive on [0, t0].
    Rational inv_t0 = 1 / t0;
    Poly window({Rational(1), -2 * inv_t0, inv_t0 * inv_t0});
    std::vector<Rational> q{Rational(1)};
    if (smoothing.profile_degree >= 1) q.push_back(-Rational(J));
    if (smoothing.profile_degree >= 2) q.push_back(Rational(J) * Rational(J));
    Poly profile(std::move(q));
    BasisFunction g = BasisFunction::single(t0, window * profile);

    // With supports t0 <= 1/(10J) the whole box lies inside the unit simplex,
    // so the product needs no corrective terms: rank 1 is exact.
    std::vector<BasisFunction> term(J, g);
    SieveGrid grid({J}, default_offsets({J}), {1.0});
    return TensorSumF(std::move(grid), {std::move(term)});
}

BasisRatios measure_basis_ratios(const TensorSumF& block) {
    if (block.grid().block_count() != 1)
        throw input_error("measure_basis_ratios: expected a single-block cutoff");
    std::size_t J = block.grid().block_sizes()[0];
    BasisRatios r;
    r.J = J;
    double logJ = std::log(static_cast<double>(J));
    r.single_target = logJ / static_cast<double>(J);
    r.pair_target = r.single_target * r.single_target;
    Rational I = I_exact(block);
    r.I = to_double(I);
    if (I == 0) throw input_error("measure_basis_ratios: cutoff integrates to zero");
    for (std::size_t j = 0; j < J; ++j)
        r.J_over_I.push_back(to_double(J_exact(block, Cell{0, j}) / I));
    for (std::size_t j = 0; j < J; ++j)
        for (std::size_t j2 = j + 1; j2 < J; ++j2)
            r.L_over_I.push_back(to_double(L_exact(block, Cell{0, j}, Cell{0, j2}) / I));
    double cmin = 0, cmax = 0;
    for (std::size_t idx = 0; idx < r.J_over_I.size(); ++idx) {
        double v = r.J_over_I[idx] / r.single_target;
        cmin = idx == 0 ? v : std::min(cmin, v);
    }
    for (std::size_t idx = 0; idx < r.L_over_I.size(); ++idx) {
        double v = r.L_over_I[idx] / r.pair_target;
        cmax = idx == 0 ? v : std::max(cmax, v);
    }
    r.c_lower = cmin;
    r.C_upper = cmax;
    return r;
}

TensorSumF scaled_product(const std::vector<TensorSumF>& blocks,
                          const std::vector<double>& thetas,
                          std::vector<std::vector<u64>> offsets) {
    if (blocks.empty()) throw input_error("scaled_product: need at least one block");
    if (blocks.size() != thetas.size())
        throw input_error("scaled_product: one theta per block required");
    std::vector<std::size_t> sizes;
    for (const TensorSumF& b : blocks) {
        if (b.grid().block_count() != 1)
            throw input_error("scaled_product: blocks must be single-block cutoffs");
        sizes.push_back(b.grid().block_sizes()[0]);
    }
    if (offsets.empty()) offsets = default_offsets(sizes);
    SieveGrid grid(sizes, std::move(offsets), thetas);

    // Cartesian product of the blocks' term lists, each factor rescaled.
    std::vector<std::vector<BasisFunction>> terms{{}};
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        Rational theta = rational_from_double(thetas[i]);
        std::vector<std::vector<BasisFunction>> next;
        for (std::size_t a = 0; a < blocks[i].term_count(); ++a) {
            std::vector<BasisFunction> slice;
            for (std::size_t j = 0; j < sizes[i]; ++j)
                slice.push_back(blocks[i].factor(a, j).arg_scaled(theta));
            for (const auto& partial : terms) {
                auto combined = partial;
                combined.insert(combined.end(), slice.begin(), slice.end());
                next.push_back(std::move(combined));
            }
        }
        terms = std::move(next);
    }
    try {
        return TensorSumF(std::move(grid), std::move(terms));
    } catch (const construction_error& e) {
        throw construction_error(std::string("scaled_product: ") + e.what());
    }
}

} // namespace primechain
