#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "primechain/core.hpp"

namespace primechain {

// Exact rationals for one-dimensional integrals; doubles only at the edges.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Every finite double is dyadic, so this conversion is exact.
Rational rational_from_double(double x);

// Dense polynomial with rational coefficients, ascending powers.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Rational> coeffs);
    static Poly constant(const Rational& c);

    bool is_zero() const;
    std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    Rational eval(const Rational& t) const;
    Poly derivative() const;
    Rational integral(const Rational& a, const Rational& b) const;

    Poly operator+(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly scaled(const Rational& c) const;
    // p(t) -> p(t/s)
    Poly arg_scaled(const Rational& s) const;

private:
    void trim();
    std::vector<Rational> coeffs_;
};

// C^1 compactly supported piecewise polynomial on [0, inf): zero beyond the
// last breakpoint, with value and first derivative matching at every seam
// (including a double zero at the support end).
class BasisFunction {
public:
    // breaks: 0 = b_0 < b_1 < ... < b_m; pieces: m polynomials, piece i live
    // on [b_i, b_{i+1}). Throws construction_error if the C^1 gluing fails.
    static BasisFunction from_pieces(std::vector<Rational> breaks,
                                     std::vector<Poly> pieces);
    // Single piece on [0, end).
    static BasisFunction single(const Rational& end, Poly piece);
    static BasisFunction zero();

    bool is_zero() const;
    const Rational& support_end() const { return breaks_.back(); }

    double value(double t) const;
    double derivative(double t) const;
    Rational value_at(const Rational& t) const;
    Rational derivative_at(const Rational& t) const;

    // Exact integral over [0, inf).
    Rational integral() const;
    // Exact integral of the pointwise product over [0, inf).
    static Rational product_integral(const BasisFunction& f, const BasisFunction& g);

    // t -> f(t/theta); support scales by theta. Requires theta > 0.
    BasisFunction arg_scaled(const Rational& theta) const;
    BasisFunction scaled(const Rational& c) const;

    const std::vector<Rational>& breaks() const { return breaks_; }
    const std::vector<Poly>& pieces() const { return pieces_; }

private:
    BasisFunction() = default;
    void compile();

    std::vector<Rational> breaks_;
    std::vector<Poly> pieces_;
    // Compiled double tables for the hot evaluation paths.
    std::vector<double> dbreaks_;
    std::vector<std::vector<double>> vcoef_, dcoef_;
};

} // namespace primechain
