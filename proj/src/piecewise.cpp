#include "primechain/piecewise.hpp"

#include <algorithm>
#include <cmath>

namespace primechain {

Rational rational_from_double(double x) {
    if (!std::isfinite(x))
        throw input_error("rational_from_double: value must be finite");
    return Rational(x);
}

Poly::Poly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Poly Poly::constant(const Rational& c) { return Poly(std::vector<Rational>{c}); }

void Poly::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

bool Poly::is_zero() const { return coeffs_.empty(); }

Rational Poly::eval(const Rational& t) const {
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
    return acc;
}

Poly Poly::derivative() const {
    if (coeffs_.size() <= 1) return Poly();
    std::vector<Rational> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
        d[i - 1] = coeffs_[i] * static_cast<int>(i);
    return Poly(std::move(d));
}

Rational Poly::integral(const Rational& a, const Rational& b) const {
    // Antiderivative evaluated exactly at both ends.
    Rational hi = 0, lo = 0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
        Rational c = coeffs_[i] / static_cast<int>(i + 1);
        hi = hi * b + c;
        lo = lo * a + c;
    }
    return hi * b - lo * a;
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<Rational> s(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) s[i] += coeffs_[i];
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) s[i] += o.coeffs_[i];
    return Poly(std::move(s));
}

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly();
    std::vector<Rational> p(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
            p[i + j] += coeffs_[i] * o.coeffs_[j];
    return Poly(std::move(p));
}

Poly Poly::scaled(const Rational& c) const {
    std::vector<Rational> s(coeffs_);
    for (auto& x : s) x *= c;
    return Poly(std::move(s));
}

Poly Poly::arg_scaled(const Rational& s) const {
    if (s <= 0) throw input_error("Poly::arg_scaled: scale must be positive");
    std::vector<Rational> out(coeffs_);
    Rational pw = 1;
    for (std::size_t i = 1; i < out.size(); ++i) {
        pw /= s;
        out[i] *= pw;
    }
    return Poly(std::move(out));
}

// ---------------------------------------------------------------------------

BasisFunction BasisFunction::from_pieces(std::vector<Rational> breaks,
                                         std::vector<Poly> pieces) {
    if (breaks.size() < 2 || pieces.size() + 1 != breaks.size())
        throw construction_error("BasisFunction: need m pieces and m+1 breakpoints");
    if (breaks.front() != 0)
        throw construction_error("BasisFunction: breakpoints must start at 0");
    for (std::size_t i = 1; i < breaks.size(); ++i)
        if (breaks[i] <= breaks[i - 1])
            throw construction_error("BasisFunction: breakpoints must increase");

    BasisFunction f;
    f.breaks_ = std::move(breaks);
    f.pieces_ = std::move(pieces);

    // C^1 gluing at interior seams and a double zero at the support end.
    for (std::size_t i = 1; i + 1 < f.breaks_.size(); ++i) {
        const Rational& b = f.breaks_[i];
        if (f.pieces_[i - 1].eval(b) != f.pieces_[i].eval(b) ||
            f.pieces_[i - 1].derivative().eval(b) != f.pieces_[i].derivative().eval(b))
            throw construction_error("BasisFunction: not C^1 at an interior breakpoint");
    }
    const Rational& end = f.breaks_.back();
    const Poly& last = f.pieces_.back();
    if (last.eval(end) != 0 || last.derivative().eval(end) != 0)
        throw construction_error("BasisFunction: value and slope must vanish at the support end");

    f.compile();
    return f;
}

BasisFunction BasisFunction::single(const Rational& end, Poly piece) {
    return from_pieces({Rational(0), end}, {std::move(piece)});
}

BasisFunction BasisFunction::zero() {
    return from_pieces({Rational(0), Rational(1)}, {Poly()});
}

bool BasisFunction::is_zero() const {
    for (const Poly& p : pieces_)
        if (!p.is_zero()) return false;
    return true;
}

void BasisFunction::compile() {
    dbreaks_.clear();
    vcoef_.clear();
    dcoef_.clear();
    for (const Rational& b : breaks_) dbreaks_.push_back(to_double(b));
    for (const Poly& p : pieces_) {
        std::vector<double> v, d;
        for (const Rational& c : p.coeffs()) v.push_back(to_double(c));
        Poly dp = p.derivative();
        for (const Rational& c : dp.coeffs()) d.push_back(to_double(c));
        vcoef_.push_back(std::move(v));
        dcoef_.push_back(std::move(d));
    }
}

namespace {

double horner(const std::vector<double>& c, double t) {
    double acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
    return acc;
}

} // namespace

double BasisFunction::value(double t) const {
    if (t < 0 || t >= dbreaks_.back()) return 0.0;
    std::size_t i = 0;
    while (i + 2 < dbreaks_.size() && t >= dbreaks_[i + 1]) ++i;
    return horner(vcoef_[i], t);
}

double BasisFunction::derivative(double t) const {
    if (t < 0 || t >= dbreaks_.back()) return 0.0;
    std::size_t i = 0;
    while (i + 2 < dbreaks_.size() && t >= dbreaks_[i + 1]) ++i;
    return horner(dcoef_[i], t);
}

Rational BasisFunction::value_at(const Rational& t) const {
    if (t < 0 || t >= breaks_.back()) return 0;
    std::size_t i = 0;
    while (i + 2 < breaks_.size() && t >= breaks_[i + 1]) ++i;
    return pieces_[i].eval(t);
}

Rational BasisFunction::derivative_at(const Rational& t) const {
    if (t < 0 || t >= breaks_.back()) return 0;
    std::size_t i = 0;
    while (i + 2 < breaks_.size() && t >= breaks_[i + 1]) ++i;
    return pieces_[i].derivative().eval(t);
}

Rational BasisFunction::integral() const {
    Rational acc = 0;
    for (std::size_t i = 0; i < pieces_.size(); ++i)
        acc += pieces_[i].integral(breaks_[i], breaks_[i + 1]);
    return acc;
}

Rational BasisFunction::product_integral(const BasisFunction& f, const BasisFunction& g) {
    // Merge the two partitions, multiply pieces on each segment.
    std::vector<Rational> cuts;
    cuts.insert(cuts.end(), f.breaks_.begin(), f.breaks_.end());
    cuts.insert(cuts.end(), g.breaks_.begin(), g.breaks_.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto piece_at = [](const BasisFunction& h, const Rational& t) -> const Poly* {
        if (t >= h.breaks_.back()) return nullptr;
        std::size_t i = 0;
        while (i + 2 < h.breaks_.size() && t >= h.breaks_[i + 1]) ++i;
        return &h.pieces_[i];
    };

    Rational acc = 0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const Rational& a = cuts[s];
        const Rational& b = cuts[s + 1];
        const Poly* pf = piece_at(f, a);
        const Poly* pg = piece_at(g, a);
        if (!pf || !pg) continue;
        acc += ((*pf) * (*pg)).integral(a, b);
    }
    return acc;
}

BasisFunction BasisFunction::arg_scaled(const Rational& theta) const {
    if (theta <= 0) throw input_error("BasisFunction::arg_scaled: theta must be positive");
    BasisFunction f;
    f.breaks_ = breaks_;
    for (auto& b : f.breaks_) b *= theta;
    f.pieces_.reserve(pieces_.size());
    for (const Poly& p : pieces_) f.pieces_.push_back(p.arg_scaled(theta));
    f.compile();
    return f;
}

BasisFunction BasisFunction::scaled(const Rational& c) const {
    BasisFunction f;
    f.breaks_ = breaks_;
    f.pieces_.reserve(pieces_.size());
    for (const Poly& p : pieces_) f.pieces_.push_back(p.scaled(c));
    f.compile();
    return f;
}

} // namespace primechain
