#include "jkit/e1.hpp"

namespace jkit {

PairForm PairForm::make(Tensor hi, Tensor lo) {
    if (hi.kind != TKind::Form || lo.kind != TKind::Form) throw Error("pair form needs forms");
    if (hi.chart != lo.chart) throw ChartMismatch("pair form slots on different charts");
    if (hi.degree != lo.degree + 1) throw Error("pair form degrees must be offset by one");
    PairForm p;
    p.chart = hi.chart;
    p.degree = hi.degree;
    p.hi = std::move(hi);
    p.lo = std::move(lo);
    return p;
}

PairForm PairForm::scalar(const Chart& c, const Scalar& g) {
    PairForm p;
    p.chart = c;
    p.degree = 0;
    p.hi = Tensor::constant(c, TKind::Form, g);
    p.lo = Tensor::zero(c, TKind::Form, 0);
    return p;
}

PairForm PairForm::zero(const Chart& c, int degree) {
    PairForm p;
    p.chart = c;
    p.degree = degree;
    p.hi = Tensor::zero(c, TKind::Form, degree);
    p.lo = Tensor::zero(c, TKind::Form, degree > 0 ? degree - 1 : 0);
    return p;
}

bool PairForm::is_zero() const { return hi.is_zero() && (degree == 0 || lo.is_zero()); }

PairForm PairForm::operator+(const PairForm& o) const {
    if (degree != o.degree) throw Error("pair form degree mismatch");
    PairForm p = *this;
    p.hi = hi + o.hi;
    if (degree > 0) p.lo = lo + o.lo;
    return p;
}

PairForm PairForm::operator-(const PairForm& o) const {
    if (degree != o.degree) throw Error("pair form degree mismatch");
    PairForm p = *this;
    p.hi = hi - o.hi;
    if (degree > 0) p.lo = lo - o.lo;
    return p;
}

PairForm PairForm::scaled(const Scalar& s) const {
    PairForm p = *this;
    p.hi = hi.scaled(s);
    p.lo = lo.scaled(s);
    return p;
}

bool PairForm::operator==(const PairForm& o) const {
    return degree == o.degree && hi == o.hi && (degree == 0 || lo == o.lo);
}

ExtendedVector ExtendedVector::make(Tensor x, Scalar f) {
    if (x.kind != TKind::MultiVector || x.degree != 1)
        throw Error("extended vector needs a vector field");
    return ExtendedVector{std::move(x), std::move(f)};
}

ExtendedVector ExtendedVector::zero(const Chart& c) {
    return ExtendedVector{Tensor::zero(c, TKind::MultiVector, 1), Scalar()};
}

ExtendedVector ExtendedVector::operator+(const ExtendedVector& o) const {
    return ExtendedVector{x + o.x, f + o.f};
}

ExtendedVector ExtendedVector::operator-() const { return ExtendedVector{-x, -f}; }

ExtendedVector ExtendedVector::scaled(const Scalar& s) const {
    return ExtendedVector{x.scaled(s), f * s};
}

ExtendedCovector ExtendedCovector::make(Tensor alpha, Scalar g) {
    if (alpha.kind != TKind::Form || alpha.degree != 1) throw Error("extended covector needs a 1-form");
    return ExtendedCovector{std::move(alpha), std::move(g)};
}

ExtendedCovector ExtendedCovector::zero(const Chart& c) {
    return ExtendedCovector{Tensor::zero(c, TKind::Form, 1), Scalar()};
}

ExtendedCovector ExtendedCovector::operator+(const ExtendedCovector& o) const {
    return ExtendedCovector{alpha + o.alpha, g + o.g};
}

ExtendedCovector ExtendedCovector::operator-(const ExtendedCovector& o) const {
    return ExtendedCovector{alpha - o.alpha, g - o.g};
}

ExtendedCovector ExtendedCovector::scaled(const Scalar& s) const {
    return ExtendedCovector{alpha.scaled(s), g * s};
}

PairForm ExtendedCovector::as_pair() const {
    return PairForm::make(alpha, Tensor::constant(alpha.chart, TKind::Form, g));
}

ExtendedCovector ExtendedCovector::from_pair(const PairForm& p) {
    if (p.degree != 1) throw Error("extended covector needs a degree-1 pair");
    return ExtendedCovector{p.hi, p.lo.scalar_part()};
}

ExtendedSection ExtendedSection::make(ExtendedVector v, ExtendedCovector c) {
    if (v.x.chart != c.alpha.chart) throw ChartMismatch("extended section slots on different charts");
    return ExtendedSection{std::move(v), std::move(c)};
}

ExtendedSection ExtendedSection::operator+(const ExtendedSection& o) const {
    return ExtendedSection{v + o.v, c + o.c};
}

ExtendedSection ExtendedSection::scaled(const Scalar& s) const {
    return ExtendedSection{v.scaled(s), c.scaled(s)};
}

PairForm tilde_d(const PairForm& a) {
    if (a.degree == 0)
        return PairForm::make(exterior_derivative(a.hi), a.hi);
    return PairForm::make(exterior_derivative(a.hi), a.hi - exterior_derivative(a.lo));
}

PairForm tilde_i(const ExtendedVector& v, const PairForm& a) {
    if (a.degree < 1) throw Error("contraction of a degree-0 pair");
    if (v.x.chart != a.chart) throw ChartMismatch("contraction across charts");
    if (a.degree == 1) {
        Scalar hi = interior_vector(v.x, a.hi).scalar_part() + v.f * a.lo.scalar_part();
        return PairForm::scalar(a.chart, hi);
    }
    Tensor hi = interior_vector(v.x, a.hi) + a.lo.scaled(v.f);
    Tensor lo = -interior_vector(v.x, a.lo);
    return PairForm::make(std::move(hi), std::move(lo));
}

PairForm tilde_lie(const ExtendedVector& v, const PairForm& a) {
    PairForm first = tilde_i(v, tilde_d(a));
    if (a.degree == 0) return first;
    return first + tilde_d(tilde_i(v, a));
}

ExtendedVector ext_bracket(const ExtendedVector& a, const ExtendedVector& b) {
    return ExtendedVector{schouten(a.x, b.x), apply_vector(a.x, b.f) - apply_vector(b.x, a.f)};
}

Scalar e1_pairing(const ExtendedSection& s1, const ExtendedSection& s2) {
    Scalar lhs = tilde_i(s1.v, s2.c.as_pair()).hi.scalar_part();
    Scalar rhs = tilde_i(s2.v, s1.c.as_pair()).hi.scalar_part();
    return Scalar(Rat(1, 2)) * (lhs + rhs);
}

ExtendedSection dorfman(const ExtendedSection& s1, const ExtendedSection& s2) {
    ExtendedVector vec = ext_bracket(s1.v, s2.v);
    PairForm cov = tilde_lie(s1.v, s2.c.as_pair()) - tilde_i(s2.v, tilde_d(s1.c.as_pair()));
    return ExtendedSection{vec, ExtendedCovector::from_pair(cov)};
}

}  // namespace jkit
