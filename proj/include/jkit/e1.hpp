#pragma once

#include "jkit/geom.hpp"

namespace jkit {

// (alpha, beta) in Omega^k x Omega^{k-1}; degree-0 pairs have no lo slot.
struct PairForm {
    Chart chart;
    int degree = 0;
    Tensor hi;  // degree k form
    Tensor lo;  // degree k-1 form; zero placeholder when k == 0

    static PairForm make(Tensor hi, Tensor lo);
    static PairForm scalar(const Chart& c, const Scalar& g);
    static PairForm zero(const Chart& c, int degree);

    bool is_zero() const;
    PairForm operator+(const PairForm& o) const;
    PairForm operator-(const PairForm& o) const;
    PairForm scaled(const Scalar& s) const;
    bool operator==(const PairForm& o) const;
};

struct ExtendedVector {
    Tensor x;  // vector field
    Scalar f;

    static ExtendedVector make(Tensor x, Scalar f);
    static ExtendedVector zero(const Chart& c);
    ExtendedVector operator+(const ExtendedVector& o) const;
    ExtendedVector operator-() const;
    ExtendedVector scaled(const Scalar& s) const;
    bool is_zero() const { return x.is_zero() && f.is_zero(); }
};

struct ExtendedCovector {
    Tensor alpha;  // 1-form
    Scalar g;

    static ExtendedCovector make(Tensor alpha, Scalar g);
    static ExtendedCovector zero(const Chart& c);
    ExtendedCovector operator+(const ExtendedCovector& o) const;
    ExtendedCovector operator-(const ExtendedCovector& o) const;
    ExtendedCovector scaled(const Scalar& s) const;
    bool is_zero() const { return alpha.is_zero() && g.is_zero(); }
    bool operator==(const ExtendedCovector& o) const { return alpha == o.alpha && g == o.g; }

    PairForm as_pair() const;
    static ExtendedCovector from_pair(const PairForm& p);
};

// (X,f) + (alpha,g), a section of E^1(M) = (TM x R) + (T*M x R).
struct ExtendedSection {
    ExtendedVector v;
    ExtendedCovector c;

    static ExtendedSection make(ExtendedVector v, ExtendedCovector c);
    ExtendedSection operator+(const ExtendedSection& o) const;
    ExtendedSection scaled(const Scalar& s) const;
    bool is_zero() const { return v.is_zero() && c.is_zero(); }
};

// d~(alpha, beta) = (d alpha, alpha - d beta); on degree 0, d~(g) = (dg, g).
PairForm tilde_d(const PairForm& a);
// i_{(X,f)}(alpha, beta) = (i_X alpha + f beta, -i_X beta); degree >= 1.
PairForm tilde_i(const ExtendedVector& v, const PairForm& a);
// Cartan formula i o d~ + d~ o i.
PairForm tilde_lie(const ExtendedVector& v, const PairForm& a);

// [(X,f),(Y,h)] = ([X,Y], X(h) - Y(f))
ExtendedVector ext_bracket(const ExtendedVector& a, const ExtendedVector& b);

// <<s1, s2>> = 1/2 (i_{(X,f)}(beta,k) + i_{(Y,h)}(alpha,g))
Scalar e1_pairing(const ExtendedSection& s1, const ExtendedSection& s2);

// [(X,f)+(alpha,g), (Y,h)+(beta,k)] =
//   [(X,f),(Y,h)] + (L~_{(X,f)}(beta,k) - i_{(Y,h)} d~(alpha,g))
ExtendedSection dorfman(const ExtendedSection& s1, const ExtendedSection& s2);

}  // namespace jkit
