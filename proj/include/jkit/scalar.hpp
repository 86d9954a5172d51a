#pragma once

#include <optional>
#include <set>

#include "jkit/base.hpp"

namespace jkit {

// A monomial is  x1^a1 ... xk^ak * exp(l)  where the ai are non-negative
// integers and l is a linear form in chart variables with rational
// coefficients.  Exponential factors multiply by adding linear forms, so
// exp(q+t) and exp(q)*exp(t) are the same monomial.
struct Monomial {
    std::vector<std::pair<Var, int>> powers;  // sorted by var name, exponents > 0
    std::vector<std::pair<Var, Rat>> expo;    // sorted by var name, coeffs != 0

    bool is_one() const { return powers.empty() && expo.empty(); }
    bool has_powers() const { return !powers.empty(); }
    bool has_expo() const { return !expo.empty(); }

    Monomial times(const Monomial& o) const;
    // Divides by o; power exponents must stay non-negative.
    std::optional<Monomial> divided_by(const Monomial& o) const;

    static int compare(const Monomial& a, const Monomial& b);
    bool operator==(const Monomial& o) const { return compare(*this, o) == 0; }
};

struct MonoLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return Monomial::compare(a, b) < 0;
    }
};

// Sparse polynomial over Q in chart variables and exponential generators.
class Poly {
  public:
    std::map<Monomial, Rat, MonoLess> terms;  // nonzero coefficients only

    Poly() = default;
    explicit Poly(const Rat& c);

    static Poly var(Var v);
    static Poly monomial(const Monomial& m, const Rat& c);

    bool is_zero() const { return terms.empty(); }
    bool is_constant() const;
    // Nonzero constant-free exponential monomial: c * exp(l).
    bool is_unit_monomial() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator-() const;
    Poly times_monomial(const Monomial& m, const Rat& c) const;
    // Shifts every term's exponential part by -l.
    Poly shift_expo(const std::vector<std::pair<Var, Rat>>& l) const;

    Poly derivative(Var v) const;

    const Monomial& leading_monomial() const;
    const Rat& leading_coeff() const;

    void add_term(const Monomial& m, const Rat& c);
    std::set<Var, VarLess> variables() const;

    bool operator==(const Poly& o) const { return terms == o.terms; }
};

// Exact division; returns nothing when o does not divide *this.
std::optional<Poly> divide_exact(const Poly& p, const Poly& d);

// Multivariate gcd over Q, treating exponential generators as Laurent
// variables (so common exp factors are units and never appear in the gcd).
Poly poly_gcd(const Poly& a, const Poly& b);

// Exact rational function: num/den in canonical form.  The denominator's
// leading monomial has coefficient 1 and no exponential part, and num/den
// have no common factor.
class Scalar {
  public:
    Scalar() : num_(), den_(Rat(1)) {}
    Scalar(int c) : Scalar(Rat(c)) {}
    explicit Scalar(const Rat& c) : num_(c), den_(Rat(1)) {}
    static Scalar var(Var v);
    // exp(sum of c_v * v); the zero form gives 1.
    static Scalar exp_linform(const std::vector<std::pair<Var, Rat>>& l);
    static Scalar fraction(Poly num, Poly den);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const;
    // True when the value is a nonzero rational times a single exponential
    // monomial, hence certified nowhere-vanishing.
    bool is_unit() const;
    std::optional<Rat> as_rational() const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;  // throws on division by zero
    Scalar operator-() const;
    Scalar pow(int e) const;
    bool operator==(const Scalar& o) const;

    Scalar derivative(Var v) const;

    // Substitutes scalars for variables; every variable of *this must be
    // assigned.  Arguments of exp must stay linear (throws EvalError).
    Scalar substitute(const std::map<Var, Scalar, VarLess>& assign) const;

    // Value at a rational point, as a scalar in the reserved evaluation
    // variable (exponentials of nonzero rationals stay symbolic; they are
    // algebraically independent, so zero tests on values remain exact).
    Scalar value_at(const Point& p) const;

    // Exact rational evaluation per the library contract: throws EvalError on
    // a pole or when an exponential of a nonzero argument survives.
    Rat evaluate(const Point& p) const;

    std::set<Var, VarLess> variables() const;
    std::string str() const;

  private:
    Poly num_, den_;
    void normalize();
};

Scalar operator*(const Rat& c, const Scalar& s);

enum class Vanishing { Unit, Zero, NonvanishingOnSamples, VanishesAtSample };

std::string vanishing_str(Vanishing v);

struct ClassifyResult {
    Vanishing kind;
    std::optional<Point> witness;  // set for VanishesAtSample

    bool nonvanishing() const {
        return kind == Vanishing::Unit || kind == Vanishing::NonvanishingOnSamples;
    }
};

// Decides nowhere-vanishing per the sampling policy: a unit certificate when
// available, otherwise exact evaluation on the samples.  Throws Inconclusive
// when no usable sample decides the question.
ClassifyResult classify_nonvanishing(const Scalar& s, const std::vector<Point>& samples);

// Expression parser for the grammar
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' integer)?
//   base   := rational | var | 'exp' '(' linform ')' | '(' expr ')'
Scalar parse_scalar(const std::string& text, const std::vector<Var>& chart_vars);

}  // namespace jkit
