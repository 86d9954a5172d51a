#pragma once

#include "jkit/matrix.hpp"
#include "jkit/scalar.hpp"

namespace jkit {

struct Chart {
    std::string name;
    std::vector<Var> coords;

    static Chart make(const std::string& name, const std::vector<std::string>& coord_names);

    int dim() const { return static_cast<int>(coords.size()); }
    int index_of(Var v) const;

    // compatibility is by coordinates, not by name
    bool operator==(const Chart& o) const { return coords == o.coords; }
    bool operator!=(const Chart& o) const { return !(*this == o); }

    // Appends a fresh coordinate (suffix _1, _2, ... on collision).
    Chart extended(const std::string& var_name) const;
};

enum class TKind { MultiVector, Form };

// Sparse graded-antisymmetric coefficient table over strictly increasing
// index tuples.  Degree 0 stores a single component at the empty tuple.
struct Tensor {
    Chart chart;
    TKind kind = TKind::Form;
    int degree = 0;
    std::map<std::vector<int>, Scalar> comps;

    static Tensor zero(const Chart& c, TKind k, int degree);
    static Tensor constant(const Chart& c, TKind k, const Scalar& s);  // degree 0
    static Tensor basis_vector(const Chart& c, int i);                 // d/dx^i
    static Tensor basis_form(const Chart& c, int i);                   // dx^i

    // Adds s * e_{idx}; indices are sorted with the permutation sign and
    // repeated indices contribute nothing.
    void add(std::vector<int> idx, const Scalar& s);
    Scalar comp(std::vector<int> idx) const;  // signed lookup

    bool is_zero() const;
    Scalar scalar_part() const;  // degree 0 only

    Tensor operator+(const Tensor& o) const;
    Tensor operator-(const Tensor& o) const;
    Tensor operator-() const;
    Tensor scaled(const Scalar& s) const;
    bool operator==(const Tensor& o) const;

    std::string str() const;
};

std::vector<std::vector<int>> increasing_tuples(int n, int k);

Tensor wedge(const Tensor& a, const Tensor& b);
Tensor exterior_derivative(const Tensor& form);
// i_X a for a vector field X and a form a of degree >= 1.
Tensor interior_vector(const Tensor& x, const Tensor& form);
// i_alpha P: contraction of a 1-form into a multivector field.
Tensor interior_covector(const Tensor& alpha, const Tensor& mv);
// Cartan formula on forms, Schouten bracket on multivector fields.
Tensor lie_derivative(const Tensor& x, const Tensor& a);
// Schouten bracket with [X, f] = X(f), [X, Y] the Lie bracket and
// [P, Q] = -(-1)^{(p-1)(q-1)} [Q, P].
Tensor schouten(const Tensor& p, const Tensor& q);

Scalar apply_vector(const Tensor& x, const Scalar& f);  // X(f)

struct SmoothMap {
    Chart source, target;
    std::vector<Scalar> comps;  // one expression per target coordinate

    static SmoothMap make(const Chart& source, const Chart& target, std::vector<Scalar> comps);
    // Projection selecting a subset of source coordinates by name.
    static SmoothMap projection(const Chart& source, const Chart& target,
                                const std::vector<int>& source_indices);

    Scalar pull_scalar(const Scalar& f) const;
    Tensor pullback(const Tensor& form) const;
    Mat jacobian() const;  // rows target, cols source
    bool is_submersion_at(const Point& p) const;
};

// phi_* src = dst, componentwise as canonical-zero identities.
bool related_check(const SmoothMap& phi, const Tensor& src, const Tensor& dst);

}  // namespace jkit
