#pragma once

#include "jkit/e1.hpp"

namespace jkit {

enum class BundleMapKind { CovecToVec, VecToCovec, EndoCovec, EndoVec };

// (n+1)x(n+1) scalar matrix in the frames (d/dx^1..d/dx^n, 1) and
// (dx^1..dx^n, 1*); represents the sharp map, (dB,B)~, Phi and psi_B.
struct ExtendedBundleMap {
    Chart chart;
    BundleMapKind kind = BundleMapKind::EndoCovec;
    Mat m;

    static ExtendedBundleMap make(const Chart& c, BundleMapKind k, Mat m);
    static ExtendedBundleMap identity(const Chart& c, BundleMapKind k);

    ExtendedVector apply(const ExtendedCovector& a) const;         // CovecToVec
    ExtendedCovector apply_endo(const ExtendedCovector& a) const;  // EndoCovec
};

struct JacobiStructure {
    Chart chart;
    Tensor pi;  // bivector
    Tensor e;   // vector field

    static JacobiStructure make(Tensor pi, Tensor e);  // does not verify
    JacobiStructure negated() const;
};

struct JacobiReport {
    Tensor c1;  // [pi,pi] - 2 E ^ pi
    Tensor c2;  // [E, pi]
    bool pass = false;
};

JacobiReport verify_jacobi(const JacobiStructure& j);

// (alpha, g) -> (pi# alpha + g E, -<alpha, E>)
ExtendedBundleMap sharp_map(const JacobiStructure& j);

// pi# alpha as a vector field
Tensor pi_sharp(const Tensor& pi, const Tensor& alpha);

// X_h = pi#(dh) + h E
Tensor hamiltonian_vf(const JacobiStructure& j, const Scalar& h);

Tensor d_scalar(const Chart& c, const Scalar& f);  // df as a 1-form

int characteristic_rank_at(const JacobiStructure& j, const Point& pt);

struct ContactForm {
    Chart chart;
    Tensor eta;
};

// The single top component of eta ^ (d eta)^n (chart dimension must be odd).
Scalar contact_top_coefficient(const Tensor& eta);

// Nondegeneracy policy check; throws Inconclusive when samples cannot decide.
ClassifyResult verify_contact(const Tensor& eta, const std::vector<Point>& samples);

ContactForm make_contact(const Chart& c, Tensor eta, const std::vector<Point>& samples);

// Inverts the flat map X -> i_X d eta + eta(X) eta; throws SingularMatrix
// ("not contact") when the flat map is singular.
JacobiStructure contact_to_jacobi(const ContactForm& c);

// matrix of (X,f) -> (-i_X d eta - f eta, eta(X)), the sharp inverse
ExtendedBundleMap contact_inverse_map(const ContactForm& c);

struct LcsStructure {
    Chart chart;
    Tensor omega;  // nondegenerate 2-form
    Tensor theta;  // closed Lee form
};

Scalar lcs_top_coefficient(const Tensor& omega);
LcsStructure make_lcs(const Chart& c, Tensor omega, Tensor theta, const std::vector<Point>& samples);
JacobiStructure lcs_to_jacobi(const LcsStructure& l);

struct Poissonization {
    Chart chart;  // base chart extended by t
    Tensor pi;    // e^{-t} (pi + dt-direction ^ E)
    JacobiStructure as_jacobi() const { return JacobiStructure::make(pi, Tensor::zero(chart, TKind::MultiVector, 1)); }
};

Poissonization poissonize(const JacobiStructure& j);

// pi_sigma = sigma pi, E_sigma = pi#(d sigma) + sigma E; sigma must pass the
// nowhere-vanishing policy.
JacobiStructure conformal_change(const JacobiStructure& j, const Scalar& sigma,
                                 const std::vector<Point>& samples);

enum class MapMode { Jacobi, Anti, Conformal };

bool check_map(const SmoothMap& phi, const JacobiStructure& src, const JacobiStructure& dst,
               MapMode mode, const Scalar* sigma = nullptr,
               const std::vector<Point>& samples = {});

}  // namespace jkit
