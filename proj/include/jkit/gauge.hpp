#pragma once

#include "jkit/diracjacobi.hpp"

namespace jkit {

struct GaugePair {
    Tensor b1;  // 2-form
    Tensor b;   // 1-form

    static GaugePair make(Tensor b1, Tensor b);
    static GaugePair closed(const Tensor& b) { return make(exterior_derivative(b), b); }
    bool is_closed_pair() const { return (exterior_derivative(b) - b1).is_zero(); }
};

// Generatorwise shift (X,f) + (alpha,g)  ->  (X,f) + (alpha + i_X B1 + f B, g - <X,B>).
// Isotropy of the image is asserted.
std::vector<ExtendedSection> gauge_frame(const DJStructure& l, const GaugePair& gp);

// tau_B = tau_{(dB,B)}; always again Dirac-Jacobi.
DJStructure gauge_dj(const DJStructure& l, const Tensor& b);

// bundle map (X,f) -> i_{(X,f)}(dB, B)
ExtendedBundleMap db_b_tilde(const Tensor& b);

struct AdmissibilityReport {
    ExtendedBundleMap phi;  // Id + (dB,B)~ o sharp
    Scalar det;
    ClassifyResult status;
};

AdmissibilityReport admissibility(const JacobiStructure& j, const Tensor& b,
                                  const std::vector<Point>& samples);

// (pi_B, E_B) from sharp o Phi^{-1}; requires an admissible B.
JacobiStructure gauge_jacobi(const JacobiStructure& j, const Tensor& b,
                             const std::vector<Point>& samples);

// Anchor intertwining, bracket morphism on the coordinate covector frame,
// and cocycle pullback under Phi.
bool verify_algebroid_iso(const JacobiStructure& j, const Tensor& b,
                          const std::vector<Point>& samples);

// eta_B = eta - B
ContactForm gauge_contact(const ContactForm& c, const Tensor& b, const std::vector<Point>& samples);

// (omega - dB - B ^ theta, theta)
LcsStructure gauge_lcs(const LcsStructure& l, const Tensor& b, const std::vector<Point>& samples);

// e^t (pr1* dB + dt ^ pr1* B) on chart x t; closed.
Tensor btilde(const Tensor& b);

// Extends base samples with a few rational t values.
std::vector<Point> extend_samples(const Chart& extended, const std::vector<Point>& samples);

// tau_{B~} o Dirac = Dirac o tau_B as a span equality of frames.
bool verify_commute_diracization(const DJStructure& l, const Tensor& b,
                                 const std::vector<Point>& samples);

struct PoissonCommuteReport {
    bool commutes = false;
    bool admissibility_statuses_agree = false;
    bool pass() const { return commutes && admissibility_statuses_agree; }
};

// Pois(tau_B(pi,E)) = tau_{B~}(Pois(pi,E)) via the Poisson gauge formula
// pi~ (Id + B~_flat pi~#)^{-1}; also compares the two admissibility verdicts.
PoissonCommuteReport verify_commute_poissonization(const JacobiStructure& j, const Tensor& b,
                                                   const std::vector<Point>& samples);

// phi_*(tau_{phi*B} L) = tau_B(phi_* L), fiberwise at the samples.
bool pullback_lemma_check(const SmoothMap& phi, const DJStructure& src, const Tensor& b_target,
                          const std::vector<Point>& samples);

}  // namespace jkit
