#pragma once

#include "jkit/gauge.hpp"

namespace jkit {

// Multisection of TM x R in the trivialized frame: P + Q ^ e, with e the
// generator of the R factor.  Equally the forms of the 1-jet algebroid.
struct MvPair {
    Chart chart;
    int degree = 0;
    Tensor p;  // multivector field of the stated degree
    Tensor q;  // degree - 1; zero placeholder at degree 0

    static MvPair make(Tensor p, Tensor q);
    static MvPair scalar(const Chart& c, const Scalar& f);
    static MvPair zero(const Chart& c, int degree);

    bool is_zero() const;
    MvPair operator+(const MvPair& o) const;
    MvPair operator-(const MvPair& o) const;
    MvPair scaled(const Scalar& s) const;
};

MvPair mv_wedge(const MvPair& a, const MvPair& b);
// contraction with the distinguished covector (0,1)
MvPair mv_contract_e(const MvPair& a);
// wedge on pair forms: (a,b)^(c,d) = (a^c, b^c + (-1)^{deg a} a^d)
PairForm pf_wedge(const PairForm& a, const PairForm& b);

enum class AlgebroidSide { TangentExt, CotangentExt };

// The two trivialized Jacobi algebroids of a Jacobi manifold:
//   TangentExt   = (TM x R,  extended bracket, anchor pr1, cocycle (0,1))
//   CotangentExt = (T*M x R, 1-jet bracket, anchor pr1 o sharp, cocycle (-E,0))
struct JacobiAlgebroid {
    AlgebroidSide which = AlgebroidSide::TangentExt;
    Chart chart;
    std::optional<JacobiStructure> j;  // required for CotangentExt
};

struct CanonicalPair {
    JacobiAlgebroid cotangent;
    JacobiAlgebroid tangent;
    JacobiStructure j;
};

CanonicalPair canonical_pair(const JacobiStructure& j);

// Exterior differentials.  Forms of the tangent side are pair forms, forms
// of the cotangent side are multisection pairs.
PairForm tangent_d(const PairForm& a);  // (d alpha, -d beta); twist by (0,1) gives tilde_d
PairForm tangent_d_twisted(const PairForm& a);
MvPair cotangent_d(const JacobiStructure& j, const MvPair& w);  // degrees <= 2
MvPair cotangent_d_twisted(const JacobiStructure& j, const MvPair& w);

// Schouten-Jacobi bracket [P,Q]^{phi0} = [P,Q] + (-1)^{p+1}(p-1) P ^ i_{phi0} Q
//                                       - (q-1) i_{phi0} P ^ Q
MvPair schouten_jacobi_tangent(const MvPair& a, const MvPair& b);
MvPair tangent_gerstenhaber(const MvPair& a, const MvPair& b);  // untwisted
// cotangent side, generated by the 1-jet bracket; degrees <= 2
PairForm schouten_jacobi_cotangent(const JacobiStructure& j, const PairForm& a, const PairForm& b);
PairForm cotangent_gerstenhaber(const JacobiStructure& j, const PairForm& a, const PairForm& b);

// d_*^{X0} [P,Q]^{phi0} = [d_*^{X0} P, Q]^{phi0} + (-1)^{p+1} [P, d_*^{X0} Q]^{phi0}
// for multisections of the tangent side of degree <= 1.
bool verify_glb_compat(const CanonicalPair& pair, const MvPair& p, const MvPair& q);

struct PsiBReport {
    Mat psi;  // Id + sharp o (dB,B)~ on TM x R
    Scalar det;
    ClassifyResult status;
    bool status_matches_admissibility = false;
    bool transpose_is_phi = false;
    bool sharp_coherent = false;         // induced sharp equals the gauged sharp
    bool gauged_cocycle_closed = false;  // X0 o psi^{-1} closed for the gauged algebroid
    bool remark_iso = false;             // isomorphism with the canonical pair of (pi_B, E_B)
    bool pass() const {
        return status.nonvanishing() && status_matches_admissibility && transpose_is_phi &&
               sharp_coherent && gauged_cocycle_closed && remark_iso;
    }
};

PsiBReport psi_b_gauge(const CanonicalPair& pair, const Tensor& b,
                       const std::vector<Point>& samples);

}  // namespace jkit
