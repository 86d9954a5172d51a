#pragma once

#include "jkit/gauge.hpp"

namespace jkit {

// Bundle endomorphism of E^1(M) as a 2(n+1) square matrix in the frame
// (d/dx^1..d/dx^n, 1_R, dx^1..dx^n, 1_R*).
struct E1Endomorphism {
    Chart chart;
    Mat m;

    static E1Endomorphism make(const Chart& c, Mat m);
    static E1Endomorphism identity(const Chart& c);

    // quadrant blocks: (0,0) vec->vec, (0,1) covec->vec,
    // (1,0) vec->covec, (1,1) covec->covec
    Mat block(int r, int c) const;

    ExtendedSection apply(const ExtendedSection& s) const;
};

// I = (0, sharp; (d eta, eta)~, 0)
E1Endomorphism from_contact(const ContactForm& eta);

enum class SquareClass { PlusId, MinusId, Neither };

std::string square_class_str(SquareClass s);

struct GcAxiomReport {
    SquareClass square = SquareClass::Neither;
    bool adjoint_ok = false;  // I* = -I for the E^1 pairing
    bool torsion_zero = false;
    bool operator==(const GcAxiomReport& o) const {
        return square == o.square && adjoint_ok == o.adjoint_ok && torsion_zero == o.torsion_zero;
    }
};

// Nijenhuis torsion with respect to the generalized Dorfman bracket:
// N(a,b) = [[Ia, Ib]] - I[[Ia, b]] - I[[a, Ib]] + I^2 [[a, b]],
// evaluated on all coordinate-frame section pairs.
GcAxiomReport check_axioms(const E1Endomorphism& i);

// exp(B) = (Id, 0; (dB,B)~, Id)
Mat exp_b_matrix(const Tensor& b);

// tau_B(I) = exp(B) I exp(-B)
E1Endomorphism bfield_transform(const E1Endomorphism& i, const Tensor& b);

// The contact shape: zero diagonal blocks and a skew covec->vec block.
bool is_contact_type(const E1Endomorphism& i);

}  // namespace jkit
