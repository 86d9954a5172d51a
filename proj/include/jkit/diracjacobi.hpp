#pragma once

#include "jkit/jacobi.hpp"

namespace jkit {

// A Dirac-Jacobi subbundle presented by a global frame of n+1 sections.
struct DJStructure {
    Chart chart;
    std::vector<ExtendedSection> frame;

    static DJStructure make(const Chart& c, std::vector<ExtendedSection> frame);
};

// Coefficient row (X^1..X^n, f, a_1..a_n, g) of a section.
std::vector<Scalar> section_row(const ExtendedSection& s);
Mat frame_matrix(const std::vector<ExtendedSection>& frame);

// Pointwise full-rank certificate for a frame of rows: a unit minor when one
// exists, otherwise exact rank checks on the samples.
struct RankCertificate {
    bool ok = false;
    Vanishing kind = Vanishing::Zero;
    std::optional<Point> witness;
};
RankCertificate certify_full_rank(const Mat& rows, const std::vector<Point>& samples);

// Row spans agree: the stacked matrix has generic rank equal to the frame
// rank (equivalently, all higher minors vanish identically) and both frames
// carry pointwise full-rank certificates.
bool spans_equal(const Mat& a, const Mat& b, const std::vector<Point>& samples);

struct DJReport {
    bool isotropy = false;
    bool rank_ok = false;
    bool integrable = false;
    std::string witness;
    bool pass() const { return isotropy && rank_ok && integrable; }
};

DJReport verify_dj(const DJStructure& l, const std::vector<Point>& samples);

DJStructure graph_of_jacobi(const JacobiStructure& j);
// L_eta = { (X,f) + (i_X d eta + f eta, -i_X eta) }
DJStructure graph_of_precontact(const Tensor& eta);

// Classical Dirac sections X + alpha on the extended chart.
struct DiracSection {
    Tensor x;      // vector field
    Tensor alpha;  // 1-form
};

struct DiracFrame {
    Chart chart;
    std::vector<DiracSection> frame;
};

// (X,f) + (alpha,g)  ->  (X + f d/dt) + e^t (alpha + g dt)
DiracFrame diracize(const DJStructure& l);
DiracFrame graph_of_poisson(const Tensor& pi);
// classical gauge shift X + alpha -> X + (alpha + i_X b2)
DiracFrame dirac_gauge(const DiracFrame& f, const Tensor& b2);
Mat dirac_frame_matrix(const DiracFrame& f);
bool dirac_spans_equal(const DiracFrame& a, const DiracFrame& b, const std::vector<Point>& samples);

// Exact rational basis of ker(L)|_pt = L_pt intersected with (TM x R) + {0}.
// The sample point must evaluate every entry to a rational (no surviving
// exponentials).
std::vector<std::pair<std::vector<Rat>, Rat>> kernel_at(const DJStructure& l, const Point& pt);

DJStructure opposite(const DJStructure& l);

// Both intersections with (TM x R) + 0 and 0 + (T*M x R) are trivial,
// decided by the vector-half and covector-half determinants.
bool is_contact_dj(const DJStructure& l, const std::vector<Point>& samples);

// [(a,g),(b,k)] = L~_{sharp(a,g)}(b,k) - i_{sharp(b,k)} d~(a,g)
ExtendedCovector jet_bracket(const JacobiStructure& j, const ExtendedCovector& a,
                             const ExtendedCovector& b);

// Rows spanning the pushforward fiber of L under phi at pt (point values).
Mat pushforward_fiber(const SmoothMap& phi, const DJStructure& src, const Point& pt);

// Fiber of a frame at a point.
Mat fiber_at(const Mat& rows, const Point& pt);

Point map_point(const SmoothMap& phi, const Point& pt);

bool forward_dj_check(const SmoothMap& phi, const DJStructure& src, const DJStructure& dst,
                      const std::vector<Point>& samples);

}  // namespace jkit
