#include "jkit/gauge.hpp"

namespace jkit {

GaugePair GaugePair::make(Tensor b1, Tensor b) {
    if (b1.kind != TKind::Form || b1.degree != 2) throw Error("gauge pair needs a 2-form");
    if (b.kind != TKind::Form || b.degree != 1) throw Error("gauge pair needs a 1-form");
    if (b1.chart != b.chart) throw ChartMismatch("gauge pair on different charts");
    return GaugePair{std::move(b1), std::move(b)};
}

std::vector<ExtendedSection> gauge_frame(const DJStructure& l, const GaugePair& gp) {
    if (gp.b.chart != l.chart) throw ChartMismatch("gauge pair on the wrong chart");
    std::vector<ExtendedSection> out;
    for (const auto& s : l.frame) {
        Tensor shift_alpha = interior_vector(s.v.x, gp.b1) + gp.b.scaled(s.v.f);
        Scalar shift_g = -interior_vector(s.v.x, gp.b).scalar_part();
        ExtendedCovector c =
            ExtendedCovector::make(s.c.alpha + shift_alpha, s.c.g + shift_g);
        out.push_back(ExtendedSection::make(s.v, c));
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = i; j < out.size(); ++j)
            if (!e1_pairing(out[i], out[j]).is_zero())
                throw Error("gauge shift broke isotropy");
    return out;
}

DJStructure gauge_dj(const DJStructure& l, const Tensor& b) {
    return DJStructure::make(l.chart, gauge_frame(l, GaugePair::closed(b)));
}

ExtendedBundleMap db_b_tilde(const Tensor& b) {
    if (b.kind != TKind::Form || b.degree != 1) throw Error("gauge form must be a 1-form");
    const Chart& c = b.chart;
    int n = c.dim();
    Tensor db = exterior_derivative(b);
    Mat m(n + 1, n + 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m.at(j, i) = db.comp({i, j});
        m.at(n, i) = -b.comp({i});
    }
    for (int j = 0; j < n; ++j) m.at(j, n) = b.comp({j});
    return ExtendedBundleMap::make(c, BundleMapKind::VecToCovec, std::move(m));
}

AdmissibilityReport admissibility(const JacobiStructure& j, const Tensor& b,
                                  const std::vector<Point>& samples) {
    int n = j.chart.dim();
    Mat phi = Mat::identity(n + 1) + db_b_tilde(b).m * sharp_map(j).m;
    Scalar det = mat_det(phi);
    ClassifyResult status = classify_nonvanishing(det, samples);
    return AdmissibilityReport{
        ExtendedBundleMap::make(j.chart, BundleMapKind::EndoCovec, std::move(phi)), det, status};
}

JacobiStructure gauge_jacobi(const JacobiStructure& j, const Tensor& b,
                             const std::vector<Point>& samples) {
    AdmissibilityReport adm = admissibility(j, b, samples);
    if (!adm.status.nonvanishing())
        throw Error("1-form is not admissible: " + vanishing_str(adm.status.kind) +
                    (adm.status.witness ? " at " + point_str(*adm.status.witness) : ""));
    int n = j.chart.dim();
    Mat m = sharp_map(j).m * mat_inverse(adm.phi.m).inverse;
    if (!(m + m.transpose()).is_zero()) throw Error("gauged sharp map is not skew");
    Tensor pi = Tensor::zero(j.chart, TKind::MultiVector, 2);
    for (int a = 0; a < n; ++a)
        for (int bb = a + 1; bb < n; ++bb) pi.add({a, bb}, m.at(bb, a));
    Tensor e = Tensor::zero(j.chart, TKind::MultiVector, 1);
    for (int a = 0; a < n; ++a) e.add({a}, m.at(a, n));
    return JacobiStructure::make(std::move(pi), std::move(e));
}

bool verify_algebroid_iso(const JacobiStructure& j, const Tensor& b,
                          const std::vector<Point>& samples) {
    AdmissibilityReport adm = admissibility(j, b, samples);
    if (!adm.status.nonvanishing())
        throw Error("1-form is not admissible");
    JacobiStructure jb = gauge_jacobi(j, b, samples);
    // (i) anchor intertwining: sharp = sharp_B o Phi
    if (!(sharp_map(j).m - sharp_map(jb).m * adm.phi.m).is_zero()) return false;
    // (ii) bracket morphism on the coordinate covector frame
    const Chart& c = j.chart;
    std::vector<ExtendedCovector> frame;
    for (int i = 0; i < c.dim(); ++i)
        frame.push_back(ExtendedCovector::make(Tensor::basis_form(c, i), Scalar()));
    frame.push_back(ExtendedCovector::make(Tensor::zero(c, TKind::Form, 1), Scalar(1)));
    for (const auto& a1 : frame)
        for (const auto& a2 : frame) {
            ExtendedCovector lhs = adm.phi.apply_endo(jet_bracket(j, a1, a2));
            ExtendedCovector rhs =
                jet_bracket(jb, adm.phi.apply_endo(a1), adm.phi.apply_endo(a2));
            if (!(lhs - rhs).is_zero()) return false;
        }
    // (iii) cocycle pullback: the (-E_B, 0) functional composed with Phi is
    // the (-E, 0) functional
    int n = c.dim();
    for (int col = 0; col < n + 1; ++col) {
        Scalar lhs;
        for (int k = 0; k < n + 1; ++k)
            lhs = lhs + sharp_map(jb).m.at(n, k) * adm.phi.m.at(k, col);
        if (!(lhs - sharp_map(j).m.at(n, col)).is_zero()) return false;
    }
    return true;
}

ContactForm gauge_contact(const ContactForm& c, const Tensor& b, const std::vector<Point>& samples) {
    if (b.chart != c.chart) throw ChartMismatch("gauge form on the wrong chart");
    return make_contact(c.chart, c.eta - b, samples);
}

LcsStructure gauge_lcs(const LcsStructure& l, const Tensor& b, const std::vector<Point>& samples) {
    if (b.chart != l.chart) throw ChartMismatch("gauge form on the wrong chart");
    Tensor omega2 = l.omega - exterior_derivative(b) - wedge(b, l.theta);
    return make_lcs(l.chart, std::move(omega2), l.theta, samples);
}

Tensor btilde(const Tensor& b) {
    if (b.kind != TKind::Form || b.degree != 1) throw Error("gauge form must be a 1-form");
    Chart ec = b.chart.extended("t");
    int n = b.chart.dim();
    Scalar et = Scalar::exp_linform({{ec.coords[static_cast<std::size_t>(n)], Rat(1)}});
    Tensor db = exterior_derivative(b);
    Tensor out = Tensor::zero(ec, TKind::Form, 2);
    for (const auto& [idx, s] : db.comps) out.add(idx, s * et);
    for (int i = 0; i < n; ++i) {
        Scalar bi = b.comp({i});
        if (bi.is_zero()) continue;
        out.add({i, n}, -bi * et);  // dt ^ dx^i = -dx^i ^ dt
    }
    return out;
}

std::vector<Point> extend_samples(const Chart& extended, const std::vector<Point>& samples) {
    Var t = extended.coords.back();
    std::vector<Point> out;
    for (const auto& base : samples)
        for (int tv : {0, 1}) {
            Point p = base;
            p.emplace(t, Rat(tv));
            out.push_back(std::move(p));
        }
    return out;
}

bool verify_commute_diracization(const DJStructure& l, const Tensor& b,
                                 const std::vector<Point>& samples) {
    DiracFrame lhs = diracize(gauge_dj(l, b));
    DiracFrame rhs = dirac_gauge(diracize(l), btilde(b));
    if (lhs.chart != rhs.chart) throw ChartMismatch("Diracization charts diverged");
    return dirac_spans_equal(lhs, rhs, extend_samples(lhs.chart, samples));
}

PoissonCommuteReport verify_commute_poissonization(const JacobiStructure& j, const Tensor& b,
                                                   const std::vector<Point>& samples) {
    PoissonCommuteReport rep;
    AdmissibilityReport adm = admissibility(j, b, samples);
    if (!adm.status.nonvanishing())
        throw Error("1-form is not admissible: " + vanishing_str(adm.status.kind));
    Poissonization pois = poissonize(j);
    Tensor bt = btilde(b);
    int m = pois.chart.dim();
    Mat pt(m, m), btf(m, m);
    for (int a = 0; a < m; ++a)
        for (int r = 0; r < m; ++r) {
            pt.at(r, a) = pois.pi.comp({a, r});
            btf.at(r, a) = bt.comp({a, r});
        }
    Mat big = Mat::identity(m) + btf * pt;
    Scalar det_big = mat_det(big);
    ClassifyResult ext_status =
        classify_nonvanishing(det_big, extend_samples(pois.chart, samples));
    rep.admissibility_statuses_agree =
        adm.status.nonvanishing() == ext_status.nonvanishing();
    if (!ext_status.nonvanishing()) return rep;
    Mat gauged = pt * mat_inverse(big).inverse;
    Tensor lhs = poissonize(gauge_jacobi(j, b, samples)).pi;
    Tensor rhs = Tensor::zero(pois.chart, TKind::MultiVector, 2);
    for (int a = 0; a < m; ++a)
        for (int r = a + 1; r < m; ++r) rhs.add({a, r}, gauged.at(r, a));
    rep.commutes = (lhs - rhs).is_zero();
    return rep;
}

bool pullback_lemma_check(const SmoothMap& phi, const DJStructure& src, const Tensor& b_target,
                          const std::vector<Point>& samples) {
    if (samples.empty()) throw Inconclusive("pullback lemma check needs sample points");
    Tensor pulled = phi.pullback(b_target);
    DJStructure gauged_src = DJStructure::make(
        src.chart, gauge_frame(src, GaugePair::closed(pulled)));
    Mat bt = db_b_tilde(b_target).m;
    int n = phi.target.dim();
    for (const auto& pt : samples) {
        Mat lhs = pushforward_fiber(phi, gauged_src, pt);
        Mat pushed = pushforward_fiber(phi, src, pt);
        Point y = map_point(phi, pt);
        Mat bty(n + 1, n + 1);
        for (int r = 0; r < n + 1; ++r)
            for (int c = 0; c < n + 1; ++c) bty.at(r, c) = bt.at(r, c).value_at(y);
        // shift each pushed row by the gauge at y
        Mat rhs = pushed;
        for (int r = 0; r < pushed.rows; ++r) {
            for (int i = 0; i < n + 1; ++i) {
                Scalar acc = pushed.at(r, n + 1 + i);
                for (int k = 0; k < n + 1; ++k) acc = acc + bty.at(i, k) * pushed.at(r, k);
                rhs.at(r, n + 1 + i) = acc;
            }
        }
        int rl = mat_rank(lhs), rr = mat_rank(rhs);
        if (rl != rr) return false;
        Mat stacked(lhs.rows + rhs.rows, lhs.cols);
        for (int i = 0; i < lhs.rows; ++i)
            for (int jj = 0; jj < lhs.cols; ++jj) stacked.at(i, jj) = lhs.at(i, jj);
        for (int i = 0; i < rhs.rows; ++i)
            for (int jj = 0; jj < lhs.cols; ++jj) stacked.at(lhs.rows + i, jj) = rhs.at(i, jj);
        if (mat_rank(stacked) != rl) return false;
    }
    return true;
}

}  // namespace jkit
