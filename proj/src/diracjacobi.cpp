#include "jkit/diracjacobi.hpp"

namespace jkit {

DJStructure DJStructure::make(const Chart& c, std::vector<ExtendedSection> frame) {
    if (static_cast<int>(frame.size()) != c.dim() + 1)
        throw Error("Dirac-Jacobi frame needs n+1 generators");
    for (const auto& s : frame)
        if (s.v.x.chart != c) throw ChartMismatch("frame section on the wrong chart");
    return DJStructure{c, std::move(frame)};
}

std::vector<Scalar> section_row(const ExtendedSection& s) {
    const Chart& c = s.v.x.chart;
    int n = c.dim();
    std::vector<Scalar> row(2 * static_cast<std::size_t>(n + 1));
    for (int i = 0; i < n; ++i) row[static_cast<std::size_t>(i)] = s.v.x.comp({i});
    row[static_cast<std::size_t>(n)] = s.v.f;
    for (int i = 0; i < n; ++i) row[static_cast<std::size_t>(n + 1 + i)] = s.c.alpha.comp({i});
    row[static_cast<std::size_t>(2 * n + 1)] = s.c.g;
    return row;
}

Mat frame_matrix(const std::vector<ExtendedSection>& frame) {
    if (frame.empty()) throw Error("empty frame");
    int n = frame[0].v.x.chart.dim();
    Mat m(static_cast<int>(frame.size()), 2 * (n + 1));
    for (std::size_t r = 0; r < frame.size(); ++r) {
        auto row = section_row(frame[r]);
        for (int c = 0; c < m.cols; ++c) m.at(static_cast<int>(r), c) = row[static_cast<std::size_t>(c)];
    }
    return m;
}

Mat fiber_at(const Mat& rows, const Point& pt) {
    Mat m(rows.rows, rows.cols);
    for (int r = 0; r < rows.rows; ++r)
        for (int c = 0; c < rows.cols; ++c) m.at(r, c) = rows.at(r, c).value_at(pt);
    return m;
}

RankCertificate certify_full_rank(const Mat& rows, const std::vector<Point>& samples) {
    int r = rows.rows;
    // candidate unit minors: the two halves when square, then the generic
    // pivot columns of the reduced form
    std::vector<std::vector<int>> candidates;
    if (rows.cols >= 2 * r) {
        std::vector<int> first, second;
        for (int i = 0; i < r; ++i) first.push_back(i);
        int half = rows.cols / 2;
        for (int i = 0; i < r; ++i) second.push_back(half + i);
        candidates.push_back(second);
        candidates.push_back(first);
    }
    std::vector<int> pivots;
    mat_rref(rows, &pivots);
    if (static_cast<int>(pivots.size()) == r) candidates.push_back(pivots);
    for (const auto& cols : candidates) {
        if (static_cast<int>(cols.size()) != r) continue;
        Mat sub(r, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) sub.at(i, j) = rows.at(i, cols[static_cast<std::size_t>(j)]);
        Scalar det = mat_det(sub);
        if (det.is_unit()) return {true, Vanishing::Unit, std::nullopt};
    }
    if (static_cast<int>(pivots.size()) != r) {
        // generically rank-deficient
        return {false, Vanishing::Zero, std::nullopt};
    }
    if (samples.empty())
        throw Inconclusive("frame rank certificate inconclusive: no unit minor and no samples");
    for (const auto& pt : samples) {
        if (mat_rank(fiber_at(rows, pt)) != r)
            return {false, Vanishing::VanishesAtSample, pt};
    }
    return {true, Vanishing::NonvanishingOnSamples, std::nullopt};
}

bool spans_equal(const Mat& a, const Mat& b, const std::vector<Point>& samples) {
    if (a.cols != b.cols || a.rows != b.rows) return false;
    int r = a.rows;
    Mat stacked(2 * r, a.cols);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < a.cols; ++j) {
            stacked.at(i, j) = a.at(i, j);
            stacked.at(r + i, j) = b.at(i, j);
        }
    if (mat_rank(stacked) != r) return false;
    return certify_full_rank(a, samples).ok && certify_full_rank(b, samples).ok;
}

DJReport verify_dj(const DJStructure& l, const std::vector<Point>& samples) {
    DJReport rep;
    int n = l.chart.dim();
    rep.isotropy = true;
    for (std::size_t i = 0; i < l.frame.size() && rep.isotropy; ++i)
        for (std::size_t j = i; j < l.frame.size(); ++j) {
            Scalar p = e1_pairing(l.frame[i], l.frame[j]);
            if (!p.is_zero()) {
                rep.isotropy = false;
                rep.witness = "pairing of generators " + std::to_string(i) + "," +
                              std::to_string(j) + " = " + p.str();
                break;
            }
        }
    Mat rows = frame_matrix(l.frame);
    auto cert = certify_full_rank(rows, samples);
    rep.rank_ok = cert.ok;
    if (!cert.ok && rep.witness.empty())
        rep.witness = cert.witness ? "rank drops at " + point_str(*cert.witness)
                                   : "frame is generically rank-deficient";
    rep.integrable = true;
    for (std::size_t i = 0; i < l.frame.size() && rep.integrable; ++i)
        for (std::size_t j = i; j < l.frame.size(); ++j) {
            ExtendedSection d = dorfman(l.frame[i], l.frame[j]);
            if (d.is_zero()) continue;
            Mat stacked(rows.rows + 1, rows.cols);
            for (int r = 0; r < rows.rows; ++r)
                for (int c = 0; c < rows.cols; ++c) stacked.at(r, c) = rows.at(r, c);
            auto drow = section_row(d);
            for (int c = 0; c < rows.cols; ++c)
                stacked.at(rows.rows, c) = drow[static_cast<std::size_t>(c)];
            if (mat_rank(stacked) != n + 1) {
                rep.integrable = false;
                rep.witness = "bracket of generators " + std::to_string(i) + "," +
                              std::to_string(j) + " leaves the span";
                break;
            }
        }
    return rep;
}

DJStructure graph_of_jacobi(const JacobiStructure& j) {
    int n = j.chart.dim();
    ExtendedBundleMap s = sharp_map(j);
    std::vector<ExtendedSection> frame;
    for (int i = 0; i < n; ++i) {
        ExtendedCovector a = ExtendedCovector::make(Tensor::basis_form(j.chart, i), Scalar());
        frame.push_back(ExtendedSection::make(s.apply(a), a));
    }
    ExtendedCovector last =
        ExtendedCovector::make(Tensor::zero(j.chart, TKind::Form, 1), Scalar(1));
    frame.push_back(ExtendedSection::make(s.apply(last), last));
    return DJStructure::make(j.chart, std::move(frame));
}

DJStructure graph_of_precontact(const Tensor& eta) {
    if (eta.kind != TKind::Form || eta.degree != 1) throw Error("precontact data must be a 1-form");
    const Chart& c = eta.chart;
    int n = c.dim();
    Tensor deta = exterior_derivative(eta);
    std::vector<ExtendedSection> frame;
    for (int i = 0; i < n; ++i) {
        Tensor xi = Tensor::basis_vector(c, i);
        ExtendedVector v = ExtendedVector::make(xi, Scalar());
        ExtendedCovector cov =
            ExtendedCovector::make(interior_vector(xi, deta), -eta.comp({i}));
        frame.push_back(ExtendedSection::make(v, cov));
    }
    frame.push_back(ExtendedSection::make(
        ExtendedVector::make(Tensor::zero(c, TKind::MultiVector, 1), Scalar(1)),
        ExtendedCovector::make(eta, Scalar())));
    return DJStructure::make(c, std::move(frame));
}

DiracFrame diracize(const DJStructure& l) {
    Chart ec = l.chart.extended("t");
    int n = l.chart.dim();
    Scalar et = Scalar::exp_linform({{ec.coords[static_cast<std::size_t>(n)], Rat(1)}});
    DiracFrame out;
    out.chart = ec;
    for (const auto& s : l.frame) {
        Tensor x = Tensor::zero(ec, TKind::MultiVector, 1);
        for (int i = 0; i < n; ++i) x.add({i}, s.v.x.comp({i}));
        x.add({n}, s.v.f);
        Tensor a = Tensor::zero(ec, TKind::Form, 1);
        for (int i = 0; i < n; ++i) a.add({i}, s.c.alpha.comp({i}) * et);
        a.add({n}, s.c.g * et);
        out.frame.push_back(DiracSection{std::move(x), std::move(a)});
    }
    return out;
}

DiracFrame graph_of_poisson(const Tensor& pi) {
    if (pi.kind != TKind::MultiVector || pi.degree != 2) throw Error("graph needs a bivector");
    const Chart& c = pi.chart;
    DiracFrame out;
    out.chart = c;
    for (int a = 0; a < c.dim(); ++a) {
        Tensor da = Tensor::basis_form(c, a);
        out.frame.push_back(DiracSection{pi_sharp(pi, da), da});
    }
    return out;
}

DiracFrame dirac_gauge(const DiracFrame& f, const Tensor& b2) {
    if (b2.kind != TKind::Form || b2.degree != 2) throw Error("Dirac gauge needs a 2-form");
    DiracFrame out;
    out.chart = f.chart;
    for (const auto& s : f.frame)
        out.frame.push_back(DiracSection{s.x, s.alpha + interior_vector(s.x, b2)});
    return out;
}

Mat dirac_frame_matrix(const DiracFrame& f) {
    int n = f.chart.dim();
    Mat m(static_cast<int>(f.frame.size()), 2 * n);
    for (std::size_t r = 0; r < f.frame.size(); ++r) {
        for (int i = 0; i < n; ++i) {
            m.at(static_cast<int>(r), i) = f.frame[r].x.comp({i});
            m.at(static_cast<int>(r), n + i) = f.frame[r].alpha.comp({i});
        }
    }
    return m;
}

bool dirac_spans_equal(const DiracFrame& a, const DiracFrame& b, const std::vector<Point>& samples) {
    return spans_equal(dirac_frame_matrix(a), dirac_frame_matrix(b), samples);
}

std::vector<std::pair<std::vector<Rat>, Rat>> kernel_at(const DJStructure& l, const Point& pt) {
    int n = l.chart.dim();
    Mat rows = fiber_at(frame_matrix(l.frame), pt);
    // coefficients c with sum_a c_a (covector half of row a) = 0
    Mat covT(n + 1, static_cast<int>(l.frame.size()));
    for (int a = 0; a < covT.cols; ++a)
        for (int i = 0; i < n + 1; ++i) covT.at(i, a) = rows.at(a, n + 1 + i);
    auto ns = mat_nullspace(covT);
    std::vector<std::pair<std::vector<Rat>, Rat>> basis;
    for (const auto& c : ns) {
        std::vector<Rat> x(static_cast<std::size_t>(n));
        Rat f(0);
        for (int a = 0; a < covT.cols; ++a) {
            if (c[static_cast<std::size_t>(a)].is_zero()) continue;
            for (int i = 0; i < n; ++i) {
                Scalar v = c[static_cast<std::size_t>(a)] * rows.at(a, i);
                auto rv = v.as_rational();
                if (!rv) throw EvalError("kernel entries are not rational at this point");
                x[static_cast<std::size_t>(i)] += *rv;
            }
            Scalar v = c[static_cast<std::size_t>(a)] * rows.at(a, n);
            auto rv = v.as_rational();
            if (!rv) throw EvalError("kernel entries are not rational at this point");
            f += *rv;
        }
        basis.emplace_back(std::move(x), f);
    }
    return basis;
}

DJStructure opposite(const DJStructure& l) {
    std::vector<ExtendedSection> frame;
    for (const auto& s : l.frame) frame.push_back(ExtendedSection::make(-s.v, s.c));
    return DJStructure::make(l.chart, std::move(frame));
}

bool is_contact_dj(const DJStructure& l, const std::vector<Point>& samples) {
    int n = l.chart.dim();
    if (n % 2 == 0) throw Error("contact characterization needs an odd-dimensional chart");
    Mat rows = frame_matrix(l.frame);
    Mat vec(n + 1, n + 1), cov(n + 1, n + 1);
    for (int r = 0; r < n + 1; ++r)
        for (int c = 0; c < n + 1; ++c) {
            vec.at(r, c) = rows.at(r, c);
            cov.at(r, c) = rows.at(r, n + 1 + c);
        }
    for (const Mat* half : {&vec, &cov}) {
        auto cls = classify_nonvanishing(mat_det(*half), samples);
        if (!cls.nonvanishing()) return false;
    }
    return true;
}

ExtendedCovector jet_bracket(const JacobiStructure& j, const ExtendedCovector& a,
                             const ExtendedCovector& b) {
    ExtendedBundleMap s = sharp_map(j);
    PairForm lhs = tilde_lie(s.apply(a), b.as_pair());
    PairForm rhs = tilde_i(s.apply(b), tilde_d(a.as_pair()));
    return ExtendedCovector::from_pair(lhs - rhs);
}

Point map_point(const SmoothMap& phi, const Point& pt) {
    Point out;
    for (int j = 0; j < phi.target.dim(); ++j)
        out.emplace(phi.target.coords[static_cast<std::size_t>(j)],
                    phi.comps[static_cast<std::size_t>(j)].evaluate(pt));
    return out;
}

Mat pushforward_fiber(const SmoothMap& phi, const DJStructure& src, const Point& pt) {
    int m = phi.source.dim(), n = phi.target.dim();
    if (!phi.is_submersion_at(pt))
        throw Error("map is not a submersion at " + point_str(pt));
    Mat jac = phi.jacobian();
    Mat jp(n, m);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < m; ++c) jp.at(r, c) = jac.at(r, c).value_at(pt);
    Mat rows = fiber_at(frame_matrix(src.frame), pt);
    int nf = rows.rows;  // m + 1 generators
    // unknowns: (Xtilde m, f, alpha n, g, c nf)
    int ncols = m + 1 + n + 1 + nf;
    Mat eqs(2 * (m + 1), ncols);
    for (int i = 0; i < m; ++i) {
        eqs.at(i, i) = Scalar(1);
        for (int a = 0; a < nf; ++a) eqs.at(i, m + 1 + n + 1 + a) = -rows.at(a, i);
    }
    eqs.at(m, m) = Scalar(1);
    for (int a = 0; a < nf; ++a) eqs.at(m, m + 1 + n + 1 + a) = -rows.at(a, m);
    for (int i = 0; i < m; ++i) {
        // (J^T alpha)_i
        for (int r = 0; r < n; ++r) eqs.at(m + 1 + i, m + 1 + r) = jp.at(r, i);
        for (int a = 0; a < nf; ++a)
            eqs.at(m + 1 + i, m + 1 + n + 1 + a) = -rows.at(a, m + 1 + i);
    }
    eqs.at(2 * m + 1, m + 1 + n) = Scalar(1);
    for (int a = 0; a < nf; ++a)
        eqs.at(2 * m + 1, m + 1 + n + 1 + a) = -rows.at(a, 2 * m + 1);
    auto ns = mat_nullspace(eqs);
    Mat fiber(static_cast<int>(ns.size()), 2 * (n + 1));
    for (std::size_t k = 0; k < ns.size(); ++k) {
        const auto& u = ns[k];
        for (int r = 0; r < n; ++r) {
            Scalar acc;
            for (int c = 0; c < m; ++c) acc = acc + jp.at(r, c) * u[static_cast<std::size_t>(c)];
            fiber.at(static_cast<int>(k), r) = acc;
        }
        fiber.at(static_cast<int>(k), n) = u[static_cast<std::size_t>(m)];
        for (int r = 0; r < n + 1; ++r)
            fiber.at(static_cast<int>(k), n + 1 + r) = u[static_cast<std::size_t>(m + 1 + r)];
    }
    return fiber;
}

bool forward_dj_check(const SmoothMap& phi, const DJStructure& src, const DJStructure& dst,
                      const std::vector<Point>& samples) {
    if (samples.empty()) throw Inconclusive("forward check needs sample points");
    Mat dst_rows = frame_matrix(dst.frame);
    for (const auto& pt : samples) {
        Mat push = pushforward_fiber(phi, src, pt);
        Mat dfib = fiber_at(dst_rows, map_point(phi, pt));
        int rp = mat_rank(push), rd = mat_rank(dfib);
        if (rp != rd) return false;
        Mat stacked(push.rows + dfib.rows, push.cols);
        for (int i = 0; i < push.rows; ++i)
            for (int j = 0; j < push.cols; ++j) stacked.at(i, j) = push.at(i, j);
        for (int i = 0; i < dfib.rows; ++i)
            for (int j = 0; j < push.cols; ++j) stacked.at(push.rows + i, j) = dfib.at(i, j);
        if (mat_rank(stacked) != rp) return false;
    }
    return true;
}

}  // namespace jkit
