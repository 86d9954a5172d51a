#include "jkit/jacobi.hpp"

namespace jkit {

ExtendedBundleMap ExtendedBundleMap::make(const Chart& c, BundleMapKind k, Mat m) {
    if (m.rows != c.dim() + 1 || m.cols != c.dim() + 1)
        throw Error("extended bundle map must be (n+1)x(n+1)");
    return ExtendedBundleMap{c, k, std::move(m)};
}

ExtendedBundleMap ExtendedBundleMap::identity(const Chart& c, BundleMapKind k) {
    return ExtendedBundleMap{c, k, Mat::identity(c.dim() + 1)};
}

namespace {

std::vector<Scalar> covec_column(const ExtendedCovector& a) {
    const Chart& c = a.alpha.chart;
    std::vector<Scalar> col(static_cast<std::size_t>(c.dim()) + 1);
    for (int i = 0; i < c.dim(); ++i) col[static_cast<std::size_t>(i)] = a.alpha.comp({i});
    col[static_cast<std::size_t>(c.dim())] = a.g;
    return col;
}

std::vector<Scalar> vec_column(const ExtendedVector& v) {
    const Chart& c = v.x.chart;
    std::vector<Scalar> col(static_cast<std::size_t>(c.dim()) + 1);
    for (int i = 0; i < c.dim(); ++i) col[static_cast<std::size_t>(i)] = v.x.comp({i});
    col[static_cast<std::size_t>(c.dim())] = v.f;
    return col;
}

std::vector<Scalar> mat_apply(const Mat& m, const std::vector<Scalar>& col) {
    std::vector<Scalar> out(static_cast<std::size_t>(m.rows));
    for (int i = 0; i < m.rows; ++i) {
        Scalar acc;
        for (int j = 0; j < m.cols; ++j) {
            if (m.at(i, j).is_zero()) continue;
            acc = acc + m.at(i, j) * col[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

ExtendedVector column_to_vec(const Chart& c, const std::vector<Scalar>& col) {
    Tensor x = Tensor::zero(c, TKind::MultiVector, 1);
    for (int i = 0; i < c.dim(); ++i) x.add({i}, col[static_cast<std::size_t>(i)]);
    return ExtendedVector::make(std::move(x), col[static_cast<std::size_t>(c.dim())]);
}

ExtendedCovector column_to_covec(const Chart& c, const std::vector<Scalar>& col) {
    Tensor a = Tensor::zero(c, TKind::Form, 1);
    for (int i = 0; i < c.dim(); ++i) a.add({i}, col[static_cast<std::size_t>(i)]);
    return ExtendedCovector::make(std::move(a), col[static_cast<std::size_t>(c.dim())]);
}

}  // namespace

ExtendedVector ExtendedBundleMap::apply(const ExtendedCovector& a) const {
    if (kind != BundleMapKind::CovecToVec) throw Error("bundle map kind mismatch");
    return column_to_vec(chart, mat_apply(m, covec_column(a)));
}

ExtendedCovector ExtendedBundleMap::apply_endo(const ExtendedCovector& a) const {
    if (kind != BundleMapKind::EndoCovec) throw Error("bundle map kind mismatch");
    return column_to_covec(chart, mat_apply(m, covec_column(a)));
}

// ---------------------------------------------------------------------------

JacobiStructure JacobiStructure::make(Tensor pi, Tensor e) {
    if (pi.kind != TKind::MultiVector || pi.degree != 2)
        throw Error("Jacobi structure needs a bivector field");
    if (e.kind != TKind::MultiVector || e.degree != 1)
        throw Error("Jacobi structure needs a vector field");
    if (pi.chart != e.chart) throw ChartMismatch("Jacobi pair on different charts");
    return JacobiStructure{pi.chart, std::move(pi), std::move(e)};
}

JacobiStructure JacobiStructure::negated() const { return JacobiStructure{chart, -pi, -e}; }

JacobiReport verify_jacobi(const JacobiStructure& j) {
    JacobiReport r;
    r.c1 = schouten(j.pi, j.pi) - wedge(j.e, j.pi).scaled(Scalar(2));
    r.c2 = schouten(j.e, j.pi);
    r.pass = r.c1.is_zero() && r.c2.is_zero();
    return r;
}

Tensor pi_sharp(const Tensor& pi, const Tensor& alpha) {
    if (pi.degree != 2 || alpha.degree != 1) throw Error("pi_sharp degree mismatch");
    Tensor x = Tensor::zero(pi.chart, TKind::MultiVector, 1);
    for (int j = 0; j < pi.chart.dim(); ++j) {
        Scalar acc;
        for (int i = 0; i < pi.chart.dim(); ++i) {
            Scalar ai = alpha.comp({i});
            if (ai.is_zero()) continue;
            acc = acc + ai * pi.comp({i, j});
        }
        x.add({j}, acc);
    }
    return x;
}

ExtendedBundleMap sharp_map(const JacobiStructure& j) {
    int n = j.chart.dim();
    Mat m(n + 1, n + 1);
    for (int i = 0; i < n; ++i) {
        for (int r = 0; r < n; ++r) m.at(r, i) = j.pi.comp({i, r});
        m.at(n, i) = -j.e.comp({i});
    }
    for (int r = 0; r < n; ++r) m.at(r, n) = j.e.comp({r});
    return ExtendedBundleMap::make(j.chart, BundleMapKind::CovecToVec, std::move(m));
}

Tensor d_scalar(const Chart& c, const Scalar& f) {
    Tensor d = Tensor::zero(c, TKind::Form, 1);
    for (int i = 0; i < c.dim(); ++i) d.add({i}, f.derivative(c.coords[static_cast<std::size_t>(i)]));
    return d;
}

Tensor hamiltonian_vf(const JacobiStructure& j, const Scalar& h) {
    return pi_sharp(j.pi, d_scalar(j.chart, h)) + j.e.scaled(h);
}

int characteristic_rank_at(const JacobiStructure& j, const Point& pt) {
    int n = j.chart.dim();
    ExtendedBundleMap s = sharp_map(j);
    Mat m(n, n + 1);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n + 1; ++c) m.at(r, c) = s.m.at(r, c).value_at(pt);
    return mat_rank(m);
}

// ---------------------------------------------------------------------------
// Contact

Scalar contact_top_coefficient(const Tensor& eta) {
    if (eta.degree != 1 || eta.kind != TKind::Form) throw Error("contact form must be a 1-form");
    int dim = eta.chart.dim();
    if (dim % 2 == 0) throw Error("contact chart must be odd-dimensional");
    Tensor deta = exterior_derivative(eta);
    Tensor top = eta;
    for (int k = 0; k < (dim - 1) / 2; ++k) top = wedge(top, deta);
    std::vector<int> all(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) all[static_cast<std::size_t>(i)] = i;
    return top.comp(all);
}

ClassifyResult verify_contact(const Tensor& eta, const std::vector<Point>& samples) {
    return classify_nonvanishing(contact_top_coefficient(eta), samples);
}

ContactForm make_contact(const Chart& c, Tensor eta, const std::vector<Point>& samples) {
    auto r = verify_contact(eta, samples);
    if (!r.nonvanishing())
        throw Error("form is not contact: top coefficient " + vanishing_str(r.kind) +
                    (r.witness ? " at " + point_str(*r.witness) : ""));
    return ContactForm{c, std::move(eta)};
}

namespace {

// flat map X -> i_X d eta + eta(X) eta, as an n x n matrix over (d/dx, dx)
Mat contact_flat_matrix(const Tensor& eta) {
    const Chart& c = eta.chart;
    int n = c.dim();
    Tensor deta = exterior_derivative(eta);
    Mat fl(n, n);
    for (int i = 0; i < n; ++i) {
        Scalar ei = eta.comp({i});
        for (int j = 0; j < n; ++j) fl.at(j, i) = deta.comp({i, j}) + ei * eta.comp({j});
    }
    return fl;
}

}  // namespace

JacobiStructure contact_to_jacobi(const ContactForm& c) {
    const Chart& ch = c.chart;
    int n = ch.dim();
    Mat fl = contact_flat_matrix(c.eta);
    InverseResult inv = [&] {
        try {
            return mat_inverse(fl);
        } catch (const SingularMatrix&) {
            throw SingularMatrix("form is not contact: flat map is singular");
        }
    }();
    Tensor deta = exterior_derivative(c.eta);
    Mat dmat(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) dmat.at(a, b) = deta.comp({a, b});
    Mat pim = inv.inverse.transpose() * dmat * inv.inverse;
    Tensor pi = Tensor::zero(ch, TKind::MultiVector, 2);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) pi.add({a, b}, pim.at(a, b));
    Tensor e = Tensor::zero(ch, TKind::MultiVector, 1);
    for (int a = 0; a < n; ++a) {
        Scalar acc;
        for (int b = 0; b < n; ++b) acc = acc + inv.inverse.at(a, b) * c.eta.comp({b});
        e.add({a}, acc);
    }
    JacobiStructure j = JacobiStructure::make(std::move(pi), std::move(e));
    // the sharp map must invert (X,f) -> (-i_X d eta - f eta, eta(X))
    ExtendedBundleMap k = contact_inverse_map(c);
    if (!(sharp_map(j).m * k.m - Mat::identity(n + 1)).is_zero())
        throw Error("contact inversion failed its roundtrip identity");
    return j;
}

ExtendedBundleMap contact_inverse_map(const ContactForm& c) {
    int n = c.chart.dim();
    Tensor deta = exterior_derivative(c.eta);
    Mat m(n + 1, n + 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m.at(j, i) = -deta.comp({i, j});
        m.at(n, i) = c.eta.comp({i});
    }
    for (int j = 0; j < n; ++j) m.at(j, n) = -c.eta.comp({j});
    return ExtendedBundleMap::make(c.chart, BundleMapKind::VecToCovec, std::move(m));
}

// ---------------------------------------------------------------------------
// l.c.s.

Scalar lcs_top_coefficient(const Tensor& omega) {
    int dim = omega.chart.dim();
    if (dim % 2 != 0) throw Error("l.c.s. chart must be even-dimensional");
    Tensor top = omega;
    for (int k = 1; k < dim / 2; ++k) top = wedge(top, omega);
    std::vector<int> all(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) all[static_cast<std::size_t>(i)] = i;
    return top.comp(all);
}

LcsStructure make_lcs(const Chart& c, Tensor omega, Tensor theta, const std::vector<Point>& samples) {
    if (!exterior_derivative(theta).is_zero()) throw Error("l.c.s. Lee form is not closed");
    if (!(exterior_derivative(omega) - wedge(theta, omega)).is_zero())
        throw Error("l.c.s. identity d omega = theta ^ omega fails");
    auto r = classify_nonvanishing(lcs_top_coefficient(omega), samples);
    if (!r.nonvanishing())
        throw Error("2-form is degenerate: top coefficient " + vanishing_str(r.kind) +
                    (r.witness ? " at " + point_str(*r.witness) : ""));
    return LcsStructure{c, std::move(omega), std::move(theta)};
}

JacobiStructure lcs_to_jacobi(const LcsStructure& l) {
    const Chart& ch = l.chart;
    int n = ch.dim();
    Mat fl(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) fl.at(j, i) = l.omega.comp({i, j});
    InverseResult inv = [&] {
        try {
            return mat_inverse(fl);
        } catch (const SingularMatrix&) {
            throw SingularMatrix("2-form is degenerate: flat map is singular");
        }
    }();
    Mat om(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) om.at(a, b) = l.omega.comp({a, b});
    Mat pim = inv.inverse.transpose() * om * inv.inverse;
    Tensor pi = Tensor::zero(ch, TKind::MultiVector, 2);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) pi.add({a, b}, pim.at(a, b));
    Tensor e = Tensor::zero(ch, TKind::MultiVector, 1);
    for (int a = 0; a < n; ++a) {
        Scalar acc;
        for (int b = 0; b < n; ++b) acc = acc + inv.inverse.at(a, b) * l.theta.comp({b});
        e.add({a}, acc);
    }
    return JacobiStructure::make(std::move(pi), std::move(e));
}

// ---------------------------------------------------------------------------

Poissonization poissonize(const JacobiStructure& j) {
    Chart ec = j.chart.extended("t");
    int n = j.chart.dim();
    Scalar decay = Scalar::exp_linform({{ec.coords[static_cast<std::size_t>(n)], Rat(-1)}});
    Tensor pi = Tensor::zero(ec, TKind::MultiVector, 2);
    for (const auto& [idx, s] : j.pi.comps) pi.add(idx, s * decay);
    for (int a = 0; a < n; ++a) {
        Scalar ea = j.e.comp({a});
        if (ea.is_zero()) continue;
        pi.add({a, n}, -ea * decay);
    }
    return Poissonization{ec, std::move(pi)};
}

JacobiStructure conformal_change(const JacobiStructure& j, const Scalar& sigma,
                                 const std::vector<Point>& samples) {
    auto r = classify_nonvanishing(sigma, samples);
    if (!r.nonvanishing())
        throw Error("conformal factor is not nowhere-vanishing: " + vanishing_str(r.kind) +
                    (r.witness ? " at " + point_str(*r.witness) : ""));
    Tensor pi = j.pi.scaled(sigma);
    Tensor e = pi_sharp(j.pi, d_scalar(j.chart, sigma)) + j.e.scaled(sigma);
    return JacobiStructure::make(std::move(pi), std::move(e));
}

bool check_map(const SmoothMap& phi, const JacobiStructure& src, const JacobiStructure& dst,
               MapMode mode, const Scalar* sigma, const std::vector<Point>& samples) {
    switch (mode) {
        case MapMode::Jacobi:
            return related_check(phi, src.pi, dst.pi) && related_check(phi, src.e, dst.e);
        case MapMode::Anti: {
            JacobiStructure neg = dst.negated();
            return related_check(phi, src.pi, neg.pi) && related_check(phi, src.e, neg.e);
        }
        case MapMode::Conformal: {
            if (!sigma) throw Error("conformal check needs a conformal factor");
            JacobiStructure conf = conformal_change(src, *sigma, samples);
            return related_check(phi, conf.pi, dst.pi) && related_check(phi, conf.e, dst.e);
        }
    }
    return false;
}

}  // namespace jkit
