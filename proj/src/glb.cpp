#include "jkit/glb.hpp"

namespace jkit {

MvPair MvPair::make(Tensor p, Tensor q) {
    if (p.kind != TKind::MultiVector || q.kind != TKind::MultiVector)
        throw Error("multisection pair needs multivector fields");
    if (p.chart != q.chart) throw ChartMismatch("multisection pair on different charts");
    if (p.degree != q.degree + 1) throw Error("multisection pair degrees must be offset by one");
    MvPair w;
    w.chart = p.chart;
    w.degree = p.degree;
    w.p = std::move(p);
    w.q = std::move(q);
    return w;
}

MvPair MvPair::scalar(const Chart& c, const Scalar& f) {
    MvPair w;
    w.chart = c;
    w.degree = 0;
    w.p = Tensor::constant(c, TKind::MultiVector, f);
    w.q = Tensor::zero(c, TKind::MultiVector, 0);
    return w;
}

MvPair MvPair::zero(const Chart& c, int degree) {
    MvPair w;
    w.chart = c;
    w.degree = degree;
    w.p = Tensor::zero(c, TKind::MultiVector, degree);
    w.q = Tensor::zero(c, TKind::MultiVector, degree > 0 ? degree - 1 : 0);
    return w;
}

bool MvPair::is_zero() const { return p.is_zero() && (degree == 0 || q.is_zero()); }

MvPair MvPair::operator+(const MvPair& o) const {
    if (degree != o.degree) throw Error("multisection degree mismatch");
    MvPair w = *this;
    w.p = p + o.p;
    if (degree > 0) w.q = q + o.q;
    return w;
}

MvPair MvPair::operator-(const MvPair& o) const {
    if (degree != o.degree) throw Error("multisection degree mismatch");
    MvPair w = *this;
    w.p = p - o.p;
    if (degree > 0) w.q = q - o.q;
    return w;
}

MvPair MvPair::scaled(const Scalar& s) const {
    MvPair w = *this;
    w.p = p.scaled(s);
    w.q = q.scaled(s);
    return w;
}

// ---------------------------------------------------------------------------
// P + e ^ Q as a multivector on chart x e, with the extra direction in the
// first wedge slot; the homogenization below turns e into d/dt, matching
// e^{-t}(pi + dt-direction ^ E) for the canonical bivector pair.

namespace {

Chart phantom_chart(const Chart& c) { return c.extended("_e"); }

Tensor to_phantom(const MvPair& w, const Chart& pc) {
    int n = w.chart.dim();
    Tensor t = Tensor::zero(pc, TKind::MultiVector, w.degree);
    for (const auto& [idx, s] : w.p.comps) t.add(idx, s);
    if (w.degree > 0)
        for (const auto& [idx, s] : w.q.comps) {
            std::vector<int> ext;
            ext.push_back(n);
            ext.insert(ext.end(), idx.begin(), idx.end());
            t.add(std::move(ext), s);
        }
    return t;
}

MvPair from_phantom(const Tensor& t, const Chart& base, int degree) {
    int n = base.dim();
    MvPair w = MvPair::zero(base, degree);
    for (const auto& [idx, s] : t.comps) {
        if (!idx.empty() && idx.back() == n) {
            std::vector<int> rest(idx.begin(), idx.end() - 1);
            bool flip = rest.size() % 2 != 0;  // move the e-slot to the front
            w.q.add(std::move(rest), flip ? -s : s);
        } else {
            w.p.add(idx, s);
        }
    }
    return w;
}

}  // namespace

MvPair mv_wedge(const MvPair& a, const MvPair& b) {
    Chart pc = phantom_chart(a.chart);
    Tensor t = wedge(to_phantom(a, pc), to_phantom(b, pc));
    return from_phantom(t, a.chart, a.degree + b.degree);
}

MvPair mv_contract_e(const MvPair& a) {
    if (a.degree < 1) throw Error("contraction of a degree-0 multisection");
    Chart pc = phantom_chart(a.chart);
    Tensor de = interior_covector(Tensor::basis_form(pc, a.chart.dim()), to_phantom(a, pc));
    return from_phantom(de, a.chart, a.degree - 1);
}

PairForm pf_wedge(const PairForm& a, const PairForm& b) {
    Tensor hi = wedge(a.hi, b.hi);
    Tensor lo = a.degree == 0 ? Tensor::zero(a.chart, TKind::Form, b.degree > 0 ? b.degree - 1 : 0)
                              : wedge(a.lo, b.hi);
    if (b.degree > 0) {
        Tensor second = wedge(a.hi, b.lo);
        if (a.degree % 2 != 0) second = -second;
        lo = a.degree == 0 ? second : lo + second;
    }
    int deg = a.degree + b.degree;
    if (deg == 0) return PairForm::scalar(a.chart, hi.scalar_part());
    if (lo.degree != deg - 1) {
        // adjust the zero placeholder degree
        Tensor fixed = Tensor::zero(a.chart, TKind::Form, deg - 1);
        for (const auto& [idx, s] : lo.comps) fixed.add(idx, s);
        lo = std::move(fixed);
    }
    return PairForm::make(std::move(hi), std::move(lo));
}

// ---------------------------------------------------------------------------

CanonicalPair canonical_pair(const JacobiStructure& j) {
    CanonicalPair p{JacobiAlgebroid{AlgebroidSide::CotangentExt, j.chart, j},
                    JacobiAlgebroid{AlgebroidSide::TangentExt, j.chart, std::nullopt}, j};
    return p;
}

PairForm tangent_d(const PairForm& a) {
    if (a.degree == 0)
        return PairForm::make(exterior_derivative(a.hi), Tensor::zero(a.chart, TKind::Form, 0));
    return PairForm::make(exterior_derivative(a.hi), -exterior_derivative(a.lo));
}

PairForm tangent_d_twisted(const PairForm& a) { return tilde_d(a); }

namespace {

// P(alpha_1..alpha_p) for 1-forms with scalar coefficients
Scalar mv_eval(const Tensor& p, const std::vector<Tensor>& alphas) {
    if (p.degree != static_cast<int>(alphas.size())) throw Error("evaluation arity mismatch");
    if (p.degree == 0) return p.scalar_part();
    int k = p.degree;
    Scalar acc;
    for (const auto& [idx, s] : p.comps) {
        Mat m(k, k);
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c)
                m.at(r, c) = alphas[static_cast<std::size_t>(r)].comp({idx[static_cast<std::size_t>(c)]});
        acc = acc + s * mat_det(m);
    }
    return acc;
}

Scalar eval_mvpair(const MvPair& w, const std::vector<ExtendedCovector>& args) {
    int k = w.degree;
    if (k != static_cast<int>(args.size())) throw Error("evaluation arity mismatch");
    std::vector<Tensor> alphas;
    for (const auto& a : args) alphas.push_back(a.alpha);
    Scalar acc = mv_eval(w.p, alphas);
    if (k > 0) {
        // (e ^ Q)(a_1..a_k): expansion along the leading e-column
        for (int i = 1; i <= k; ++i) {
            const Scalar& gi = args[static_cast<std::size_t>(i - 1)].g;
            if (gi.is_zero()) continue;
            std::vector<Tensor> rest;
            for (int r = 0; r < k; ++r)
                if (r != i - 1) rest.push_back(alphas[static_cast<std::size_t>(r)]);
            Scalar sgn = (i % 2 == 1) ? Scalar(1) : Scalar(-1);
            acc = acc + sgn * gi * mv_eval(w.q, rest);
        }
    }
    return acc;
}

Tensor jet_anchor(const JacobiStructure& j, const ExtendedCovector& a) {
    return pi_sharp(j.pi, a.alpha) + j.e.scaled(a.g);
}

}  // namespace

MvPair cotangent_d(const JacobiStructure& j, const MvPair& w) {
    const Chart& c = w.chart;
    int n = c.dim();
    int k = w.degree;
    if (k > 2) throw Error("cotangent differential supports degrees <= 2");
    std::vector<ExtendedCovector> frame;
    for (int i = 0; i < n; ++i)
        frame.push_back(ExtendedCovector::make(Tensor::basis_form(c, i), Scalar()));
    frame.push_back(ExtendedCovector::make(Tensor::zero(c, TKind::Form, 1), Scalar(1)));
    auto ce = [&](const std::vector<ExtendedCovector>& args) {
        Scalar acc;
        for (std::size_t i = 0; i < args.size(); ++i) {
            std::vector<ExtendedCovector> rest;
            for (std::size_t r = 0; r < args.size(); ++r)
                if (r != i) rest.push_back(args[r]);
            Scalar term = apply_vector(jet_anchor(j, args[i]), eval_mvpair(w, rest));
            acc = (i % 2 == 0) ? acc + term : acc - term;
        }
        for (std::size_t i = 0; i < args.size(); ++i)
            for (std::size_t jj = i + 1; jj < args.size(); ++jj) {
                std::vector<ExtendedCovector> rest;
                rest.push_back(jet_bracket(j, args[i], args[jj]));
                for (std::size_t r = 0; r < args.size(); ++r)
                    if (r != i && r != jj) rest.push_back(args[r]);
                Scalar term = eval_mvpair(w, rest);
                acc = ((i + jj) % 2 == 0) ? acc + term : acc - term;
            }
        return acc;
    };
    MvPair out = MvPair::zero(c, k + 1);
    for (const auto& idx : increasing_tuples(n, k + 1)) {
        std::vector<ExtendedCovector> args;
        for (int i : idx) args.push_back(frame[static_cast<std::size_t>(i)]);
        out.p.add(idx, ce(args));
    }
    for (const auto& idx : increasing_tuples(n, k)) {
        std::vector<ExtendedCovector> args;
        for (int i : idx) args.push_back(frame[static_cast<std::size_t>(i)]);
        args.push_back(frame[static_cast<std::size_t>(n)]);
        // the e-argument sits in the last of k+1 slots while e leads the
        // wedge in the component representation
        Scalar v = ce(args);
        out.q.add(idx, k % 2 == 0 ? v : -v);
    }
    return out;
}

MvPair cotangent_d_twisted(const JacobiStructure& j, const MvPair& w) {
    MvPair x0 = MvPair::make(-j.e, Tensor::zero(j.chart, TKind::MultiVector, 0));
    return cotangent_d(j, w) + mv_wedge(x0, w);
}

// ---------------------------------------------------------------------------
// Schouten-Jacobi brackets

namespace {

// Schouten bracket in the convention whose extension rules pair with the
// 1-jet calculus ([P,f] = (-1)^{p+1} i_{df} P); differs from the geometric
// one by the parity twist.
Tensor schouten_ext(const Tensor& a, const Tensor& b) {
    Tensor out = schouten(a, b);
    if (((a.degree - 1) * (b.degree - 1)) % 2 != 0) out = -out;
    return out;
}

// Homogenization onto chart x t: P + e^Q -> e^{(1-p)t}(P + dt-direction ^ Q).
// The Schouten-Jacobi bracket downstairs is the Schouten bracket upstairs.
struct Homogenization {
    Chart base, ext;
    Var t;

    explicit Homogenization(const Chart& c)
        : base(c), ext(c.extended("t")), t(ext.coords.back()) {}

    Tensor lift(const MvPair& w) const {
        int n = base.dim();
        Scalar weight = Scalar::exp_linform({{t, Rat(1 - w.degree)}});
        Tensor out = Tensor::zero(ext, TKind::MultiVector, w.degree);
        for (const auto& [idx, s] : w.p.comps) out.add(idx, s * weight);
        if (w.degree > 0)
            for (const auto& [idx, s] : w.q.comps) {
                std::vector<int> lifted;
                lifted.push_back(n);
                lifted.insert(lifted.end(), idx.begin(), idx.end());
                out.add(std::move(lifted), s * weight);
            }
        return out;
    }

    MvPair unlift(const Tensor& v, int degree) const {
        int n = base.dim();
        if (degree < 0) {
            if (!v.is_zero()) throw Error("homogenization: negative-degree residue");
            return MvPair::zero(base, 0);
        }
        Scalar strip = Scalar::exp_linform({{t, Rat(degree - 1)}});
        MvPair w = MvPair::zero(base, degree);
        for (const auto& [idx, s] : v.comps) {
            Scalar c = s * strip;
            for (Var vv : c.variables())
                if (vv == t) throw Error("homogenization: inhomogeneous bracket result");
            if (!idx.empty() && idx.back() == n) {
                std::vector<int> rest(idx.begin(), idx.end() - 1);
                bool flip = rest.size() % 2 != 0;
                w.q.add(std::move(rest), flip ? -c : c);
            } else {
                w.p.add(idx, c);
            }
        }
        return w;
    }
};

}  // namespace

MvPair tangent_gerstenhaber(const MvPair& a, const MvPair& b) {
    Chart pc = phantom_chart(a.chart);
    Tensor t = schouten_ext(to_phantom(a, pc), to_phantom(b, pc));
    int deg = a.degree + b.degree - 1;
    return from_phantom(t, a.chart, deg < 0 ? 0 : deg);
}

MvPair schouten_jacobi_tangent(const MvPair& a, const MvPair& b) {
    Homogenization h(a.chart);
    return h.unlift(schouten_ext(h.lift(a), h.lift(b)), a.degree + b.degree - 1);
}

PairForm cotangent_gerstenhaber(const JacobiStructure& j, const PairForm& u, const PairForm& v) {
    int p = u.degree, q = v.degree;
    int deg = p + q - 1;
    if (deg < 0) return PairForm::scalar(u.chart, Scalar());
    if (u.is_zero() || v.is_zero()) return PairForm::zero(u.chart, deg);
    const Chart& c = u.chart;
    if (p == 0) {
        // [f, V] = -(-1)^{(p-1)(q-1)} [V, f]
        PairForm flip = cotangent_gerstenhaber(j, v, u);
        bool neg = ((p - 1) * (q - 1)) % 2 == 0;
        return neg ? PairForm::zero(c, deg) - flip : flip;
    }
    if (q == 0) {
        // [U, f] = (-1)^{u+1} i_{d_A f} U with d_A f = (-pi# df, E(f))
        Scalar f = v.hi.scalar_part();
        ExtendedVector df =
            ExtendedVector::make(-pi_sharp(j.pi, d_scalar(c, f)), apply_vector(j.e, f));
        PairForm out = tilde_i(df, u);
        return p % 2 == 0 ? out.scaled(Scalar(-1)) : out;
    }
    if (p == 1 && q == 1) {
        return jet_bracket(j, ExtendedCovector::from_pair(u), ExtendedCovector::from_pair(v))
            .as_pair();
    }
    if (p >= 2 && q == 1) {
        PairForm flip = cotangent_gerstenhaber(j, v, u);
        bool neg = ((p - 1) * (q - 1)) % 2 == 0;
        return neg ? PairForm::zero(c, deg) - flip : flip;
    }
    if (q >= 2) {
        if (q > 2 || p > 2) throw Error("cotangent Gerstenhaber supports degrees <= 2");
        // decompose V into coordinate wedges and apply the graded Leibniz
        // rule [U, A ^ W] = [U,A] ^ W + (-1)^{p-1} A ^ [U,W]
        PairForm out = PairForm::zero(c, deg);
        auto basis_cov = [&](int i) {
            return PairForm::make(Tensor::basis_form(c, i), Tensor::zero(c, TKind::Form, 0));
        };
        PairForm e_cov = PairForm::make(Tensor::zero(c, TKind::Form, 1),
                                        Tensor::constant(c, TKind::Form, Scalar(1)));
        auto add_piece = [&](const Scalar& coeff, const PairForm& a1, const PairForm& w1) {
            if (coeff.is_zero()) return;
            PairForm aw = pf_wedge(a1, w1);
            // [U, f (A^W)] = [U,f] ^ (A^W) + f [U, A^W]
            PairForm t1 = pf_wedge(cotangent_gerstenhaber(j, u, PairForm::scalar(c, coeff)), aw);
            PairForm t2 = pf_wedge(cotangent_gerstenhaber(j, u, a1), w1);
            PairForm t3 = pf_wedge(a1, cotangent_gerstenhaber(j, u, w1));
            if ((p - 1) % 2 != 0) t3 = PairForm::zero(c, deg) - t3;
            out = out + t1 + (t2 + t3).scaled(coeff);
        };
        for (const auto& [idx, s] : v.hi.comps)
            add_piece(s, basis_cov(idx[0]), basis_cov(idx[1]));
        for (const auto& [idx, s] : v.lo.comps)
            add_piece(-s, basis_cov(idx[0]), e_cov);  // (dx^i,0)^(0,1) = (0,-dx^i)
        return out;
    }
    throw Error("unsupported degree combination");
}

PairForm schouten_jacobi_cotangent(const JacobiStructure& j, const PairForm& a, const PairForm& b) {
    // [P,Q]^{phi0} = [P,Q] + (p-1) P ^ i_{phi0} Q + (-1)^p (q-1) i_{phi0} P ^ Q
    int p = a.degree, q = b.degree;
    PairForm out = cotangent_gerstenhaber(j, a, b);
    ExtendedVector phi0 = ExtendedVector::make(-j.e, Scalar());
    if ((p - 1) != 0 && b.degree >= 1)
        out = out + pf_wedge(a, tilde_i(phi0, b)).scaled(Scalar(Rat(p - 1)));
    if ((q - 1) != 0 && a.degree >= 1) {
        int coeff = (q - 1) * (p % 2 == 0 ? 1 : -1);
        out = out + pf_wedge(tilde_i(phi0, a), b).scaled(Scalar(Rat(coeff)));
    }
    return out;
}

bool verify_glb_compat(const CanonicalPair& pair, const MvPair& p, const MvPair& q) {
    if (p.degree > 1 || q.degree > 1) throw Error("compatibility check supports degrees <= 1");
    const JacobiStructure& j = pair.j;
    MvPair r1 = schouten_jacobi_tangent(cotangent_d_twisted(j, p), q);
    MvPair r2 = schouten_jacobi_tangent(p, cotangent_d_twisted(j, q));
    MvPair rhs = (p.degree % 2 == 0) ? r1 - r2 : r1 + r2;  // (-1)^{p+1}
    // the bracket of two functions degenerates, leaving only the right side
    if (p.degree == 0 && q.degree == 0) return rhs.is_zero();
    MvPair lhs = cotangent_d_twisted(j, schouten_jacobi_tangent(p, q));
    return (lhs - rhs).is_zero();
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Scalar> ev_col(const ExtendedVector& v) {
    const Chart& c = v.x.chart;
    std::vector<Scalar> col(static_cast<std::size_t>(c.dim()) + 1);
    for (int i = 0; i < c.dim(); ++i) col[static_cast<std::size_t>(i)] = v.x.comp({i});
    col[static_cast<std::size_t>(c.dim())] = v.f;
    return col;
}

ExtendedVector col_to_ev(const Chart& c, const std::vector<Scalar>& col) {
    Tensor x = Tensor::zero(c, TKind::MultiVector, 1);
    for (int i = 0; i < c.dim(); ++i) x.add({i}, col[static_cast<std::size_t>(i)]);
    return ExtendedVector::make(std::move(x), col[static_cast<std::size_t>(c.dim())]);
}

ExtendedVector apply_mat(const Mat& m, const ExtendedVector& v, const Chart& c) {
    auto col = ev_col(v);
    std::vector<Scalar> out(static_cast<std::size_t>(m.rows));
    for (int i = 0; i < m.rows; ++i) {
        Scalar acc;
        for (int k = 0; k < m.cols; ++k) {
            if (m.at(i, k).is_zero()) continue;
            acc = acc + m.at(i, k) * col[static_cast<std::size_t>(k)];
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
    return col_to_ev(c, out);
}

}  // namespace

PsiBReport psi_b_gauge(const CanonicalPair& pair, const Tensor& b,
                       const std::vector<Point>& samples) {
    const JacobiStructure& j = pair.j;
    const Chart& c = j.chart;
    int n = c.dim();
    PsiBReport rep;
    Mat s = sharp_map(j).m;
    Mat bt = db_b_tilde(b).m;
    rep.psi = Mat::identity(n + 1) + s * bt;
    rep.det = mat_det(rep.psi);
    rep.status = classify_nonvanishing(rep.det, samples);
    AdmissibilityReport adm = admissibility(j, b, samples);
    rep.status_matches_admissibility =
        rep.status.nonvanishing() == adm.status.nonvanishing();
    rep.transpose_is_phi = (rep.psi.transpose() - adm.phi.m).is_zero();
    if (!rep.status.nonvanishing()) return rep;

    Mat psi_inv = mat_inverse(rep.psi).inverse;
    // induced sharp (a,phi0) o (a_*^B, X0^B)* = sharp o (psi^T)^{-1}
    Mat induced = s * mat_inverse(rep.psi.transpose()).inverse;
    JacobiStructure jb = gauge_jacobi(j, b, samples);
    rep.sharp_coherent = (induced - sharp_map(jb).m).is_zero();

    // gauged cocycle X0 o psi^{-1} closed for the gauged bracket and anchor
    std::vector<ExtendedVector> frame;
    for (int i = 0; i < n; ++i)
        frame.push_back(ExtendedVector::make(Tensor::basis_vector(c, i), Scalar()));
    frame.push_back(ExtendedVector::make(Tensor::zero(c, TKind::MultiVector, 1), Scalar(1)));
    auto theta = [&](const ExtendedVector& w) {
        auto col = ev_col(w);
        Scalar acc;
        for (int k = 0; k < n + 1; ++k) acc = acc + psi_inv.at(n, k) * col[static_cast<std::size_t>(k)];
        return acc;
    };
    auto anchor_b = [&](const ExtendedVector& w) { return apply_mat(psi_inv, w, c).x; };
    rep.gauged_cocycle_closed = true;
    for (std::size_t i = 0; i < frame.size() && rep.gauged_cocycle_closed; ++i)
        for (std::size_t k = i + 1; k < frame.size(); ++k) {
            ExtendedVector br = apply_mat(
                rep.psi, ext_bracket(apply_mat(psi_inv, frame[i], c), apply_mat(psi_inv, frame[k], c)),
                c);
            Scalar dtheta = apply_vector(anchor_b(frame[i]), theta(frame[k])) -
                            apply_vector(anchor_b(frame[k]), theta(frame[i])) - theta(br);
            if (!dtheta.is_zero()) {
                rep.gauged_cocycle_closed = false;
                break;
            }
        }

    rep.remark_iso = rep.transpose_is_phi && verify_algebroid_iso(j, b, samples);
    return rep;
}

}  // namespace jkit
