#include "jkit/groupoid.hpp"

namespace jkit {

namespace {

SmoothMap copy_projection(const Chart& total, const Chart& base, int offset) {
    std::vector<int> idx;
    for (int i = 0; i < base.dim(); ++i) idx.push_back(offset + i);
    return SmoothMap::projection(total, base, idx);
}

}  // namespace

PairGroupoid build_pair_groupoid(const ContactForm& eta, const std::vector<Point>& total_samples) {
    const Chart& base = eta.chart;
    std::vector<std::string> names;
    for (Var v : base.coords) names.push_back(v.name() + "1");
    names.push_back("t");
    for (Var v : base.coords) names.push_back(v.name() + "2");
    Chart total = Chart::make(base.name + "_pair", names);
    int m = base.dim();
    SmoothMap alpha = copy_projection(total, base, m + 1);  // pr3
    SmoothMap beta = copy_projection(total, base, 0);       // pr1
    Scalar sigma = Scalar::var(total.coords[static_cast<std::size_t>(m)]);
    Scalar es = Scalar::exp_linform({{total.coords[static_cast<std::size_t>(m)], Rat(1)}});
    Tensor eta_g = alpha.pullback(eta.eta).scaled(es) - beta.pullback(eta.eta);
    PairGroupoid g{eta, base, total, alpha, beta, sigma, eta_g};
    auto cls = verify_contact(eta_g, total_samples);
    if (!cls.nonvanishing())
        throw Error("pair groupoid form is not contact: " + vanishing_str(cls.kind));
    if (!verify_sigma_multiplicative(g)) throw Error("sigma is not multiplicative");
    return g;
}

namespace {

// Symbolic composable pair: coordinates for g = (x,t,y), h = (y,s,z) plus
// tangent components for X_g and a composable Y_h.
struct ComposableSetup {
    Chart big;
    std::map<Var, Scalar, VarLess> at_g, at_h, at_gh;
    std::vector<Scalar> xg, yh, prod;  // tangent components over the total frame
};

ComposableSetup composable_setup(const PairGroupoid& g) {
    const Chart& base = g.base;
    int m = base.dim();
    int dim_total = 2 * m + 1;
    std::vector<std::string> names;
    for (Var v : base.coords) names.push_back(v.name() + "1");
    names.push_back("t");
    for (Var v : base.coords) names.push_back(v.name() + "2");
    names.push_back("s");
    for (Var v : base.coords) names.push_back(v.name() + "3");
    for (int i = 0; i < dim_total; ++i) names.push_back("_u" + std::to_string(i));
    for (int i = 0; i <= m; ++i) names.push_back("_w" + std::to_string(i));
    ComposableSetup cs;
    cs.big = Chart::make("composable", names);
    auto big_var = [&](int i) { return Scalar::var(cs.big.coords[static_cast<std::size_t>(i)]); };
    int x0 = 0, t0 = m, y0 = m + 1, s0 = 2 * m + 1, z0 = 2 * m + 2;
    int u0 = 3 * m + 2, w0 = u0 + dim_total;
    for (int i = 0; i < m; ++i) {
        Var li = g.total.coords[static_cast<std::size_t>(i)];
        Var ri = g.total.coords[static_cast<std::size_t>(m + 1 + i)];
        cs.at_g.emplace(li, big_var(x0 + i));
        cs.at_g.emplace(ri, big_var(y0 + i));
        cs.at_h.emplace(li, big_var(y0 + i));
        cs.at_h.emplace(ri, big_var(z0 + i));
        cs.at_gh.emplace(li, big_var(x0 + i));
        cs.at_gh.emplace(ri, big_var(z0 + i));
    }
    Var tv = g.total.coords[static_cast<std::size_t>(m)];
    cs.at_g.emplace(tv, big_var(t0));
    cs.at_h.emplace(tv, big_var(s0));
    cs.at_gh.emplace(tv, big_var(t0) + big_var(s0));
    // X_g free; Y_h shares its left copy with X_g's right copy
    for (int i = 0; i < dim_total; ++i) cs.xg.push_back(big_var(u0 + i));
    for (int i = 0; i < m; ++i) cs.yh.push_back(big_var(u0 + m + 1 + i));
    for (int i = 0; i <= m; ++i) cs.yh.push_back(big_var(w0 + i));
    // (u, a, v) . (v, b, w) = (u, a+b, w)
    for (int i = 0; i < m; ++i) cs.prod.push_back(big_var(u0 + i));
    cs.prod.push_back(big_var(u0 + m) + big_var(w0));
    for (int i = 1; i <= m; ++i) cs.prod.push_back(big_var(w0 + i));
    return cs;
}

Scalar pair_form_with(const Tensor& form, const std::map<Var, Scalar, VarLess>& at,
                      const std::vector<Scalar>& tangent) {
    Scalar acc;
    for (int i = 0; i < form.chart.dim(); ++i) {
        Scalar ci = form.comp({i});
        if (ci.is_zero()) continue;
        acc = acc + ci.substitute(at) * tangent[static_cast<std::size_t>(i)];
    }
    return acc;
}

}  // namespace

bool verify_sigma_multiplicative(const PairGroupoid& g) {
    ComposableSetup cs = composable_setup(g);
    Scalar lhs = g.sigma.substitute(cs.at_gh);
    Scalar rhs = g.sigma.substitute(cs.at_g) + g.sigma.substitute(cs.at_h);
    return (lhs - rhs).is_zero();
}

namespace {

// exp of a scalar that must be a linear form in chart variables
Scalar exp_of_linear(const Scalar& s) {
    if (s.is_zero()) return Scalar(1);
    if (!s.den().is_constant() || s.den().leading_coeff() != 1 || !s.den().leading_monomial().is_one())
        throw Error("exponent is not a linear form");
    std::vector<std::pair<Var, Rat>> lin;
    for (const auto& [m, c] : s.num().terms) {
        if (m.has_expo() || m.powers.size() != 1 || m.powers[0].second != 1)
            throw Error("exponent is not a linear form");
        lin.emplace_back(m.powers[0].first, c);
    }
    return Scalar::exp_linform(lin);
}

}  // namespace

bool verify_multiplicative(const PairGroupoid& g, const Tensor& form) {
    if (form.chart != g.total) throw ChartMismatch("form does not live on the groupoid chart");
    ComposableSetup cs = composable_setup(g);
    Scalar lhs = pair_form_with(form, cs.at_gh, cs.prod);
    Scalar e_sigma_g = exp_of_linear(g.sigma.substitute(cs.at_g));
    Scalar rhs = pair_form_with(form, cs.at_g, cs.xg) +
                 e_sigma_g * pair_form_with(form, cs.at_h, cs.yh);
    return (lhs - rhs).is_zero();
}

PairGroupoid gauge_groupoid_contact(const PairGroupoid& g, const Tensor& b_base,
                                    const std::vector<Point>& base_samples,
                                    const std::vector<Point>& total_samples) {
    JacobiStructure base_j = contact_to_jacobi(g.base_eta);
    auto adm = admissibility(base_j, b_base, base_samples);
    if (!adm.status.nonvanishing())
        throw Error("1-form is not admissible for the base: " + vanishing_str(adm.status.kind) +
                    (adm.status.witness ? " at " + point_str(*adm.status.witness) : ""));
    int m = g.base.dim();
    Scalar es = Scalar::exp_linform({{g.total.coords[static_cast<std::size_t>(m)], Rat(1)}});
    Tensor eta_b =
        g.eta_g - g.alpha_map.pullback(b_base).scaled(es) + g.beta_map.pullback(b_base);
    PairGroupoid out = g;
    out.base_eta = make_contact(g.base, g.base_eta.eta - b_base, base_samples);
    out.eta_g = std::move(eta_b);
    auto cls = verify_contact(out.eta_g, total_samples);
    if (!cls.nonvanishing())
        throw Error("gauged groupoid form is not contact: " + vanishing_str(cls.kind));
    return out;
}

KernelCheckReport check_source_target_kernels(const PairGroupoid& g,
                                              const std::vector<Scalar>& probes,
                                              const std::vector<Point>& samples) {
    if (static_cast<int>(probes.size()) < g.base.dim())
        throw Error("insufficient probes: need at least dim(base) functions");
    if (samples.empty()) throw Inconclusive("kernel check needs sample points");
    JacobiStructure jg = contact_to_jacobi(ContactForm{g.total, g.eta_g});
    // pairwise products realize the jet directions the bare probes miss
    std::vector<Scalar> cands = probes;
    for (std::size_t i = 0; i < probes.size(); ++i)
        for (std::size_t j = i; j < probes.size(); ++j) cands.push_back(probes[i] * probes[j]);
    int m = g.base.dim();
    Scalar es = Scalar::exp_linform({{g.total.coords[static_cast<std::size_t>(m)], Rat(1)}});
    std::vector<Tensor> src_fields, tgt_fields;
    for (const Scalar& f : cands) {
        src_fields.push_back(hamiltonian_vf(jg, g.beta_map.pull_scalar(f)));
        tgt_fields.push_back(hamiltonian_vf(jg, es * g.alpha_map.pull_scalar(f)));
    }
    KernelCheckReport rep;
    rep.containment = true;
    rep.span_match = true;
    int dim_total = g.total.dim();
    int kdim = dim_total - m;
    for (const auto& [map, fields] :
         {std::pair{&g.alpha_map, &src_fields}, std::pair{&g.beta_map, &tgt_fields}}) {
        Mat jac = map->jacobian();
        for (const auto& pt : samples) {
            Mat jp(m, dim_total);
            for (int r = 0; r < m; ++r)
                for (int c = 0; c < dim_total; ++c) jp.at(r, c) = jac.at(r, c).value_at(pt);
            auto kernel = mat_nullspace(jp);
            Mat kmat(static_cast<int>(kernel.size()) + static_cast<int>(fields->size()), dim_total);
            for (std::size_t r = 0; r < kernel.size(); ++r)
                for (int c = 0; c < dim_total; ++c)
                    kmat.at(static_cast<int>(r), c) = kernel[r][static_cast<std::size_t>(c)];
            Mat fmat(static_cast<int>(fields->size()), dim_total);
            for (std::size_t r = 0; r < fields->size(); ++r)
                for (int c = 0; c < dim_total; ++c) {
                    Scalar v = (*fields)[r].comp({c}).value_at(pt);
                    fmat.at(static_cast<int>(r), c) = v;
                    kmat.at(static_cast<int>(kernel.size() + r), c) = v;
                }
            if (mat_rank(kmat) != static_cast<int>(kernel.size())) rep.containment = false;
            if (mat_rank(fmat) != kdim) rep.span_match = false;
        }
    }
    if (rep.containment && !rep.span_match)
        throw Error("insufficient probes: hamiltonian fields do not span the kernels");
    return rep;
}

}  // namespace jkit
