#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "jkit/glb.hpp"

using namespace jkit;

namespace {

Chart r3() { return Chart::make("R3", {"q", "p", "z"}); }
Chart r2() { return Chart::make("R2", {"q", "p"}); }

Scalar S(const std::string& text, const Chart& c) { return parse_scalar(text, c.coords); }

Tensor eta_f1() {
    Tensor t = Tensor::zero(r3(), TKind::Form, 1);
    t.add({2}, Scalar(1));
    t.add({0}, S("-p", r3()));
    return t;
}

Tensor b4() {
    Tensor t = Tensor::zero(r3(), TKind::Form, 1);
    t.add({1}, S("-q", r3()));
    return t;
}

JacobiStructure f2() {
    Chart c = r2();
    Tensor pi = Tensor::zero(c, TKind::MultiVector, 2);
    pi.add({0, 1}, Scalar(1));
    return JacobiStructure::make(pi, Tensor::zero(c, TKind::MultiVector, 1));
}

JacobiStructure f1_derived() { return contact_to_jacobi(ContactForm{r3(), eta_f1()}); }

JacobiStructure f3_derived() {
    Chart c = r2();
    Tensor omega = Tensor::zero(c, TKind::Form, 2);
    omega.add({0, 1}, S("exp(q)", c));
    return lcs_to_jacobi(make_lcs(c, omega, Tensor::basis_form(c, 0), {}));
}

std::vector<Point> grid3() {
    Chart c = r3();
    std::vector<Point> pts;
    for (int q = -1; q <= 1; ++q)
        for (int p = -1; p <= 1; ++p)
            for (int z = -1; z <= 1; ++z)
                pts.push_back({{c.coords[0], Rat(q)}, {c.coords[1], Rat(p)}, {c.coords[2], Rat(z)}});
    return pts;
}

Scalar random_poly(std::mt19937& rng, const Chart& c, int deg) {
    std::uniform_int_distribution<int> coeff(-2, 2);
    Scalar s(Rat(coeff(rng)));
    for (int d = 0; d < deg; ++d) {
        std::uniform_int_distribution<std::size_t> iv(0, c.coords.size() - 1);
        Scalar term(Rat(coeff(rng)));
        for (int k = 0; k <= d; ++k) term = term * Scalar::var(c.coords[iv(rng)]);
        s = s + term;
    }
    return s;
}

Tensor random_mv(std::mt19937& rng, const Chart& c, int deg) {
    Tensor t = Tensor::zero(c, TKind::MultiVector, deg);
    for (const auto& idx : increasing_tuples(c.dim(), deg)) t.add(idx, random_poly(rng, c, 2));
    return t;
}

MvPair random_mvpair(std::mt19937& rng, const Chart& c, int deg) {
    if (deg == 0) return MvPair::scalar(c, random_poly(rng, c, 2));
    return MvPair::make(random_mv(rng, c, deg), random_mv(rng, c, deg - 1));
}

MvPair ev_pair(const ExtendedVector& v) {
    return MvPair::make(v.x, Tensor::constant(v.x.chart, TKind::MultiVector, v.f));
}

}  // namespace

TEST_CASE("multisection pair algebra") {
    Chart c = r2();
    std::mt19937 rng(3);
    // wedge against the distinguished section and contraction duality
    MvPair e = MvPair::make(Tensor::zero(c, TKind::MultiVector, 1),
                            Tensor::constant(c, TKind::MultiVector, Scalar(1)));
    MvPair x = random_mvpair(rng, c, 1);
    CHECK(mv_contract_e(e).p.scalar_part() == Scalar(1));
    CHECK(mv_contract_e(x).p.scalar_part() == x.q.scalar_part());
    // e ^ e = 0
    CHECK(mv_wedge(e, e).is_zero());
}

TEST_CASE("tangent differential and twist") {
    Chart c = r3();
    std::mt19937 rng(5);
    PairForm phi0 = PairForm::make(Tensor::zero(c, TKind::Form, 1),
                                   Tensor::constant(c, TKind::Form, Scalar(1)));
    for (int deg = 0; deg <= 2; ++deg)
        for (int i = 0; i < 6; ++i) {
            PairForm a = deg == 0 ? PairForm::scalar(c, random_poly(rng, c, 2))
                                  : PairForm::make(
                                        [&] {
                                            Tensor t = Tensor::zero(c, TKind::Form, deg);
                                            for (const auto& idx : increasing_tuples(3, deg))
                                                t.add(idx, random_poly(rng, c, 2));
                                            return t;
                                        }(),
                                        [&] {
                                            Tensor t = Tensor::zero(c, TKind::Form, deg - 1);
                                            for (const auto& idx : increasing_tuples(3, deg - 1))
                                                t.add(idx, random_poly(rng, c, 2));
                                            return t;
                                        }());
            // twisted differential is tilde_d; difference with the plain one
            // is wedging with the cocycle
            CHECK(tangent_d_twisted(a) == tilde_d(a));
            CHECK(tangent_d_twisted(a) - tangent_d(a) == pf_wedge(phi0, a));
            CHECK(tangent_d_twisted(tangent_d_twisted(a)).is_zero());
        }
    // cocycle closed for the untwisted differential
    CHECK(tangent_d(phi0).is_zero());
}

TEST_CASE("cotangent differential") {
    for (const JacobiStructure& j : {f2(), f1_derived(), f3_derived()}) {
        const Chart& c = j.chart;
        std::mt19937 rng(7);
        // on functions: d g = (-pi# dg, E(g))
        for (int i = 0; i < 5; ++i) {
            Scalar g = random_poly(rng, c, 2);
            MvPair d = cotangent_d(j, MvPair::scalar(c, g));
            CHECK((d.p + pi_sharp(j.pi, d_scalar(c, g))).is_zero());
            CHECK((d.q.scalar_part() - apply_vector(j.e, g)).is_zero());
        }
        // cocycle (-E, 0) closed for the untwisted differential
        MvPair x0 = MvPair::make(-j.e, Tensor::zero(c, TKind::MultiVector, 0));
        CHECK(cotangent_d(j, x0).is_zero());
        // twisted square zero on random low-degree forms
        for (int deg = 0; deg <= 1; ++deg)
            for (int i = 0; i < 4; ++i) {
                MvPair w = random_mvpair(rng, c, deg);
                CHECK(cotangent_d_twisted(j, cotangent_d_twisted(j, w)).is_zero());
                MvPair diff = cotangent_d_twisted(j, w) - cotangent_d(j, w);
                CHECK((diff - mv_wedge(x0, w)).is_zero());
            }
    }
}

TEST_CASE("tangent Schouten-Jacobi bracket") {
    Chart c = r3();
    std::mt19937 rng(11);
    // degree (1,1): both corrections vanish and the bracket is the extended
    // Lie bracket ([X,Y], X(h) - Y(f))
    for (int i = 0; i < 6; ++i) {
        MvPair a = random_mvpair(rng, c, 1), b = random_mvpair(rng, c, 1);
        ExtendedVector va = ExtendedVector::make(a.p, a.q.scalar_part());
        ExtendedVector vb = ExtendedVector::make(b.p, b.q.scalar_part());
        MvPair expected = ev_pair(ext_bracket(va, vb));
        CHECK((schouten_jacobi_tangent(a, b) - expected).is_zero());
        CHECK((tangent_gerstenhaber(a, b) - expected).is_zero());
    }
    // degree (1,0): [(X,f), g] = X(g) + f g by the -(q-1) correction
    for (int i = 0; i < 6; ++i) {
        MvPair a = random_mvpair(rng, c, 1);
        Scalar g = random_poly(rng, c, 2);
        MvPair out = schouten_jacobi_tangent(a, MvPair::scalar(c, g));
        Scalar expected = apply_vector(a.p, g) + a.q.scalar_part() * g;
        CHECK((out.p.scalar_part() - expected).is_zero());
    }
    // graded skew at low degrees
    for (int p = 1; p <= 3; ++p)
        for (int q = 0; q <= 2; ++q)
            for (int i = 0; i < 4; ++i) {
                MvPair a = random_mvpair(rng, c, p), b = random_mvpair(rng, c, q);
                MvPair lhs = schouten_jacobi_tangent(a, b);
                MvPair rhs = schouten_jacobi_tangent(b, a);
                int sgn = ((p - 1) * (q - 1)) % 2 == 0 ? 1 : -1;
                CHECK((lhs + rhs.scaled(Scalar(Rat(sgn)))).is_zero());
            }
    // the Jacobi pair as an extended bivector: [PiJ, PiJ]^{phi0} = 0 is the
    // structure equation
    {
        Chart c3 = r3();
        JacobiStructure j1 = f1_derived();
        MvPair pij = MvPair::make(j1.pi, j1.e);
        CHECK(schouten_jacobi_tangent(pij, pij).is_zero());
        Tensor bad = Tensor::zero(c3, TKind::MultiVector, 2);
        bad.add({0, 1}, S("z", c3));
        MvPair notjac = MvPair::make(bad, Tensor::basis_vector(c3, 2));
        CHECK_FALSE(schouten_jacobi_tangent(notjac, notjac).is_zero());
    }
}

TEST_CASE("cotangent Schouten-Jacobi bracket") {
    for (const JacobiStructure& j : {f2(), f1_derived()}) {
        const Chart& c = j.chart;
        std::mt19937 rng(13);
        auto random_pf = [&](int deg) {
            if (deg == 0) return PairForm::scalar(c, random_poly(rng, c, 1));
            Tensor hi = Tensor::zero(c, TKind::Form, deg);
            for (const auto& idx : increasing_tuples(c.dim(), deg)) hi.add(idx, random_poly(rng, c, 1));
            Tensor lo = Tensor::zero(c, TKind::Form, deg - 1);
            for (const auto& idx : increasing_tuples(c.dim(), deg - 1)) lo.add(idx, random_poly(rng, c, 1));
            return PairForm::make(hi, lo);
        };
        // (1,1) is the jet bracket
        for (int i = 0; i < 4; ++i) {
            PairForm a = random_pf(1), b = random_pf(1);
            PairForm expected = jet_bracket(j, ExtendedCovector::from_pair(a),
                                            ExtendedCovector::from_pair(b))
                                    .as_pair();
            CHECK((schouten_jacobi_cotangent(j, a, b) - expected).is_zero());
        }
        // graded skew at low degrees
        for (int p = 1; p <= 2; ++p)
            for (int q = 1; q <= 2; ++q)
                for (int i = 0; i < 3; ++i) {
                    PairForm a = random_pf(p), b = random_pf(q);
                    PairForm lhs = schouten_jacobi_cotangent(j, a, b);
                    PairForm rhs = schouten_jacobi_cotangent(j, b, a);
                    int sgn = ((p - 1) * (q - 1)) % 2 == 0 ? 1 : -1;
                    CHECK((lhs + rhs.scaled(Scalar(Rat(sgn)))).is_zero());
                }
        // Leibniz over the module structure for the plain bracket
        for (int i = 0; i < 4; ++i) {
            PairForm a = random_pf(1);
            PairForm b = random_pf(1);
            Scalar f = random_poly(rng, c, 1);
            PairForm lhs = cotangent_gerstenhaber(j, a, b.scaled(f));
            PairForm rhs = b.scaled(cotangent_gerstenhaber(j, a, PairForm::scalar(c, f))
                                        .hi.scalar_part()) +
                           cotangent_gerstenhaber(j, a, b).scaled(f);
            CHECK((lhs - rhs).is_zero());
        }
    }
}

TEST_CASE("canonical pair cocycles") {
    CanonicalPair p2 = canonical_pair(f2());
    CHECK(p2.j.e.is_zero());  // cocycle (-E,0) = 0 for a Poisson structure
    CanonicalPair p1 = canonical_pair(f1_derived());
    CHECK(p1.j.e == Tensor::basis_vector(r3(), 2));
}

TEST_CASE("generalized Lie bialgebroid compatibility") {
    for (const JacobiStructure& j : {f2(), f1_derived(), f3_derived()}) {
        CanonicalPair pair = canonical_pair(j);
        const Chart& c = j.chart;
        // all degree <= 1 coordinate multisections: coordinate functions,
        // the coordinate fields (d/dx^i, 0) and the section (0,1)
        std::vector<MvPair> items;
        for (Var v : c.coords) items.push_back(MvPair::scalar(c, Scalar::var(v)));
        for (int i = 0; i < c.dim(); ++i)
            items.push_back(MvPair::make(Tensor::basis_vector(c, i),
                                         Tensor::zero(c, TKind::MultiVector, 0)));
        items.push_back(MvPair::make(Tensor::zero(c, TKind::MultiVector, 1),
                                     Tensor::constant(c, TKind::MultiVector, Scalar(1))));
        for (const auto& p : items)
            for (const auto& q : items) CHECK(verify_glb_compat(pair, p, q));
    }
}

TEST_CASE("compatibility with non-constant multisections") {
    JacobiStructure j = f1_derived();
    CanonicalPair pair = canonical_pair(j);
    Chart c = j.chart;
    std::mt19937 rng(17);
    for (int i = 0; i < 5; ++i) {
        MvPair p = random_mvpair(rng, c, 1);
        MvPair q = random_mvpair(rng, c, i % 2);
        CHECK(verify_glb_compat(pair, p, q));
    }
}

TEST_CASE("psi_B gauge") {
    Chart c = r3();
    JacobiStructure j = f1_derived();
    CanonicalPair pair = canonical_pair(j);

    PsiBReport zero = psi_b_gauge(pair, Tensor::zero(c, TKind::Form, 1), {});
    CHECK(zero.psi == Mat::identity(4));
    CHECK(zero.status.kind == Vanishing::Unit);
    CHECK(zero.pass());

    PsiBReport rep = psi_b_gauge(pair, b4(), grid3());
    CHECK(rep.status.nonvanishing());
    CHECK(rep.status_matches_admissibility);
    CHECK(rep.transpose_is_phi);
    CHECK(rep.sharp_coherent);
    CHECK(rep.gauged_cocycle_closed);
    CHECK(rep.remark_iso);
    CHECK(rep.pass());

    // Poisson fixture with B = q dq
    Chart c2 = r2();
    CanonicalPair pair2 = canonical_pair(f2());
    Tensor qdq = Tensor::basis_form(c2, 0).scaled(S("q", c2));
    std::vector<Point> grid2;
    for (int q = -1; q <= 1; ++q)
        for (int p = -1; p <= 1; ++p)
            grid2.push_back({{c2.coords[0], Rat(q)}, {c2.coords[1], Rat(p)}});
    CHECK(psi_b_gauge(pair2, qdq, grid2).pass());

    // inadmissible forms are reported through the status
    Tensor dz = Tensor::basis_form(c, 2);
    PsiBReport bad = psi_b_gauge(pair, dz, grid3());
    CHECK_FALSE(bad.status.nonvanishing());
    CHECK(bad.status_matches_admissibility);
}
