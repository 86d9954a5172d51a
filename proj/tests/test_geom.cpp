#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "jkit/geom.hpp"

using namespace jkit;

namespace {

Chart r3() { return Chart::make("R3", {"q", "p", "z"}); }
Chart r2() { return Chart::make("R2", {"q", "p"}); }

Scalar S(const std::string& text, const Chart& c) { return parse_scalar(text, c.coords); }

Tensor form1(const Chart& c, const std::vector<std::string>& coeffs) {
    Tensor t = Tensor::zero(c, TKind::Form, 1);
    for (int i = 0; i < c.dim(); ++i) t.add({i}, S(coeffs[static_cast<std::size_t>(i)], c));
    return t;
}

// eta = dz - p dq on R3
Tensor eta_f1() {
    Tensor t = Tensor::zero(r3(), TKind::Form, 1);
    t.add({2}, Scalar(1));
    t.add({0}, S("-p", r3()));
    return t;
}

// pi = @q^@p + p*@z^@p, E = @z: the Jacobi pair of eta
Tensor pi_f1() {
    Tensor t = Tensor::zero(r3(), TKind::MultiVector, 2);
    t.add({0, 1}, Scalar(1));
    t.add({2, 1}, S("p", r3()));
    return t;
}

Scalar random_poly(std::mt19937& rng, const Chart& c, int deg) {
    std::uniform_int_distribution<int> coeff(-3, 3);
    Scalar s(Rat(coeff(rng)));
    for (int d = 0; d < deg; ++d) {
        std::uniform_int_distribution<std::size_t> iv(0, c.coords.size() - 1);
        Scalar term(Rat(coeff(rng)));
        for (int k = 0; k <= d; ++k) term = term * Scalar::var(c.coords[iv(rng)]);
        s = s + term;
    }
    return s;
}

Tensor random_tensor(std::mt19937& rng, const Chart& c, TKind k, int deg) {
    Tensor t = Tensor::zero(c, k, deg);
    for (const auto& idx : increasing_tuples(c.dim(), deg)) t.add(idx, random_poly(rng, c, 2));
    return t;
}

}  // namespace

TEST_CASE("wedge") {
    Chart c = r3();
    Tensor dq = Tensor::basis_form(c, 0), dp = Tensor::basis_form(c, 1), dz = Tensor::basis_form(c, 2);
    CHECK(wedge(dq, dq).is_zero());
    CHECK(wedge(dq, dp) == -wedge(dp, dq));
    Tensor pdq = dq.scaled(S("p", c));
    CHECK(wedge(pdq, dz) == wedge(dq, dz).scaled(S("p", c)));
    CHECK_THROWS_AS(wedge(Tensor::basis_form(r2(), 0), dq), ChartMismatch);
    // degree past the chart dimension collapses to the zero tensor
    CHECK(wedge(wedge(dq, dp), wedge(dz, dq)).is_zero());
}

TEST_CASE("exterior derivative") {
    Chart c = r3();
    Tensor pdq = Tensor::basis_form(c, 0).scaled(S("p", c));
    Tensor d1 = exterior_derivative(pdq);
    Tensor dpdq = wedge(Tensor::basis_form(c, 1), Tensor::basis_form(c, 0));
    CHECK(d1 == dpdq);
    CHECK(exterior_derivative(exterior_derivative(eta_f1())).is_zero());
    Chart c2 = r2();
    Tensor top = wedge(Tensor::basis_form(c2, 0), Tensor::basis_form(c2, 1)).scaled(S("exp(q)", c2));
    CHECK(exterior_derivative(top).is_zero());
}

TEST_CASE("d squared is zero on random forms") {
    std::mt19937 rng(3);
    Chart c = r3();
    for (int deg = 0; deg <= 2; ++deg)
        for (int i = 0; i < 10; ++i)
            CHECK(exterior_derivative(exterior_derivative(random_tensor(rng, c, TKind::Form, deg)))
                      .is_zero());
}

TEST_CASE("interior product") {
    Chart c = r3();
    Tensor dq = Tensor::basis_form(c, 0), dp = Tensor::basis_form(c, 1);
    CHECK(interior_vector(Tensor::basis_vector(c, 0), wedge(dq, dp)) == dp);
    Tensor res = interior_vector(Tensor::basis_vector(c, 2), eta_f1());
    CHECK(res.degree == 0);
    CHECK(res.scalar_part() == Scalar(1));
    CHECK_THROWS_AS(interior_vector(Tensor::basis_vector(c, 0), Tensor::constant(c, TKind::Form, Scalar(1))),
                    Error);
    // tensoriality
    std::mt19937 rng(5);
    for (int i = 0; i < 8; ++i) {
        Tensor x = random_tensor(rng, c, TKind::MultiVector, 1);
        Tensor a = random_tensor(rng, c, TKind::Form, 2);
        Scalar f = random_poly(rng, c, 2);
        CHECK((interior_vector(x, a.scaled(f)) - interior_vector(x, a).scaled(f)).is_zero());
    }
}

TEST_CASE("lie derivative") {
    Chart c = r3();
    CHECK(lie_derivative(Tensor::basis_vector(c, 2), eta_f1()).is_zero());
    Tensor zpi = Tensor::zero(c, TKind::MultiVector, 2);
    zpi.add({0, 1}, S("z", c));
    Tensor lz = lie_derivative(Tensor::basis_vector(c, 2), zpi);
    Tensor expected = Tensor::zero(c, TKind::MultiVector, 2);
    expected.add({0, 1}, Scalar(1));
    CHECK(lz == expected);
    // L_X f = i_X df on scalars
    std::mt19937 rng(7);
    for (int i = 0; i < 10; ++i) {
        Tensor x = random_tensor(rng, c, TKind::MultiVector, 1);
        Scalar f = random_poly(rng, c, 3);
        Tensor f0 = Tensor::constant(c, TKind::Form, f);
        Scalar via_cartan = lie_derivative(x, f0).scalar_part();
        Scalar via_ix = interior_vector(x, exterior_derivative(f0)).scalar_part();
        CHECK((via_cartan - via_ix).is_zero());
        CHECK((via_cartan - apply_vector(x, f)).is_zero());
    }
}

TEST_CASE("schouten bracket basics") {
    Chart c = r3();
    CHECK(schouten(Tensor::basis_vector(c, 0), Tensor::basis_vector(c, 1)).is_zero());
    // constant Poisson bivector on R2
    Chart c2 = r2();
    Tensor pi2 = Tensor::zero(c2, TKind::MultiVector, 2);
    pi2.add({0, 1}, Scalar(1));
    CHECK(schouten(pi2, pi2).is_zero());
    // [X, f] = X(f)
    std::mt19937 rng(11);
    for (int i = 0; i < 8; ++i) {
        Tensor x = random_tensor(rng, c, TKind::MultiVector, 1);
        Scalar f = random_poly(rng, c, 2);
        Tensor fa = Tensor::constant(c, TKind::MultiVector, f);
        CHECK((schouten(x, fa).scalar_part() - apply_vector(x, f)).is_zero());
    }
}

TEST_CASE("convention anchor: contact pair satisfies the defining identities") {
    Chart c = r3();
    Tensor pi = pi_f1();
    Tensor e = Tensor::basis_vector(c, 2);
    Tensor c1 = schouten(pi, pi) - wedge(e, pi).scaled(Scalar(2));
    CHECK(c1.is_zero());
    CHECK(schouten(e, pi).is_zero());
}

TEST_CASE("schouten graded skew and Jacobi") {
    std::mt19937 rng(13);
    Chart c = r3();
    auto sgn = [](int k) { return k % 2 == 0 ? 1 : -1; };
    for (int i = 0; i < 6; ++i) {
        for (int p = 1; p <= 3; ++p)
            for (int q = 1; q <= 3; ++q) {
                Tensor P = random_tensor(rng, c, TKind::MultiVector, p);
                Tensor Q = random_tensor(rng, c, TKind::MultiVector, q);
                Tensor skew = schouten(P, Q) + schouten(Q, P).scaled(Scalar(Rat(sgn((p - 1) * (q - 1)))));
                CHECK(skew.is_zero());
            }
    }
    // graded Leibniz form of the Jacobi identity, degrees <= 2
    for (int i = 0; i < 6; ++i) {
        for (int p = 1; p <= 2; ++p)
            for (int q = 1; q <= 2; ++q) {
                Tensor P = random_tensor(rng, c, TKind::MultiVector, p);
                Tensor Q = random_tensor(rng, c, TKind::MultiVector, q);
                Tensor R = random_tensor(rng, c, TKind::MultiVector, 2);
                Tensor lhs = schouten(schouten(P, Q), R);
                Tensor rhs = schouten(P, schouten(Q, R)) -
                             schouten(Q, schouten(P, R)).scaled(Scalar(Rat(sgn((p - 1) * (q - 1)))));
                CHECK((lhs - rhs).is_zero());
            }
    }
    // Leibniz over wedge for vector fields
    for (int i = 0; i < 6; ++i) {
        Tensor X = random_tensor(rng, c, TKind::MultiVector, 1);
        Tensor Q = random_tensor(rng, c, TKind::MultiVector, 1);
        Tensor R = random_tensor(rng, c, TKind::MultiVector, 1);
        Tensor lhs = schouten(X, wedge(Q, R));
        Tensor rhs = wedge(schouten(X, Q), R) + wedge(Q, schouten(X, R));
        CHECK((lhs - rhs).is_zero());
    }
}

TEST_CASE("pullback") {
    Chart prod = r2();
    Chart line = Chart::make("R1", {"q"});
    SmoothMap pr1 = SmoothMap::projection(prod, line, {0});
    CHECK(pr1.pullback(Tensor::basis_form(line, 0)) == Tensor::basis_form(prod, 0));

    Chart tline = Chart::make("T", {"t"});
    SmoothMap phi = SmoothMap::make(tline, prod, {S("t", tline), S("t^2", tline)});
    Tensor dp = Tensor::basis_form(prod, 1);
    Tensor pulled = phi.pullback(dp);
    Tensor expected = Tensor::basis_form(tline, 0).scaled(S("2*t", tline));
    CHECK(pulled == expected);

    Tensor pdq = Tensor::basis_form(prod, 0).scaled(S("p", prod));
    CHECK((phi.pullback(exterior_derivative(pdq)) - exterior_derivative(phi.pullback(pdq))).is_zero());
}

TEST_CASE("pullback naturality on random data") {
    std::mt19937 rng(17);
    Chart src = r2(), dst = r3();
    for (int i = 0; i < 6; ++i) {
        std::vector<Scalar> comps;
        for (int j = 0; j < 3; ++j) comps.push_back(random_poly(rng, src, 2));
        SmoothMap phi = SmoothMap::make(src, dst, comps);
        for (int deg = 0; deg <= 2; ++deg) {
            Tensor a = random_tensor(rng, dst, TKind::Form, deg);
            CHECK((phi.pullback(exterior_derivative(a)) - exterior_derivative(phi.pullback(a))).is_zero());
        }
        for (int deg = 0; deg <= 1; ++deg) {
            Tensor a = random_tensor(rng, dst, TKind::Form, deg);
            Tensor b = random_tensor(rng, dst, TKind::Form, deg);
            CHECK((phi.pullback(wedge(a, b)) - wedge(phi.pullback(a), phi.pullback(b))).is_zero());
        }
    }
}

TEST_CASE("related_check") {
    Chart c2 = r2();
    Tensor pi2 = Tensor::zero(c2, TKind::MultiVector, 2);
    pi2.add({0, 1}, Scalar(1));
    SmoothMap id = SmoothMap::make(c2, c2, {S("q", c2), S("p", c2)});
    CHECK(related_check(id, pi2, pi2));

    Chart line = Chart::make("R1", {"q"});
    SmoothMap pr1 = SmoothMap::projection(c2, line, {0});
    Tensor zero2 = Tensor::zero(line, TKind::MultiVector, 2);
    CHECK(related_check(pr1, pi2, zero2));

    SmoothMap dbl = SmoothMap::make(line, line, {S("2*q", line)});
    Tensor dq = Tensor::basis_vector(line, 0);
    CHECK_FALSE(related_check(dbl, dq, dq));
    CHECK(related_check(dbl, dq, dq.scaled(Scalar(2))));
}

TEST_CASE("chart extension avoids collisions") {
    Chart c = Chart::make("C", {"q", "t"});
    Chart e = c.extended("t");
    CHECK(e.dim() == 3);
    CHECK(e.coords[2].name() == "t_1");
}
