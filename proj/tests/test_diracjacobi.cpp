#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "jkit/diracjacobi.hpp"

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

JacobiStructure f2() {
    Chart c = r2();
    Tensor pi = Tensor::zero(c, TKind::MultiVector, 2);
    pi.add({0, 1}, Scalar(1));
    return JacobiStructure::make(pi, Tensor::zero(c, TKind::MultiVector, 1));
}

JacobiStructure f1_derived() { return contact_to_jacobi(ContactForm{r3(), eta_f1()}); }

Point pt3(int q, int p, int z) {
    Chart c = r3();
    return Point{{c.coords[0], Rat(q)}, {c.coords[1], Rat(p)}, {c.coords[2], Rat(z)}};
}

Point pt2(int q, int p) {
    Chart c = r2();
    return Point{{c.coords[0], Rat(q)}, {c.coords[1], Rat(p)}};
}

std::vector<Point> grid2() { return {pt2(0, 0), pt2(1, 0), pt2(0, 1), pt2(1, 1), pt2(-1, 2)}; }
std::vector<Point> grid3() {
    return {pt3(0, 0, 0), pt3(1, 0, 0), pt3(0, 1, 0), pt3(0, 0, 1), pt3(1, 1, 1)};
}

}  // namespace

TEST_CASE("graph frames have the stated generators") {
    Chart c2 = r2();
    DJStructure g2 = graph_of_jacobi(f2());
    REQUIRE(g2.frame.size() == 3);
    CHECK(g2.frame[0].v.x == Tensor::basis_vector(c2, 1));
    CHECK(g2.frame[0].c.alpha == Tensor::basis_form(c2, 0));
    CHECK(g2.frame[1].v.x == -Tensor::basis_vector(c2, 0));
    CHECK(g2.frame[1].c.alpha == Tensor::basis_form(c2, 1));
    CHECK(g2.frame[2].v.is_zero());
    CHECK(g2.frame[2].c.alpha.is_zero());
    CHECK(g2.frame[2].c.g == Scalar(1));

    // F1-derived third-family generator (E,0)+(0,1) with E the Reeb field
    DJStructure g1 = graph_of_jacobi(f1_derived());
    CHECK(g1.frame[3].v.x == Tensor::basis_vector(r3(), 2));
    CHECK(g1.frame[3].v.f.is_zero());
    CHECK(g1.frame[3].c.g == Scalar(1));
}

TEST_CASE("verify_dj on graphs and precontact graphs") {
    CHECK(verify_dj(graph_of_jacobi(f2()), grid2()).pass());
    CHECK(verify_dj(graph_of_jacobi(f1_derived()), grid3()).pass());

    // precontact graphs are always Dirac-Jacobi
    Chart c = r3();
    CHECK(verify_dj(graph_of_precontact(Tensor::basis_form(c, 2)), grid3()).pass());
    CHECK(verify_dj(graph_of_precontact(eta_f1()), grid3()).pass());
    CHECK(verify_dj(graph_of_precontact(Tensor::zero(c, TKind::Form, 1)), grid3()).pass());

    // non-isotropic frame: witness pairing = 1
    Chart c2 = r2();
    std::vector<ExtendedSection> frame;
    frame.push_back(ExtendedSection::make(
        ExtendedVector::make(Tensor::basis_vector(c2, 0), Scalar()),
        ExtendedCovector::make(Tensor::basis_form(c2, 0), Scalar())));
    frame.push_back(ExtendedSection::make(
        ExtendedVector::make(Tensor::basis_vector(c2, 1), Scalar()), ExtendedCovector::zero(c2)));
    frame.push_back(ExtendedSection::make(
        ExtendedVector::zero(c2),
        ExtendedCovector::make(Tensor::zero(c2, TKind::Form, 1), Scalar(1))));
    DJReport rep = verify_dj(DJStructure::make(c2, frame), grid2());
    CHECK_FALSE(rep.isotropy);
    CHECK(rep.witness.find("pairing") != std::string::npos);

    CHECK_THROWS_AS(DJStructure::make(c2, {frame[0]}), Error);
}

TEST_CASE("graph characterization separates Jacobi from non-Jacobi pairs") {
    // the graph of the failing pair (z @q^@p, @z) must fail integrability
    Chart c = r3();
    Tensor bad = Tensor::zero(c, TKind::MultiVector, 2);
    bad.add({0, 1}, S("z", c));
    JacobiStructure jb = JacobiStructure::make(bad, Tensor::basis_vector(c, 2));
    CHECK_FALSE(verify_jacobi(jb).pass);
    DJReport rep = verify_dj(graph_of_jacobi(jb), grid3());
    CHECK(rep.isotropy);
    CHECK(rep.rank_ok);
    CHECK_FALSE(rep.integrable);
    CHECK(rep.witness.find("bracket") != std::string::npos);
}

TEST_CASE("integrability closure survives scalar multipliers") {
    // generator closure extends to module combinations: spot-check with a
    // scalar multiple of a generator
    DJStructure g = graph_of_jacobi(f1_derived());
    Chart c = r3();
    std::vector<ExtendedSection> frame = g.frame;
    frame[0] = frame[0].scaled(S("1 + p^2", c));
    DJStructure scaled = DJStructure::make(c, frame);
    CHECK(verify_dj(scaled, grid3()).pass());
}

TEST_CASE("diracize") {
    Chart c2 = r2();
    // (0,1) + (0,1) maps to d/dt + e^t dt
    std::vector<ExtendedSection> one;
    one.push_back(ExtendedSection::make(
        ExtendedVector::make(Tensor::zero(c2, TKind::MultiVector, 1), Scalar(1)),
        ExtendedCovector::make(Tensor::zero(c2, TKind::Form, 1), Scalar(1))));
    one.push_back(ExtendedSection::make(
        ExtendedVector::make(Tensor::basis_vector(c2, 0), Scalar()), ExtendedCovector::zero(c2)));
    one.push_back(ExtendedSection::make(
        ExtendedVector::make(Tensor::basis_vector(c2, 1), Scalar()), ExtendedCovector::zero(c2)));
    DiracFrame d = diracize(DJStructure::make(c2, one));
    Chart ec = d.chart;
    CHECK(d.frame[0].x == Tensor::basis_vector(ec, 2));
    Tensor etdt = Tensor::basis_form(ec, 2).scaled(parse_scalar("exp(t)", ec.coords));
    CHECK(d.frame[0].alpha == etdt);
    // zero sections stay zero up to the t-direction bookkeeping
    CHECK(d.frame[1].alpha.is_zero());

    // diracize(graph(F2)) spans the graph of the Poissonization
    DJStructure g2 = graph_of_jacobi(f2());
    DiracFrame d2 = diracize(g2);
    Poissonization p2 = poissonize(f2());
    DiracFrame gp = graph_of_poisson(p2.pi);
    std::vector<Point> ext_grid;
    for (const auto& base : grid2())
        for (int t : {0, 1}) {
            Point p = base;
            p.emplace(ec.coords[2], Rat(t));
            ext_grid.push_back(p);
        }
    CHECK(dirac_spans_equal(d2, gp, ext_grid));

    // same for the contact and l.c.s. fixtures
    DJStructure g1 = graph_of_jacobi(f1_derived());
    DiracFrame d1 = diracize(g1);
    DiracFrame gp1 = graph_of_poisson(poissonize(f1_derived()).pi);
    std::vector<Point> ext3;
    for (const auto& base : grid3())
        for (int t : {0, 1}) {
            Point p = base;
            p.emplace(gp1.chart.coords[3], Rat(t));
            ext3.push_back(p);
        }
    CHECK(dirac_spans_equal(d1, gp1, ext3));

    Tensor om = Tensor::zero(c2, TKind::Form, 2);
    om.add({0, 1}, S("exp(q)", c2));
    JacobiStructure j3 = lcs_to_jacobi(make_lcs(c2, om, Tensor::basis_form(c2, 0), {}));
    DiracFrame d3 = diracize(graph_of_jacobi(j3));
    DiracFrame gp3 = graph_of_poisson(poissonize(j3).pi);
    CHECK(dirac_spans_equal(d3, gp3, ext_grid));
}

TEST_CASE("kernel_at") {
    CHECK(kernel_at(graph_of_jacobi(f2()), pt2(0, 0)).empty());
    Chart c = r3();
    auto k = kernel_at(graph_of_precontact(Tensor::basis_form(c, 2)), pt3(0, 0, 0));
    REQUIRE(k.size() == 2);
    // spanned by (d/dq, 0) and (d/dp, 0)
    for (const auto& [x, f] : k) {
        CHECK(f == Rat(0));
        CHECK(x[2] == Rat(0));
    }
    CHECK((k[0].first[0] != 0 || k[0].first[1] != 0));
    for (const auto& pt : {pt3(0, 0, 0), pt3(1, 2, 3)})
        CHECK(kernel_at(graph_of_precontact(eta_f1()), pt).empty());
}

TEST_CASE("opposite") {
    JacobiStructure j = f1_derived();
    DJStructure opp = opposite(graph_of_jacobi(j));
    DJStructure gneg = graph_of_jacobi(j.negated());
    CHECK(spans_equal(frame_matrix(opp.frame), frame_matrix(gneg.frame), grid3()));
    DJStructure oo = opposite(opp);
    CHECK(spans_equal(frame_matrix(oo.frame), frame_matrix(graph_of_jacobi(j).frame), grid3()));
    // vector parts are negated generatorwise
    DJStructure pc = graph_of_precontact(Tensor::zero(r3(), TKind::Form, 1));
    DJStructure pco = opposite(pc);
    CHECK(pco.frame[0].v.x == -pc.frame[0].v.x);
}

TEST_CASE("is_contact_dj") {
    Chart c = r3();
    CHECK(is_contact_dj(graph_of_precontact(eta_f1()), grid3()));
    CHECK_FALSE(is_contact_dj(graph_of_precontact(Tensor::basis_form(c, 2)), grid3()));
    // F2 extended to R3 by zero: the vector-part condition fails
    Tensor pi = Tensor::zero(c, TKind::MultiVector, 2);
    pi.add({0, 1}, Scalar(1));
    JacobiStructure ext = JacobiStructure::make(pi, Tensor::zero(c, TKind::MultiVector, 1));
    CHECK(verify_jacobi(ext).pass);
    CHECK_FALSE(is_contact_dj(graph_of_jacobi(ext), grid3()));
    CHECK_THROWS_AS(is_contact_dj(graph_of_jacobi(f2()), grid2()), Error);
}

TEST_CASE("jet bracket") {
    JacobiStructure j2 = f2();
    Chart c2 = r2();
    ExtendedCovector zero = ExtendedCovector::zero(c2);
    ExtendedCovector dq = ExtendedCovector::make(Tensor::basis_form(c2, 0), Scalar());
    ExtendedCovector dp = ExtendedCovector::make(Tensor::basis_form(c2, 1), Scalar());
    CHECK(jet_bracket(j2, zero, dp).is_zero());

    // frozen by operator expansion: sharp(dq) = d/dp, sharp(dp) = -d/dq,
    // L~_{(d/dp,0)}(dp,0) = 0 and i_{(-d/dq,0)} d~(dq,0) = (0,1)
    ExtendedCovector br = jet_bracket(j2, dq, dp);
    CHECK(br.alpha.is_zero());
    CHECK(br.g == Scalar(-1));

    // skew on random inputs
    std::mt19937 rng(3);
    auto random_cov = [&](const Chart& c) {
        std::uniform_int_distribution<int> coeff(-2, 2);
        Tensor a = Tensor::zero(c, TKind::Form, 1);
        for (int i = 0; i < c.dim(); ++i)
            a.add({i}, Scalar(Rat(coeff(rng))) * Scalar::var(c.coords[0]) + Scalar(Rat(coeff(rng))));
        return ExtendedCovector::make(a, Scalar(Rat(coeff(rng))));
    };
    for (const JacobiStructure& j : {f2()}) {
        for (int i = 0; i < 8; ++i) {
            ExtendedCovector a = random_cov(j.chart), b = random_cov(j.chart);
            CHECK((jet_bracket(j, a, b) + jet_bracket(j, b, a)).is_zero());
        }
    }
    JacobiStructure j1 = f1_derived();
    for (int i = 0; i < 8; ++i) {
        ExtendedCovector a = random_cov(j1.chart), b = random_cov(j1.chart);
        CHECK((jet_bracket(j1, a, b) + jet_bracket(j1, b, a)).is_zero());
    }
}

TEST_CASE("jet bracket anchor compatibility and Jacobi identity") {
    JacobiStructure j = f1_derived();
    Chart c = j.chart;
    ExtendedBundleMap s = sharp_map(j);
    std::vector<ExtendedCovector> frame;
    for (int i = 0; i < c.dim(); ++i)
        frame.push_back(ExtendedCovector::make(Tensor::basis_form(c, i), Scalar()));
    frame.push_back(ExtendedCovector::make(Tensor::zero(c, TKind::Form, 1), Scalar(1)));
    for (const auto& a : frame)
        for (const auto& b : frame) {
            Tensor lhs = s.apply(jet_bracket(j, a, b)).x;
            Tensor rhs = schouten(s.apply(a).x, s.apply(b).x);
            CHECK((lhs - rhs).is_zero());
        }
    // Jacobi identity of the induced bracket on covector triples
    std::mt19937 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, frame.size() - 1);
    for (int rep = 0; rep < 3; ++rep) {
        ExtendedCovector a = frame[pick(rng)].scaled(S("q", c) + Scalar(1));
        ExtendedCovector b = frame[pick(rng)].scaled(S("p", c));
        ExtendedCovector cc = frame[pick(rng)];
        ExtendedCovector lhs = jet_bracket(j, a, jet_bracket(j, b, cc));
        ExtendedCovector mid = jet_bracket(j, jet_bracket(j, a, b), cc);
        ExtendedCovector rhs = jet_bracket(j, b, jet_bracket(j, a, cc));
        CHECK((lhs - mid - rhs).is_zero());
    }
}

TEST_CASE("forward_dj_check") {
    Chart c2 = r2();
    DJStructure g2 = graph_of_jacobi(f2());
    SmoothMap id = SmoothMap::make(c2, c2, {S("q", c2), S("p", c2)});
    CHECK(forward_dj_check(id, g2, g2, grid2()));

    // pr1 pushes the symplectic graph to the zero Jacobi graph on the line
    Chart line = Chart::make("R1", {"q"});
    SmoothMap pr1 = SmoothMap::projection(c2, line, {0});
    JacobiStructure zero_line = JacobiStructure::make(Tensor::zero(line, TKind::MultiVector, 2),
                                                      Tensor::zero(line, TKind::MultiVector, 1));
    CHECK(forward_dj_check(pr1, g2, graph_of_jacobi(zero_line), grid2()));

    // but not to the graph of (0, d/dq), whose fibers differ
    JacobiStructure ej = JacobiStructure::make(Tensor::zero(line, TKind::MultiVector, 2),
                                               Tensor::basis_vector(line, 0));
    CHECK(verify_jacobi(ej).pass);
    CHECK_FALSE(forward_dj_check(pr1, g2, graph_of_jacobi(ej), grid2()));

    // non-submersion sample is an error
    SmoothMap sq = SmoothMap::make(line, line, {S("q^2", line)});
    DJStructure gl = graph_of_jacobi(zero_line);
    Point origin{{line.coords[0], Rat(0)}};
    CHECK_THROWS_AS(forward_dj_check(sq, gl, gl, {origin}), Error);
}

TEST_CASE("self-bracket covector parts pair to zero against the kernel") {
    // for a verified frame with nontrivial kernel, the d~-exact covector
    // part of [s,s] is killed by the kernel directions
    Chart c = r3();
    DJStructure l = graph_of_precontact(Tensor::basis_form(c, 2));
    REQUIRE(verify_dj(l, grid3()).pass());
    for (const auto& pt : {pt3(0, 0, 0), pt3(1, -1, 2)}) {
        auto kernel = kernel_at(l, pt);
        REQUIRE_FALSE(kernel.empty());
        for (const auto& s : l.frame) {
            ExtendedSection ss = dorfman(s, s);
            for (const auto& [x, f] : kernel) {
                Scalar acc = ss.c.g.value_at(pt) * Scalar(f);
                for (int i = 0; i < c.dim(); ++i)
                    acc = acc + ss.c.alpha.comp({i}).value_at(pt) * Scalar(x[static_cast<std::size_t>(i)]);
                CHECK(acc.is_zero());
            }
        }
    }
}
