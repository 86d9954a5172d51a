#include "jkit/gencontact.hpp"

namespace jkit {

E1Endomorphism E1Endomorphism::make(const Chart& c, Mat m) {
    int d = 2 * (c.dim() + 1);
    if (m.rows != d || m.cols != d) throw Error("endomorphism must be 2(n+1) square");
    return E1Endomorphism{c, std::move(m)};
}

E1Endomorphism E1Endomorphism::identity(const Chart& c) {
    return E1Endomorphism{c, Mat::identity(2 * (c.dim() + 1))};
}

Mat E1Endomorphism::block(int r, int c) const {
    int h = m.rows / 2;
    Mat out(h, h);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) out.at(i, j) = m.at(r * h + i, c * h + j);
    return out;
}

namespace {

std::vector<Scalar> section_column(const ExtendedSection& s) {
    const Chart& c = s.v.x.chart;
    int n = c.dim();
    std::vector<Scalar> col(2 * static_cast<std::size_t>(n + 1));
    for (int i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = s.v.x.comp({i});
    col[static_cast<std::size_t>(n)] = s.v.f;
    for (int i = 0; i < n; ++i) col[static_cast<std::size_t>(n + 1 + i)] = s.c.alpha.comp({i});
    col[static_cast<std::size_t>(2 * n + 1)] = s.c.g;
    return col;
}

ExtendedSection column_to_section(const Chart& c, const std::vector<Scalar>& col) {
    int n = c.dim();
    Tensor x = Tensor::zero(c, TKind::MultiVector, 1);
    Tensor a = Tensor::zero(c, TKind::Form, 1);
    for (int i = 0; i < n; ++i) {
        x.add({i}, col[static_cast<std::size_t>(i)]);
        a.add({i}, col[static_cast<std::size_t>(n + 1 + i)]);
    }
    return ExtendedSection::make(
        ExtendedVector::make(std::move(x), col[static_cast<std::size_t>(n)]),
        ExtendedCovector::make(std::move(a), col[static_cast<std::size_t>(2 * n + 1)]));
}

std::vector<ExtendedSection> e1_frame(const Chart& c) {
    int n = c.dim();
    std::vector<ExtendedSection> frame;
    for (int i = 0; i < n; ++i)
        frame.push_back(ExtendedSection::make(
            ExtendedVector::make(Tensor::basis_vector(c, i), Scalar()), ExtendedCovector::zero(c)));
    frame.push_back(ExtendedSection::make(
        ExtendedVector::make(Tensor::zero(c, TKind::MultiVector, 1), Scalar(1)),
        ExtendedCovector::zero(c)));
    for (int i = 0; i < n; ++i)
        frame.push_back(ExtendedSection::make(
            ExtendedVector::zero(c), ExtendedCovector::make(Tensor::basis_form(c, i), Scalar())));
    frame.push_back(ExtendedSection::make(
        ExtendedVector::zero(c),
        ExtendedCovector::make(Tensor::zero(c, TKind::Form, 1), Scalar(1))));
    return frame;
}

}  // namespace

ExtendedSection E1Endomorphism::apply(const ExtendedSection& s) const {
    auto col = section_column(s);
    std::vector<Scalar> out(col.size());
    for (int i = 0; i < m.rows; ++i) {
        Scalar acc;
        for (int j = 0; j < m.cols; ++j) {
            if (m.at(i, j).is_zero()) continue;
            acc = acc + m.at(i, j) * col[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
    return column_to_section(chart, out);
}

E1Endomorphism from_contact(const ContactForm& eta) {
    const Chart& c = eta.chart;
    int n = c.dim();
    JacobiStructure j = contact_to_jacobi(eta);
    Mat s = sharp_map(j).m;
    Mat flat = db_b_tilde(eta.eta).m;  // (d eta, eta)~
    Mat m(2 * (n + 1), 2 * (n + 1));
    for (int i = 0; i < n + 1; ++i)
        for (int k = 0; k < n + 1; ++k) {
            m.at(i, n + 1 + k) = s.at(i, k);
            m.at(n + 1 + i, k) = flat.at(i, k);
        }
    return E1Endomorphism::make(c, std::move(m));
}

std::string square_class_str(SquareClass s) {
    switch (s) {
        case SquareClass::PlusId: return "PLUS_ID";
        case SquareClass::MinusId: return "MINUS_ID";
        case SquareClass::Neither: return "NEITHER";
    }
    return "?";
}

GcAxiomReport check_axioms(const E1Endomorphism& i) {
    GcAxiomReport rep;
    int d = i.m.rows;
    Mat sq = i.m * i.m;
    if ((sq - Mat::identity(d)).is_zero())
        rep.square = SquareClass::PlusId;
    else if ((sq + Mat::identity(d)).is_zero())
        rep.square = SquareClass::MinusId;
    else
        rep.square = SquareClass::Neither;

    // adjoint for the pairing Gram G = 1/2 (0 Id; Id 0): I* = G^{-1} I^T G
    int h = d / 2;
    Mat swap(d, d);
    for (int r = 0; r < h; ++r) {
        swap.at(r, h + r) = Scalar(1);
        swap.at(h + r, r) = Scalar(1);
    }
    Mat adj = swap * i.m.transpose() * swap;
    rep.adjoint_ok = (adj + i.m).is_zero();

    auto frame = e1_frame(i.chart);
    rep.torsion_zero = true;
    std::vector<ExtendedSection> mapped;
    for (const auto& e : frame) mapped.push_back(i.apply(e));
    for (std::size_t a = 0; a < frame.size() && rep.torsion_zero; ++a)
        for (std::size_t b = 0; b < frame.size(); ++b) {
            ExtendedSection n1 = dorfman(mapped[a], mapped[b]);
            ExtendedSection n2 = i.apply(dorfman(mapped[a], frame[b]));
            ExtendedSection n3 = i.apply(dorfman(frame[a], mapped[b]));
            ExtendedSection n4 = i.apply(i.apply(dorfman(frame[a], frame[b])));
            ExtendedSection torsion =
                n1 + n2.scaled(Scalar(-1)) + n3.scaled(Scalar(-1)) + n4;
            if (!torsion.is_zero()) {
                rep.torsion_zero = false;
                break;
            }
        }
    return rep;
}

Mat exp_b_matrix(const Tensor& b) {
    const Chart& c = b.chart;
    int n = c.dim();
    Mat bt = db_b_tilde(b).m;
    Mat m = Mat::identity(2 * (n + 1));
    for (int i = 0; i < n + 1; ++i)
        for (int k = 0; k < n + 1; ++k) m.at(n + 1 + i, k) = bt.at(i, k);
    return m;
}

E1Endomorphism bfield_transform(const E1Endomorphism& i, const Tensor& b) {
    Mat e = exp_b_matrix(b);
    Mat einv = exp_b_matrix(-b);
    if (!(e * einv - Mat::identity(i.m.rows)).is_zero())
        throw Error("exp(B) inversion failed");
    return E1Endomorphism::make(i.chart, e * i.m * einv);
}

bool is_contact_type(const E1Endomorphism& i) {
    if (!i.block(0, 0).is_zero()) return false;
    if (!i.block(1, 1).is_zero()) return false;
    Mat s = i.block(0, 1);
    return (s + s.transpose()).is_zero();
}

}  // namespace jkit
