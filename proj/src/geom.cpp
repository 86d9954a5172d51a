#include "jkit/geom.hpp"

#include <algorithm>

namespace jkit {

Chart Chart::make(const std::string& name, const std::vector<std::string>& coord_names) {
    Chart c;
    c.name = name;
    for (const auto& n : coord_names) {
        Var v = Var::of(n);
        if (std::find(c.coords.begin(), c.coords.end(), v) != c.coords.end())
            throw Error("chart " + name + ": duplicate coordinate " + n);
        c.coords.push_back(v);
    }
    if (c.coords.empty()) throw Error("chart " + name + ": needs at least one coordinate");
    return c;
}

int Chart::index_of(Var v) const {
    for (std::size_t i = 0; i < coords.size(); ++i)
        if (coords[i] == v) return static_cast<int>(i);
    return -1;
}

Chart Chart::extended(const std::string& var_name) const {
    std::string n = var_name;
    int suffix = 0;
    while (index_of(Var::of(n)) >= 0) n = var_name + "_" + std::to_string(++suffix);
    Chart c = *this;
    c.name = name + "x" + n;
    c.coords.push_back(Var::of(n));
    return c;
}

// ---------------------------------------------------------------------------
// Tensor

namespace {

// Sorts idx, returns permutation sign, or 0 for a repeated index.
int normalize_tuple(std::vector<int>& idx) {
    int sign = 1;
    for (std::size_t i = 1; i < idx.size(); ++i)
        for (std::size_t j = i; j > 0 && idx[j] < idx[j - 1]; --j) {
            std::swap(idx[j], idx[j - 1]);
            sign = -sign;
        }
    for (std::size_t i = 1; i < idx.size(); ++i)
        if (idx[i] == idx[i - 1]) return 0;
    return sign;
}

void check_same(const Tensor& a, const Tensor& b) {
    if (a.chart != b.chart) throw ChartMismatch("tensors live on different charts");
    if (a.kind != b.kind) throw Error("tensor kind mismatch");
}

}  // namespace

Tensor Tensor::zero(const Chart& c, TKind k, int degree) {
    Tensor t;
    t.chart = c;
    t.kind = k;
    t.degree = degree;
    return t;
}

Tensor Tensor::constant(const Chart& c, TKind k, const Scalar& s) {
    Tensor t = zero(c, k, 0);
    if (!s.is_zero()) t.comps.emplace(std::vector<int>{}, s);
    return t;
}

Tensor Tensor::basis_vector(const Chart& c, int i) {
    Tensor t = zero(c, TKind::MultiVector, 1);
    t.comps.emplace(std::vector<int>{i}, Scalar(1));
    return t;
}

Tensor Tensor::basis_form(const Chart& c, int i) {
    Tensor t = zero(c, TKind::Form, 1);
    t.comps.emplace(std::vector<int>{i}, Scalar(1));
    return t;
}

void Tensor::add(std::vector<int> idx, const Scalar& s) {
    if (s.is_zero()) return;
    int sign = normalize_tuple(idx);
    if (sign == 0) return;
    Scalar v = sign > 0 ? s : -s;
    auto it = comps.find(idx);
    if (it == comps.end()) {
        comps.emplace(std::move(idx), v);
    } else {
        it->second = it->second + v;
        if (it->second.is_zero()) comps.erase(it);
    }
}

Scalar Tensor::comp(std::vector<int> idx) const {
    int sign = normalize_tuple(idx);
    if (sign == 0) return Scalar();
    auto it = comps.find(idx);
    if (it == comps.end()) return Scalar();
    return sign > 0 ? it->second : -it->second;
}

bool Tensor::is_zero() const { return comps.empty(); }

Scalar Tensor::scalar_part() const {
    if (degree != 0) throw Error("scalar_part of a tensor of positive degree");
    auto it = comps.find({});
    return it == comps.end() ? Scalar() : it->second;
}

Tensor Tensor::operator+(const Tensor& o) const {
    check_same(*this, o);
    if (degree != o.degree) throw Error("tensor degree mismatch");
    Tensor r = *this;
    for (const auto& [idx, s] : o.comps) r.add(idx, s);
    return r;
}

Tensor Tensor::operator-(const Tensor& o) const { return *this + (-o); }

Tensor Tensor::operator-() const {
    Tensor r = *this;
    for (auto& [idx, s] : r.comps) s = -s;
    return r;
}

Tensor Tensor::scaled(const Scalar& s) const {
    Tensor r = zero(chart, kind, degree);
    if (s.is_zero()) return r;
    for (const auto& [idx, c] : comps) {
        Scalar v = c * s;
        if (!v.is_zero()) r.comps.emplace(idx, v);
    }
    return r;
}

bool Tensor::operator==(const Tensor& o) const {
    return chart == o.chart && kind == o.kind && degree == o.degree && comps == o.comps;
}

std::string Tensor::str() const {
    if (comps.empty()) return "0";
    std::string out;
    const char* base = kind == TKind::Form ? "d" : "@";
    bool first = true;
    for (const auto& [idx, s] : comps) {
        if (!first) out += " + ";
        first = false;
        out += "(" + s.str() + ")";
        for (int i : idx) {
            out += std::string("*") + base + chart.coords[static_cast<std::size_t>(i)].name();
        }
    }
    return out;
}

std::vector<std::vector<int>> increasing_tuples(int n, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > n) return out;
    std::vector<int> cur(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i;
    for (;;) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

Tensor wedge(const Tensor& a, const Tensor& b) {
    check_same(a, b);
    Tensor r = Tensor::zero(a.chart, a.kind, a.degree + b.degree);
    if (r.degree > a.chart.dim()) return r;  // graded dimension bound
    for (const auto& [i1, s1] : a.comps)
        for (const auto& [i2, s2] : b.comps) {
            std::vector<int> idx = i1;
            idx.insert(idx.end(), i2.begin(), i2.end());
            r.add(std::move(idx), s1 * s2);
        }
    return r;
}

Tensor exterior_derivative(const Tensor& form) {
    if (form.kind != TKind::Form) throw Error("exterior derivative of a non-form");
    Tensor r = Tensor::zero(form.chart, TKind::Form, form.degree + 1);
    for (const auto& [idx, s] : form.comps)
        for (int i = 0; i < form.chart.dim(); ++i) {
            Scalar ds = s.derivative(form.chart.coords[static_cast<std::size_t>(i)]);
            if (ds.is_zero()) continue;
            std::vector<int> nidx;
            nidx.reserve(idx.size() + 1);
            nidx.push_back(i);
            nidx.insert(nidx.end(), idx.begin(), idx.end());
            r.add(std::move(nidx), ds);
        }
    return r;
}

namespace {

// Left Grassmann derivative with respect to direction i.
Tensor xi_derivative(const Tensor& t, int i) {
    Tensor r = Tensor::zero(t.chart, t.kind, t.degree - 1);
    for (const auto& [idx, s] : t.comps) {
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (idx[k] != i) continue;
            std::vector<int> rest;
            rest.reserve(idx.size() - 1);
            for (std::size_t j = 0; j < idx.size(); ++j)
                if (j != k) rest.push_back(idx[j]);
            r.add(std::move(rest), (k % 2 == 0) ? s : -s);
            break;
        }
    }
    return r;
}

Tensor x_derivative(const Tensor& t, int i) {
    Tensor r = Tensor::zero(t.chart, t.kind, t.degree);
    Var v = t.chart.coords[static_cast<std::size_t>(i)];
    for (const auto& [idx, s] : t.comps) {
        Scalar ds = s.derivative(v);
        if (!ds.is_zero()) r.comps.emplace(idx, ds);
    }
    return r;
}

}  // namespace

Tensor interior_vector(const Tensor& x, const Tensor& form) {
    if (x.kind != TKind::MultiVector || x.degree != 1)
        throw Error("interior product needs a vector field");
    if (form.kind != TKind::Form) throw Error("interior product needs a form");
    if (form.chart != x.chart) throw ChartMismatch("interior product across charts");
    if (form.degree < 1) throw Error("interior product of a degree-0 form");
    Tensor r = Tensor::zero(form.chart, TKind::Form, form.degree - 1);
    for (int i = 0; i < form.chart.dim(); ++i) {
        Scalar xi = x.comp({i});
        if (xi.is_zero()) continue;
        Tensor d = xi_derivative(form, i);
        r = r + d.scaled(xi);
    }
    return r;
}

Tensor interior_covector(const Tensor& alpha, const Tensor& mv) {
    if (alpha.kind != TKind::Form || alpha.degree != 1)
        throw Error("covector contraction needs a 1-form");
    if (mv.kind != TKind::MultiVector) throw Error("covector contraction needs a multivector");
    if (mv.chart != alpha.chart) throw ChartMismatch("contraction across charts");
    if (mv.degree < 1) throw Error("contraction of a degree-0 multivector");
    Tensor r = Tensor::zero(mv.chart, TKind::MultiVector, mv.degree - 1);
    for (int i = 0; i < mv.chart.dim(); ++i) {
        Scalar ai = alpha.comp({i});
        if (ai.is_zero()) continue;
        Tensor d = xi_derivative(mv, i);
        r = r + d.scaled(ai);
    }
    return r;
}

Scalar apply_vector(const Tensor& x, const Scalar& f) {
    Scalar out;
    for (int i = 0; i < x.chart.dim(); ++i) {
        Scalar xi = x.comp({i});
        if (xi.is_zero()) continue;
        out = out + xi * f.derivative(x.chart.coords[static_cast<std::size_t>(i)]);
    }
    return out;
}

Tensor schouten(const Tensor& p, const Tensor& q) {
    check_same(p, q);
    if (p.kind != TKind::MultiVector) throw Error("Schouten bracket needs multivector fields");
    int pp = p.degree, qq = q.degree;
    Tensor r = Tensor::zero(p.chart, TKind::MultiVector, pp + qq - 1);
    bool flip1 = ((pp - 1) * qq) % 2 != 0;
    bool flip2 = (qq - 1) % 2 == 0;
    for (int i = 0; i < p.chart.dim(); ++i) {
        if (pp > 0) {
            Tensor t = wedge(xi_derivative(p, i), x_derivative(q, i));
            r = flip1 ? r - t : r + t;
        }
        if (qq > 0) {
            Tensor t = wedge(xi_derivative(q, i), x_derivative(p, i));
            r = flip2 ? r - t : r + t;
        }
    }
    return r;
}

Tensor lie_derivative(const Tensor& x, const Tensor& a) {
    if (x.kind != TKind::MultiVector || x.degree != 1)
        throw Error("Lie derivative needs a vector field");
    if (a.kind == TKind::MultiVector) return schouten(x, a);
    if (a.degree == 0)
        return Tensor::constant(a.chart, TKind::Form, apply_vector(x, a.scalar_part()));
    return interior_vector(x, exterior_derivative(a)) + exterior_derivative(interior_vector(x, a));
}

// ---------------------------------------------------------------------------
// SmoothMap

SmoothMap SmoothMap::make(const Chart& source, const Chart& target, std::vector<Scalar> comps) {
    if (static_cast<int>(comps.size()) != target.dim())
        throw Error("smooth map component count does not match the target dimension");
    SmoothMap m;
    m.source = source;
    m.target = target;
    m.comps = std::move(comps);
    return m;
}

SmoothMap SmoothMap::projection(const Chart& source, const Chart& target,
                                const std::vector<int>& source_indices) {
    std::vector<Scalar> comps;
    for (int i : source_indices)
        comps.push_back(Scalar::var(source.coords[static_cast<std::size_t>(i)]));
    return make(source, target, std::move(comps));
}

Scalar SmoothMap::pull_scalar(const Scalar& f) const {
    std::map<Var, Scalar, VarLess> assign;
    for (int j = 0; j < target.dim(); ++j)
        assign.emplace(target.coords[static_cast<std::size_t>(j)], comps[static_cast<std::size_t>(j)]);
    return f.substitute(assign);
}

Tensor SmoothMap::pullback(const Tensor& form) const {
    if (form.kind != TKind::Form) throw Error("pullback of a non-form");
    if (form.chart != target) throw ChartMismatch("pullback: form does not live on the target chart");
    Tensor r = Tensor::zero(source, TKind::Form, form.degree);
    if (form.degree == 0)
        return Tensor::constant(source, TKind::Form, pull_scalar(form.scalar_part()));
    std::vector<Tensor> dphi;
    for (int j = 0; j < target.dim(); ++j) {
        Tensor d = Tensor::zero(source, TKind::Form, 1);
        for (int i = 0; i < source.dim(); ++i)
            d.add({i}, comps[static_cast<std::size_t>(j)].derivative(
                           source.coords[static_cast<std::size_t>(i)]));
        dphi.push_back(std::move(d));
    }
    for (const auto& [idx, s] : form.comps) {
        Tensor w = Tensor::constant(source, TKind::Form, pull_scalar(s));
        for (int j : idx) w = wedge(w, dphi[static_cast<std::size_t>(j)]);
        r = r + w;
    }
    return r;
}

Mat SmoothMap::jacobian() const {
    Mat j(target.dim(), source.dim());
    for (int t = 0; t < target.dim(); ++t)
        for (int s = 0; s < source.dim(); ++s)
            j.at(t, s) =
                comps[static_cast<std::size_t>(t)].derivative(source.coords[static_cast<std::size_t>(s)]);
    return j;
}

bool SmoothMap::is_submersion_at(const Point& p) const {
    Mat j = jacobian();
    Mat jp(j.rows, j.cols);
    for (int r = 0; r < j.rows; ++r)
        for (int c = 0; c < j.cols; ++c) jp.at(r, c) = j.at(r, c).value_at(p);
    return mat_rank(jp) == target.dim();
}

bool related_check(const SmoothMap& phi, const Tensor& src, const Tensor& dst) {
    if (src.kind != TKind::MultiVector || dst.kind != TKind::MultiVector)
        throw Error("relatedness is checked for multivector fields");
    if (src.degree != dst.degree) throw Error("relatedness needs equal degrees");
    if (src.chart != phi.source || dst.chart != phi.target)
        throw ChartMismatch("relatedness: charts do not match the map");
    int k = src.degree;
    if (k == 0) return (phi.pull_scalar(dst.scalar_part()) - src.scalar_part()).is_zero();
    Mat jac = phi.jacobian();
    auto src_tuples = increasing_tuples(phi.source.dim(), k);
    for (const auto& jt : increasing_tuples(phi.target.dim(), k)) {
        Scalar lhs = phi.pull_scalar(dst.comp(jt));
        Scalar rhs;
        for (const auto& it : src_tuples) {
            Scalar sc = src.comp(it);
            if (sc.is_zero()) continue;
            Mat minor(k, k);
            for (int r = 0; r < k; ++r)
                for (int c = 0; c < k; ++c)
                    minor.at(r, c) = jac.at(jt[static_cast<std::size_t>(r)], it[static_cast<std::size_t>(c)]);
            rhs = rhs + mat_det(minor) * sc;
        }
        if (!(lhs - rhs).is_zero()) return false;
    }
    return true;
}

}  // namespace jkit
