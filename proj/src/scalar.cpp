#include "jkit/scalar.hpp"

#include <algorithm>
#include <sstream>

namespace jkit {

VarTable& VarTable::instance() {
    static VarTable table;
    return table;
}

std::uint32_t VarTable::intern(const std::string& name) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(names_.size());
    names_.push_back(name);
    ids_.emplace(name, id);
    return id;
}

const std::string& VarTable::name(std::uint32_t id) const {
    std::lock_guard<std::mutex> lock(mu_);
    return names_.at(id);
}

Var Var::of(const std::string& name) { return Var{VarTable::instance().intern(name)}; }

const std::string& Var::name() const { return VarTable::instance().name(id); }

std::string rat_str(const Rat& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

std::string point_str(const Point& p) {
    std::string out = "{";
    bool first = true;
    for (const auto& [v, r] : p) {
        if (!first) out += ", ";
        out += v.name() + ": " + rat_str(r);
        first = false;
    }
    return out + "}";
}

// ---------------------------------------------------------------------------
// Monomial

namespace {

template <class T>
std::vector<std::pair<Var, T>> merge_sorted(const std::vector<std::pair<Var, T>>& a,
                                            const std::vector<std::pair<Var, T>>& b, int bsign) {
    std::vector<std::pair<Var, T>> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    VarLess less;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && less(a[i].first, b[j].first))) {
            out.push_back(a[i++]);
        } else if (i == a.size() || less(b[j].first, a[i].first)) {
            out.emplace_back(b[j].first, bsign > 0 ? b[j].second : T(-b[j].second));
            ++j;
        } else {
            T c = bsign > 0 ? T(a[i].second + b[j].second) : T(a[i].second - b[j].second);
            if (c != 0) out.emplace_back(a[i].first, c);
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

Monomial Monomial::times(const Monomial& o) const {
    Monomial r;
    r.powers = merge_sorted(powers, o.powers, +1);
    r.expo = merge_sorted(expo, o.expo, +1);
    return r;
}

std::optional<Monomial> Monomial::divided_by(const Monomial& o) const {
    Monomial r;
    r.powers = merge_sorted(powers, o.powers, -1);
    for (const auto& [v, e] : r.powers)
        if (e < 0) return std::nullopt;
    r.expo = merge_sorted(expo, o.expo, -1);
    return r;
}

namespace {

template <class T>
int lex_compare(const std::vector<std::pair<Var, T>>& a, const std::vector<std::pair<Var, T>>& b) {
    std::size_t i = 0, j = 0;
    VarLess less;
    while (i < a.size() || j < b.size()) {
        if (i == a.size()) {
            // a has exponent 0 on b's variable
            return b[j].second > 0 ? -1 : 1;
        }
        if (j == b.size()) {
            return a[i].second > 0 ? 1 : -1;
        }
        if (less(a[i].first, b[j].first)) {
            return a[i].second > 0 ? 1 : -1;
        }
        if (less(b[j].first, a[i].first)) {
            return b[j].second > 0 ? -1 : 1;
        }
        if (a[i].second != b[j].second) return a[i].second > b[j].second ? 1 : -1;
        ++i;
        ++j;
    }
    return 0;
}

}  // namespace

int Monomial::compare(const Monomial& a, const Monomial& b) {
    int c = lex_compare(a.powers, b.powers);
    if (c != 0) return c;
    return lex_compare(a.expo, b.expo);
}

// ---------------------------------------------------------------------------
// Poly

Poly::Poly(const Rat& c) {
    if (c != 0) terms.emplace(Monomial{}, c);
}

Poly Poly::var(Var v) {
    Poly p;
    Monomial m;
    m.powers.emplace_back(v, 1);
    p.terms.emplace(std::move(m), Rat(1));
    return p;
}

Poly Poly::monomial(const Monomial& m, const Rat& c) {
    Poly p;
    if (c != 0) p.terms.emplace(m, c);
    return p;
}

bool Poly::is_constant() const {
    return terms.empty() || (terms.size() == 1 && terms.begin()->first.is_one());
}

bool Poly::is_unit_monomial() const {
    return terms.size() == 1 && !terms.begin()->first.has_powers();
}

void Poly::add_term(const Monomial& m, const Rat& c) {
    if (c == 0) return;
    auto it = terms.find(m);
    if (it == terms.end()) {
        terms.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) terms.erase(it);
    }
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    for (const auto& [m, c] : o.terms) r.add_term(m, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r = *this;
    for (const auto& [m, c] : o.terms) r.add_term(m, -c);
    return r;
}

Poly Poly::operator-() const {
    Poly r;
    for (const auto& [m, c] : terms) r.terms.emplace(m, -c);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    Poly r;
    for (const auto& [m1, c1] : terms)
        for (const auto& [m2, c2] : o.terms) r.add_term(m1.times(m2), c1 * c2);
    return r;
}

Poly Poly::times_monomial(const Monomial& m, const Rat& c) const {
    Poly r;
    if (c == 0) return r;
    for (const auto& [m1, c1] : terms) r.terms.emplace(m1.times(m), c1 * c);
    return r;
}

Poly Poly::shift_expo(const std::vector<std::pair<Var, Rat>>& l) const {
    if (l.empty()) return *this;
    Monomial shift;
    for (const auto& [v, c] : l) shift.expo.emplace_back(v, -c);
    return times_monomial(shift, Rat(1));
}

Poly Poly::derivative(Var v) const {
    Poly r;
    for (const auto& [m, c] : terms) {
        // power rule
        for (std::size_t k = 0; k < m.powers.size(); ++k) {
            if (m.powers[k].first == v) {
                Monomial d = m;
                int e = d.powers[k].second;
                if (e == 1)
                    d.powers.erase(d.powers.begin() + static_cast<long>(k));
                else
                    d.powers[k].second = e - 1;
                r.add_term(d, c * e);
            }
        }
        // exponential rule: d/dv exp(l) = l_v exp(l)
        for (const auto& [ev, ec] : m.expo)
            if (ev == v) r.add_term(m, c * ec);
    }
    return r;
}

const Monomial& Poly::leading_monomial() const { return terms.rbegin()->first; }
const Rat& Poly::leading_coeff() const { return terms.rbegin()->second; }

std::set<Var, VarLess> Poly::variables() const {
    std::set<Var, VarLess> out;
    for (const auto& [m, c] : terms) {
        for (const auto& [v, e] : m.powers) out.insert(v);
        for (const auto& [v, e] : m.expo) out.insert(v);
    }
    return out;
}

std::optional<Poly> divide_exact(const Poly& p, const Poly& d) {
    if (d.is_zero()) return std::nullopt;
    if (p.is_zero()) return Poly();
    Poly rem = p, quot;
    const Monomial& dlead = d.leading_monomial();
    const Rat& dc = d.leading_coeff();
    // exact quotients are bounded below by trail(p)/trail(d); without this
    // bound a non-divisor with exponential parts would expand forever
    auto bound = p.terms.begin()->first.divided_by(d.terms.begin()->first);
    if (!bound) return std::nullopt;
    while (!rem.is_zero()) {
        auto q = rem.leading_monomial().divided_by(dlead);
        if (!q) return std::nullopt;
        if (Monomial::compare(*q, *bound) < 0) return std::nullopt;
        Rat qc = rem.leading_coeff() / dc;
        quot.add_term(*q, qc);
        rem = rem - d.times_monomial(*q, qc);
    }
    return quot;
}

// ---------------------------------------------------------------------------
// Scalar

Scalar Scalar::var(Var v) { return fraction(Poly::var(v), Poly(Rat(1))); }

Scalar Scalar::exp_linform(const std::vector<std::pair<Var, Rat>>& l) {
    Monomial m;
    for (const auto& [v, c] : l)
        if (c != 0) m.expo.emplace_back(v, c);
    std::sort(m.expo.begin(), m.expo.end(),
              [](const auto& a, const auto& b) { return VarLess{}(a.first, b.first); });
    return fraction(Poly::monomial(m, Rat(1)), Poly(Rat(1)));
}

Scalar Scalar::fraction(Poly num, Poly den) {
    if (den.is_zero()) throw Error("division by zero scalar");
    Scalar s;
    s.num_ = std::move(num);
    s.den_ = std::move(den);
    s.normalize();
    return s;
}

void Scalar::normalize() {
    if (num_.is_zero()) {
        den_ = Poly(Rat(1));
        return;
    }
    if (!den_.is_constant() || !num_.is_constant()) {
        Poly g = poly_gcd(num_, den_);
        if (!g.is_constant() || !g.terms.begin()->first.is_one() ||
            g.terms.begin()->second != 1) {
            auto qn = divide_exact(num_, g);
            auto qd = divide_exact(den_, g);
            if (qn && qd) {
                num_ = std::move(*qn);
                den_ = std::move(*qd);
            }
        }
    }
    // Denominator leading term: coefficient 1, exponential part 0.
    const Monomial& lead = den_.leading_monomial();
    if (!lead.expo.empty()) {
        num_ = num_.shift_expo(lead.expo);
        den_ = den_.shift_expo(lead.expo);
    }
    Rat lc = den_.leading_coeff();
    if (lc != 1) {
        Rat inv = 1 / lc;
        Poly n2, d2;
        for (const auto& [m, c] : num_.terms) n2.terms.emplace(m, c * inv);
        for (const auto& [m, c] : den_.terms) d2.terms.emplace(m, c * inv);
        num_ = std::move(n2);
        den_ = std::move(d2);
    }
}

bool Scalar::is_one() const {
    return den_.is_constant() && num_.is_constant() && !num_.is_zero() &&
           den_.terms.begin()->second == num_.terms.begin()->second && den_.terms.begin()->first.is_one() &&
           num_.terms.begin()->first.is_one();
}

bool Scalar::is_unit() const {
    return num_.is_unit_monomial() && den_.is_constant() && !den_.is_zero();
}

std::optional<Rat> Scalar::as_rational() const {
    if (num_.is_zero()) return Rat(0);
    if (num_.is_constant() && den_.is_constant())
        return num_.terms.begin()->second / den_.terms.begin()->second;
    return std::nullopt;
}

Scalar Scalar::operator+(const Scalar& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (den_ == o.den_) return fraction(num_ + o.num_, den_);
    return fraction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Scalar Scalar::operator-(const Scalar& o) const {
    if (o.is_zero()) return *this;
    if (den_ == o.den_) return fraction(num_ - o.num_, den_);
    return fraction(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

Scalar Scalar::operator*(const Scalar& o) const {
    if (is_zero() || o.is_zero()) return Scalar();
    return fraction(num_ * o.num_, den_ * o.den_);
}

Scalar Scalar::operator/(const Scalar& o) const {
    if (o.is_zero()) throw Error("division by zero scalar");
    if (is_zero()) return Scalar();
    return fraction(num_ * o.den_, den_ * o.num_);
}

Scalar Scalar::operator-() const {
    Scalar r = *this;
    r.num_ = -r.num_;
    return r;
}

Scalar Scalar::pow(int e) const {
    if (e == 0) return Scalar(1);
    Scalar base = e > 0 ? *this : Scalar(1) / *this;
    int n = e > 0 ? e : -e;
    Scalar r(1);
    for (int i = 0; i < n; ++i) r = r * base;
    return r;
}

bool Scalar::operator==(const Scalar& o) const { return num_ == o.num_ && den_ == o.den_; }

Scalar operator*(const Rat& c, const Scalar& s) { return Scalar(c) * s; }

Scalar Scalar::derivative(Var v) const {
    if (den_.is_constant()) {
        return fraction(num_.derivative(v), den_);
    }
    Poly n = num_.derivative(v) * den_ - num_ * den_.derivative(v);
    return fraction(std::move(n), den_ * den_);
}

namespace {

Scalar subst_poly(const Poly& p, const std::map<Var, Scalar, VarLess>& assign) {
    Scalar acc;
    for (const auto& [m, c] : p.terms) {
        Scalar term{c};
        for (const auto& [v, e] : m.powers) {
            auto it = assign.find(v);
            if (it == assign.end()) throw EvalError("unassigned variable " + v.name());
            term = term * it->second.pow(e);
        }
        if (!m.expo.empty()) {
            // exp(sum c_v v) -> exp(sum c_v phi_v); the substituted argument
            // must again be a linear form with zero constant term.
            std::map<Var, Rat, VarLess> lin;
            Rat constant(0);
            for (const auto& [v, cv] : m.expo) {
                auto it = assign.find(v);
                if (it == assign.end()) throw EvalError("unassigned variable " + v.name());
                const Scalar& phi = it->second;
                if (!phi.den().is_constant() || phi.den().leading_coeff() != 1 ||
                    !phi.den().leading_monomial().is_one())
                    throw EvalError("exp argument substitutes to a non-polynomial");
                for (const auto& [pm, pc] : phi.num().terms) {
                    if (pm.has_expo()) throw EvalError("exp argument substitutes to a non-linear expression");
                    if (pm.is_one()) {
                        constant += cv * pc;
                    } else if (pm.powers.size() == 1 && pm.powers[0].second == 1) {
                        lin[pm.powers[0].first] += cv * pc;
                    } else {
                        throw EvalError("exp argument substitutes to a non-linear expression");
                    }
                }
            }
            if (constant != 0)
                throw EvalError("exp of a nonzero constant is not representable exactly");
            std::vector<std::pair<Var, Rat>> l(lin.begin(), lin.end());
            term = term * Scalar::exp_linform(l);
        }
        acc = acc + term;
    }
    return acc;
}

const char* kEvalVarName = "@e";

}  // namespace

Scalar Scalar::substitute(const std::map<Var, Scalar, VarLess>& assign) const {
    Scalar n = subst_poly(num_, assign);
    Scalar d = subst_poly(den_, assign);
    if (d.is_zero()) throw EvalError("denominator vanishes under substitution");
    return n / d;
}

Scalar Scalar::value_at(const Point& p) const {
    Var ev = Var::of(kEvalVarName);
    auto eval_poly = [&](const Poly& poly) {
        Poly out;
        for (const auto& [m, c] : poly.terms) {
            Rat coeff = c;
            for (const auto& [v, e] : m.powers) {
                auto it = p.find(v);
                if (it == p.end()) throw EvalError("point does not assign variable " + v.name());
                for (int k = 0; k < e; ++k) coeff *= it->second;
            }
            Rat arg(0);
            for (const auto& [v, cv] : m.expo) {
                auto it = p.find(v);
                if (it == p.end()) throw EvalError("point does not assign variable " + v.name());
                arg += cv * it->second;
            }
            Monomial m2;
            if (arg != 0) m2.expo.emplace_back(ev, arg);
            out.add_term(m2, coeff);
        }
        return out;
    };
    Poly n = eval_poly(num_);
    Poly d = eval_poly(den_);
    if (d.is_zero()) throw EvalError("denominator vanishes at " + point_str(p));
    return fraction(std::move(n), std::move(d));
}

Rat Scalar::evaluate(const Point& p) const {
    Scalar v = value_at(p);
    auto r = v.as_rational();
    if (!r)
        throw EvalError("value involves an exponential of a nonzero argument; not an exact rational");
    return *r;
}

std::set<Var, VarLess> Scalar::variables() const {
    auto out = num_.variables();
    auto dv = den_.variables();
    out.insert(dv.begin(), dv.end());
    return out;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string linform_str(const std::vector<std::pair<Var, Rat>>& l) {
    std::string out;
    bool first = true;
    for (const auto& [v, c] : l) {
        Rat a = abs(c);
        std::string part;
        if (a != 1) part = rat_str(a) + "*";
        part += v.name();
        if (first) {
            out += (c < 0 ? "-" : "") + part;
        } else {
            out += (c < 0 ? " - " : " + ") + part;
        }
        first = false;
    }
    if (out.empty()) out = "0";
    return out;
}

std::string monomial_str(const Monomial& m, const Rat& c) {
    std::vector<std::string> factors;
    Rat a = abs(c);
    if (a != 1 || (m.powers.empty() && m.expo.empty())) factors.push_back(rat_str(a));
    for (const auto& [v, e] : m.powers) {
        std::string f = v.name();
        if (e != 1) f += "^" + std::to_string(e);
        factors.push_back(f);
    }
    if (!m.expo.empty()) factors.push_back("exp(" + linform_str(m.expo) + ")");
    std::string out;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) out += "*";
        out += factors[i];
    }
    return out;
}

std::string poly_str(const Poly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    // leading terms first
    for (auto it = p.terms.rbegin(); it != p.terms.rend(); ++it) {
        const Rat& c = it->second;
        if (first) {
            out += (c < 0 ? "-" : "") + monomial_str(it->first, c);
        } else {
            out += (c < 0 ? " - " : " + ") + monomial_str(it->first, c);
        }
        first = false;
    }
    return out;
}

}  // namespace

std::string Scalar::str() const {
    if (den_.is_constant() && den_.leading_coeff() == 1 && den_.leading_monomial().is_one())
        return poly_str(num_);
    std::string n = poly_str(num_);
    if (num_.terms.size() > 1) n = "(" + n + ")";
    std::string d = poly_str(den_);
    if (den_.terms.size() > 1) d = "(" + d + ")";
    return n + "/" + d;
}

std::string vanishing_str(Vanishing v) {
    switch (v) {
        case Vanishing::Unit: return "UNIT";
        case Vanishing::Zero: return "ZERO";
        case Vanishing::NonvanishingOnSamples: return "NONVANISHING_ON_SAMPLES";
        case Vanishing::VanishesAtSample: return "VANISHES_AT_SAMPLE";
    }
    return "?";
}

ClassifyResult classify_nonvanishing(const Scalar& s, const std::vector<Point>& samples) {
    if (s.is_zero()) return {Vanishing::Zero, std::nullopt};
    if (s.is_unit()) return {Vanishing::Unit, std::nullopt};
    bool used = false;
    for (const auto& p : samples) {
        Scalar den_val;
        try {
            den_val = Scalar::fraction(s.den(), Poly(Rat(1))).value_at(p);
        } catch (const EvalError&) {
            continue;
        }
        if (den_val.is_zero()) continue;  // pole: sample cannot decide
        Scalar num_val = Scalar::fraction(s.num(), Poly(Rat(1))).value_at(p);
        used = true;
        if (num_val.is_zero()) return {Vanishing::VanishesAtSample, p};
    }
    if (!used)
        throw Inconclusive("nonvanishing classification inconclusive: no usable sample points");
    return {Vanishing::NonvanishingOnSamples, std::nullopt};
}

}  // namespace jkit
