#include <algorithm>
#include <cassert>

#include "jkit/scalar.hpp"

// Multivariate gcd over Q.  Exponential parts are handled by computing a
// Z-basis of the lattice their linear forms generate and rewriting powers of
// the basis generators as auxiliary Laurent variables; unit monomial factors
// (pure exponentials) are stripped from the result.

namespace jkit {

namespace {

using ZVec = std::vector<mpz_class>;

// Row echelon basis of the integer lattice spanned by the rows (Euclidean
// elimination; rows stay integral).
std::vector<ZVec> lattice_basis(std::vector<ZVec> rows) {
    if (rows.empty()) return {};
    const std::size_t d = rows[0].size();
    std::vector<ZVec> basis;
    std::size_t r = 0;
    for (std::size_t c = 0; c < d && r < rows.size(); ++c) {
        for (;;) {
            std::size_t best = rows.size();
            for (std::size_t i = r; i < rows.size(); ++i) {
                if (rows[i][c] == 0) continue;
                if (best == rows.size() || cmp(abs(rows[i][c]), abs(rows[best][c])) < 0) best = i;
            }
            if (best == rows.size()) break;
            std::swap(rows[r], rows[best]);
            bool leftover = false;
            for (std::size_t i = r + 1; i < rows.size(); ++i) {
                if (rows[i][c] == 0) continue;
                mpz_class q = rows[i][c] / rows[r][c];  // truncated division
                for (std::size_t k = 0; k < d; ++k) rows[i][k] -= q * rows[r][k];
                if (rows[i][c] != 0) leftover = true;
            }
            if (!leftover) {
                ++r;
                break;
            }
        }
    }
    for (std::size_t i = 0; i < r; ++i) basis.push_back(rows[i]);
    return basis;
}

// Coordinates of w in the echelon basis; exact by construction since w lies
// in the generated lattice.
std::vector<long> lattice_coords(const std::vector<ZVec>& basis, ZVec w) {
    std::vector<long> coords;
    coords.reserve(basis.size());
    for (const auto& row : basis) {
        std::size_t piv = 0;
        while (piv < row.size() && row[piv] == 0) ++piv;
        assert(piv < row.size());
        mpz_class q = w[piv] / row[piv];
        assert(w[piv] % row[piv] == 0);
        for (std::size_t k = 0; k < row.size(); ++k) w[k] -= q * row[k];
        coords.push_back(q.get_si());
    }
    for (const auto& x : w) assert(x == 0);
    return coords;
}

Monomial power_content(const Poly& p) {
    Monomial content = p.terms.begin()->first;
    content.expo.clear();
    for (const auto& [m, c] : p.terms) {
        std::vector<std::pair<Var, int>> next;
        std::size_t i = 0, j = 0;
        while (i < content.powers.size() && j < m.powers.size()) {
            if (VarLess{}(content.powers[i].first, m.powers[j].first)) {
                ++i;
            } else if (VarLess{}(m.powers[j].first, content.powers[i].first)) {
                ++j;
            } else {
                next.emplace_back(content.powers[i].first,
                                  std::min(content.powers[i].second, m.powers[j].second));
                ++i;
                ++j;
            }
        }
        content.powers = std::move(next);
        if (content.powers.empty()) break;
    }
    return content;
}

Monomial monomial_min(const Monomial& a, const Monomial& b) {
    Monomial r;
    std::size_t i = 0, j = 0;
    while (i < a.powers.size() && j < b.powers.size()) {
        if (VarLess{}(a.powers[i].first, b.powers[j].first)) {
            ++i;
        } else if (VarLess{}(b.powers[j].first, a.powers[i].first)) {
            ++j;
        } else {
            r.powers.emplace_back(a.powers[i].first, std::min(a.powers[i].second, b.powers[j].second));
            ++i;
            ++j;
        }
    }
    return r;
}

int deg_in(const Poly& p, Var v) {
    int d = 0;
    for (const auto& [m, c] : p.terms)
        for (const auto& [mv, e] : m.powers)
            if (mv == v) d = std::max(d, e);
    return d;
}

// Coefficient polynomials of p viewed as univariate in v.
std::map<int, Poly> univariate(const Poly& p, Var v) {
    std::map<int, Poly> out;
    for (const auto& [m, c] : p.terms) {
        int e = 0;
        Monomial rest = m;
        for (std::size_t k = 0; k < rest.powers.size(); ++k) {
            if (rest.powers[k].first == v) {
                e = rest.powers[k].second;
                rest.powers.erase(rest.powers.begin() + static_cast<long>(k));
                break;
            }
        }
        out[e].add_term(rest, c);
    }
    return out;
}

Poly times_var_pow(const Poly& p, Var v, int e) {
    if (e == 0) return p;
    Monomial m;
    m.powers.emplace_back(v, e);
    return p.times_monomial(m, Rat(1));
}

Poly gcd_core(const Poly& a, const Poly& b);

Poly coefficient_gcd(const std::map<int, Poly>& coeffs) {
    Poly g;
    for (const auto& [e, c] : coeffs) {
        g = g.is_zero() ? c : gcd_core(g, c);
        if (g.is_constant()) break;
    }
    return g;
}

// Primitive pseudo-remainder sequence gcd; power variables only.
Poly gcd_core(const Poly& a, const Poly& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.is_constant() || b.is_constant()) return Poly(Rat(1));

    Monomial ca = power_content(a), cb = power_content(b);
    Poly a1 = *divide_exact(a, Poly::monomial(ca, Rat(1)));
    Poly b1 = *divide_exact(b, Poly::monomial(cb, Rat(1)));
    Poly mono = Poly::monomial(monomial_min(ca, cb), Rat(1));
    if (a1.is_constant() || b1.is_constant()) return mono;

    // main variable: present in both, smallest combined degree
    auto va = a1.variables();
    auto vb = b1.variables();
    std::optional<Var> main;
    int best = 0;
    for (Var v : va) {
        if (!vb.count(v)) continue;
        int d = deg_in(a1, v) + deg_in(b1, v);
        if (!main || d < best) {
            main = v;
            best = d;
        }
    }
    if (!main) return mono;  // no shared variable: only unit common factors
    Var v = *main;

    auto ua = univariate(a1, v);
    auto ub = univariate(b1, v);
    Poly conta = coefficient_gcd(ua);
    Poly contb = coefficient_gcd(ub);
    Poly c = gcd_core(conta, contb);
    Poly P = *divide_exact(a1, conta);
    Poly Q = *divide_exact(b1, contb);
    if (deg_in(P, v) < deg_in(Q, v)) std::swap(P, Q);

    for (;;) {
        // pseudo-remainder of P by Q in v
        Poly R = P;
        int dq = deg_in(Q, v);
        auto uq = univariate(Q, v);
        const Poly& lq = uq.rbegin()->second;
        while (!R.is_zero()) {
            int dr = deg_in(R, v);
            if (dr < dq) break;
            auto ur = univariate(R, v);
            const Poly& lr = ur.rbegin()->second;
            R = R * lq - times_var_pow(Q * lr, v, dr - dq);
        }
        if (R.is_zero()) break;
        P = Q;
        Poly contr = coefficient_gcd(univariate(R, v));
        Q = *divide_exact(R, contr);
    }
    return mono * c * Q;
}

}  // namespace

Poly poly_gcd(const Poly& a, const Poly& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;

    // Fast paths for monomials.
    if (a.terms.size() == 1)
        return Poly::monomial(monomial_min(a.terms.begin()->first, power_content(b)), Rat(1));
    if (b.terms.size() == 1)
        return Poly::monomial(monomial_min(b.terms.begin()->first, power_content(a)), Rat(1));

    bool has_expo = false;
    for (const auto& [m, c] : a.terms) has_expo |= m.has_expo();
    for (const auto& [m, c] : b.terms) has_expo |= m.has_expo();

    Poly g;
    std::vector<ZVec> basis;
    std::vector<Var> expo_vars;
    mpz_class denom_lcm(1);
    if (!has_expo) {
        g = gcd_core(a, b);
    } else {
        // Collect the exponential variable support and all linear forms.
        std::set<Var, VarLess> evset;
        for (const Poly* p : {&a, &b})
            for (const auto& [m, c] : p->terms)
                for (const auto& [v, r] : m.expo) evset.insert(v);
        expo_vars.assign(evset.begin(), evset.end());
        auto linform_vec = [&](const Monomial& m) {
            std::vector<Rat> w(expo_vars.size(), Rat(0));
            for (const auto& [v, r] : m.expo) {
                auto it = std::lower_bound(expo_vars.begin(), expo_vars.end(), v, VarLess{});
                w[static_cast<std::size_t>(it - expo_vars.begin())] = r;
            }
            return w;
        };
        std::vector<std::vector<Rat>> forms;
        for (const Poly* p : {&a, &b})
            for (const auto& [m, c] : p->terms) forms.push_back(linform_vec(m));
        for (const auto& f : forms)
            for (const auto& r : f) denom_lcm = lcm(denom_lcm, r.get_den());
        std::vector<ZVec> rows;
        for (const auto& f : forms) {
            ZVec z(f.size());
            bool nz = false;
            for (std::size_t i = 0; i < f.size(); ++i) {
                Rat scaled = f[i] * Rat(denom_lcm);
                z[i] = scaled.get_num();
                nz |= (z[i] != 0);
            }
            if (nz) rows.push_back(std::move(z));
        }
        basis = lattice_basis(std::move(rows));

        // Rewrite exp parts as powers of auxiliary variables, shifted so all
        // exponents are non-negative (a unit rescaling).
        std::vector<Var> aux;
        for (std::size_t i = 0; i < basis.size(); ++i)
            aux.push_back(Var::of("@g" + std::to_string(i)));
        auto convert = [&](const Poly& p) {
            std::vector<std::pair<Monomial, std::vector<long>>> rewritten;
            std::vector<long> mins(basis.size(), 0);
            for (const auto& [m, c] : p.terms) {
                ZVec w(expo_vars.size(), 0);
                for (const auto& f : {linform_vec(m)})
                    for (std::size_t i = 0; i < f.size(); ++i) w[i] = Rat(f[i] * Rat(denom_lcm)).get_num();
                auto coords = lattice_coords(basis, w);
                for (std::size_t i = 0; i < coords.size(); ++i) mins[i] = std::min(mins[i], coords[i]);
                Monomial base = m;
                base.expo.clear();
                rewritten.emplace_back(base, coords);
            }
            Poly out;
            std::size_t idx = 0;
            for (const auto& [m, c] : p.terms) {
                Monomial mm = rewritten[idx].first;
                for (std::size_t i = 0; i < basis.size(); ++i) {
                    long e = rewritten[idx].second[i] - mins[i];
                    if (e != 0) mm = mm.times([&] {
                        Monomial u;
                        u.powers.emplace_back(aux[i], static_cast<int>(e));
                        return u;
                    }());
                }
                out.add_term(mm, c);
                ++idx;
            }
            return out;
        };
        Poly A = convert(a), B = convert(b);
        g = gcd_core(A, B);
        // Strip unit (auxiliary) monomial content and map back to exp parts.
        Monomial cg = power_content(g);
        Monomial strip;
        for (const auto& [v, e] : cg.powers)
            for (Var u : aux)
                if (v == u) strip.powers.emplace_back(v, e);
        if (!strip.powers.empty()) g = *divide_exact(g, Poly::monomial(strip, Rat(1)));
        Poly back;
        for (const auto& [m, c] : g.terms) {
            Monomial mm;
            std::vector<Rat> lin(expo_vars.size(), Rat(0));
            for (const auto& [v, e] : m.powers) {
                bool is_aux = false;
                for (std::size_t i = 0; i < aux.size(); ++i) {
                    if (v == aux[i]) {
                        for (std::size_t k = 0; k < expo_vars.size(); ++k)
                            lin[k] += Rat(basis[i][k]) / Rat(denom_lcm) * e;
                        is_aux = true;
                        break;
                    }
                }
                if (!is_aux) mm.powers.emplace_back(v, e);
            }
            for (std::size_t k = 0; k < expo_vars.size(); ++k)
                if (lin[k] != 0) mm.expo.emplace_back(expo_vars[k], lin[k]);
            back.add_term(mm, c);
        }
        g = back;
    }
    if (g.is_zero()) return Poly(Rat(1));
    // monic normalization
    Rat lc = g.leading_coeff();
    if (lc != 1) {
        Poly h;
        for (const auto& [m, c] : g.terms) h.terms.emplace(m, c / lc);
        g = h;
    }
    return g;
}

}  // namespace jkit
