#include "jkit/workspace.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace jkit {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

std::vector<std::string> words(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

Rat parse_rat(const std::string& text, int line) {
    try {
        Rat r(text);
        r.canonicalize();
        return r;
    } catch (const std::exception&) {
        throw UsageError("line " + std::to_string(line) + ": bad rational '" + text + "'");
    }
}

struct Decl {
    int line;
    std::string kind, name, chart, body;
};

}  // namespace

const Chart& Workspace::chart(const std::string& name) const {
    auto it = charts.find(name);
    if (it == charts.end()) throw UsageError("unknown chart " + name);
    return it->second;
}

const Tensor& Workspace::oneform(const std::string& name) const {
    auto it = oneforms.find(name);
    if (it == oneforms.end()) throw UsageError("unknown oneform " + name);
    return it->second;
}

const JacobiStructure& Workspace::jacobi(const std::string& name) const {
    auto it = jacobis.find(name);
    if (it == jacobis.end()) throw UsageError("unknown jacobi structure " + name);
    return it->second;
}

const ContactForm& Workspace::contact(const std::string& name) const {
    auto it = contacts.find(name);
    if (it == contacts.end()) throw UsageError("unknown contact structure " + name);
    return it->second;
}

const LcsData& Workspace::lcs(const std::string& name) const {
    auto it = lcss.find(name);
    if (it == lcss.end()) throw UsageError("unknown lcs structure " + name);
    return it->second;
}

const std::vector<Point>& Workspace::sample_grid(const std::string& name) const {
    auto it = samples.find(name);
    if (it == samples.end()) throw UsageError("unknown sample grid " + name);
    return it->second;
}

Workspace parse_workspace(const std::string& text, bool lazy) {
    Workspace ws;
    std::set<std::string> names;
    auto declare = [&](const std::string& kind, const std::string& name, int line) {
        std::string key = kind + ":" + name;
        if (!names.insert(key).second)
            throw UsageError("line " + std::to_string(line) + ": duplicate " + kind + " " + name);
    };
    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    std::vector<Decl> decls;
    while (std::getline(is, raw)) {
        ++lineno;
        std::string line = raw;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw UsageError("line " + std::to_string(lineno) + ": expected ':'");
        auto head = words(line.substr(0, colon));
        std::string body = trim(line.substr(colon + 1));
        Decl d;
        d.line = lineno;
        if (head.size() == 2) {
            d.kind = head[0];
            d.name = head[1];
        } else if (head.size() == 4 && head[2] == "on") {
            d.kind = head[0];
            d.name = head[1];
            d.chart = head[3];
        } else {
            throw UsageError("line " + std::to_string(lineno) + ": bad declaration header");
        }
        d.body = body;
        decls.push_back(std::move(d));
    }

    auto parse_expr = [&](const std::string& text2, const Chart& c, int line) {
        try {
            return parse_scalar(text2, c.coords);
        } catch (const ParseError& e) {
            throw UsageError("line " + std::to_string(line) + ": " + e.what());
        }
    };

    for (const Decl& d : decls) {
        declare(d.kind, d.name, d.line);
        if (d.kind == "chart") {
            auto coords = words(d.body);
            if (coords.empty())
                throw UsageError("line " + std::to_string(d.line) + ": chart needs coordinates");
            try {
                ws.charts.emplace(d.name, Chart::make(d.name, coords));
            } catch (const Error& e) {
                throw UsageError("line " + std::to_string(d.line) + ": " + e.what());
            }
        } else if (d.kind == "oneform" || d.kind == "twoform") {
            const Chart& c = [&]() -> const Chart& {
                auto it = ws.charts.find(d.chart);
                if (it == ws.charts.end())
                    throw UsageError("line " + std::to_string(d.line) + ": unknown chart " + d.chart);
                return it->second;
            }();
            Tensor t = Tensor::zero(c, TKind::Form, d.kind == "oneform" ? 1 : 2);
            for (const std::string& item : split(d.body, ';')) {
                if (item.empty()) continue;
                auto eq = item.find('=');
                if (eq == std::string::npos)
                    throw UsageError("line " + std::to_string(d.line) + ": expected '='");
                std::string lhs = trim(item.substr(0, eq));
                Scalar value = parse_expr(trim(item.substr(eq + 1)), c, d.line);
                if (d.kind == "oneform") {
                    int i = c.index_of(Var::of(lhs));
                    if (i < 0)
                        throw UsageError("line " + std::to_string(d.line) + ": unknown coordinate " + lhs);
                    t.add({i}, value);
                } else {
                    auto pair = split(lhs, '^');
                    if (pair.size() != 2)
                        throw UsageError("line " + std::to_string(d.line) + ": expected v^w component");
                    int i = c.index_of(Var::of(pair[0])), j = c.index_of(Var::of(pair[1]));
                    if (i < 0 || j < 0 || i >= j)
                        throw UsageError("line " + std::to_string(d.line) +
                                         ": components use increasing coordinate pairs");
                    t.add({i, j}, value);
                }
            }
            (d.kind == "oneform" ? ws.oneforms : ws.twoforms).emplace(d.name, std::move(t));
        } else if (d.kind == "jacobi") {
            const Chart& c = [&]() -> const Chart& {
                auto it = ws.charts.find(d.chart);
                if (it == ws.charts.end())
                    throw UsageError("line " + std::to_string(d.line) + ": unknown chart " + d.chart);
                return it->second;
            }();
            Tensor pi = Tensor::zero(c, TKind::MultiVector, 2);
            Tensor e = Tensor::zero(c, TKind::MultiVector, 1);
            for (const std::string& item : split(d.body, ';')) {
                if (item.empty()) continue;
                auto eq = item.find('=');
                if (eq == std::string::npos)
                    throw UsageError("line " + std::to_string(d.line) + ": expected '='");
                auto lhs = words(trim(item.substr(0, eq)));
                Scalar value = parse_expr(trim(item.substr(eq + 1)), c, d.line);
                if (lhs.size() != 2)
                    throw UsageError("line " + std::to_string(d.line) + ": expected 'pi v^w' or 'E v'");
                if (lhs[0] == "pi") {
                    auto pair = split(lhs[1], '^');
                    if (pair.size() != 2)
                        throw UsageError("line " + std::to_string(d.line) + ": expected v^w component");
                    int i = c.index_of(Var::of(pair[0])), j = c.index_of(Var::of(pair[1]));
                    if (i < 0 || j < 0 || i >= j)
                        throw UsageError("line " + std::to_string(d.line) +
                                         ": components use increasing coordinate pairs");
                    pi.add({i, j}, value);
                } else if (lhs[0] == "E") {
                    int i = c.index_of(Var::of(lhs[1]));
                    if (i < 0)
                        throw UsageError("line " + std::to_string(d.line) + ": unknown coordinate " + lhs[1]);
                    e.add({i}, value);
                } else {
                    throw UsageError("line " + std::to_string(d.line) + ": expected 'pi' or 'E'");
                }
            }
            JacobiStructure j = JacobiStructure::make(std::move(pi), std::move(e));
            if (!lazy) {
                JacobiReport rep = verify_jacobi(j);
                if (!rep.pass)
                    throw UsageError("line " + std::to_string(d.line) + ": jacobi " + d.name +
                                     " fails its defining identities; residues [pi,pi]-2E^pi = " +
                                     rep.c1.str() + " and [E,pi] = " + rep.c2.str());
            }
            ws.jacobis.emplace(d.name, std::move(j));
        } else if (d.kind == "contact") {
            const Chart& c = [&]() -> const Chart& {
                auto it = ws.charts.find(d.chart);
                if (it == ws.charts.end())
                    throw UsageError("line " + std::to_string(d.line) + ": unknown chart " + d.chart);
                return it->second;
            }();
            auto it = ws.oneforms.find(trim(d.body));
            if (it == ws.oneforms.end())
                throw UsageError("line " + std::to_string(d.line) + ": unknown oneform " + trim(d.body));
            if (it->second.chart != c)
                throw UsageError("line " + std::to_string(d.line) + ": oneform lives on another chart");
            if (!lazy) {
                try {
                    Scalar top = contact_top_coefficient(it->second);
                    if (top.is_zero())
                        throw UsageError("line " + std::to_string(d.line) + ": contact " + d.name +
                                         " is degenerate: top coefficient is identically zero");
                } catch (const Error& e) {
                    if (dynamic_cast<const UsageError*>(&e)) throw;
                    throw UsageError("line " + std::to_string(d.line) + ": " + e.what());
                }
            }
            ws.contacts.emplace(d.name, ContactForm{c, it->second});
        } else if (d.kind == "lcs") {
            const Chart& c = [&]() -> const Chart& {
                auto it = ws.charts.find(d.chart);
                if (it == ws.charts.end())
                    throw UsageError("line " + std::to_string(d.line) + ": unknown chart " + d.chart);
                return it->second;
            }();
            std::string omega_name, theta_name;
            for (const std::string& item : split(d.body, ';')) {
                auto eq = item.find('=');
                if (eq == std::string::npos)
                    throw UsageError("line " + std::to_string(d.line) + ": expected '='");
                std::string key = trim(item.substr(0, eq)), val = trim(item.substr(eq + 1));
                if (key == "omega")
                    omega_name = val;
                else if (key == "theta")
                    theta_name = val;
                else
                    throw UsageError("line " + std::to_string(d.line) + ": expected omega/theta");
            }
            auto io = ws.twoforms.find(omega_name);
            auto ith = ws.oneforms.find(theta_name);
            if (io == ws.twoforms.end())
                throw UsageError("line " + std::to_string(d.line) + ": unknown twoform " + omega_name);
            if (ith == ws.oneforms.end())
                throw UsageError("line " + std::to_string(d.line) + ": unknown oneform " + theta_name);
            LcsData l{c, io->second, ith->second};
            if (!lazy) {
                if (!exterior_derivative(l.theta).is_zero())
                    throw UsageError("line " + std::to_string(d.line) + ": lcs Lee form is not closed");
                if (!(exterior_derivative(l.omega) - wedge(l.theta, l.omega)).is_zero())
                    throw UsageError("line " + std::to_string(d.line) +
                                     ": lcs identity d omega = theta ^ omega fails");
                if (lcs_top_coefficient(l.omega).is_zero())
                    throw UsageError("line " + std::to_string(d.line) + ": lcs 2-form is degenerate");
            }
            ws.lcss.emplace(d.name, std::move(l));
        } else if (d.kind == "samples") {
            const Chart& c = [&]() -> const Chart& {
                auto it = ws.charts.find(d.chart);
                if (it == ws.charts.end())
                    throw UsageError("line " + std::to_string(d.line) + ": unknown chart " + d.chart);
                return it->second;
            }();
            std::vector<Point> pts;
            for (const std::string& item : split(d.body, ';')) {
                if (item.empty()) continue;
                std::string inner = item;
                if (inner.front() != '(' || inner.back() != ')')
                    throw UsageError("line " + std::to_string(d.line) + ": sample points use (a, b, ...)");
                inner = inner.substr(1, inner.size() - 2);
                auto parts = split(inner, ',');
                if (static_cast<int>(parts.size()) != c.dim())
                    throw UsageError("line " + std::to_string(d.line) +
                                     ": sample arity does not match the chart dimension");
                Point p;
                for (int i = 0; i < c.dim(); ++i)
                    p.emplace(c.coords[static_cast<std::size_t>(i)], parse_rat(parts[static_cast<std::size_t>(i)], d.line));
                pts.push_back(std::move(p));
            }
            ws.samples.emplace(d.name, std::move(pts));
        } else {
            throw UsageError("line " + std::to_string(d.line) + ": unknown declaration '" + d.kind + "'");
        }
    }
    return ws;
}

Workspace load_workspace(const std::string& path, bool lazy) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_workspace(buf.str(), lazy);
}

// ---------------------------------------------------------------------------
// command dispatch

namespace {

void add_check(Report& r, const std::string& name, bool pass, const std::string& witness = "",
               const std::string& residue = "") {
    r.checks.push_back({name, pass ? "PASS" : "FAIL", witness, residue});
}

void add_undecided(Report& r, const std::string& name, const std::string& why) {
    r.checks.push_back({name, "UNDECIDED", why, ""});
}

void add_classify(Report& r, const std::string& name, const ClassifyResult& c) {
    if (c.nonvanishing()) {
        r.checks.push_back({name, "PASS", "", vanishing_str(c.kind)});
    } else {
        r.checks.push_back({name, "FAIL",
                            c.witness ? point_str(*c.witness) : "identically zero",
                            vanishing_str(c.kind)});
    }
}

struct Args {
    std::vector<std::string> positional;
    std::map<std::string, std::string> flags;

    std::string flag(const std::string& name) const {
        auto it = flags.find(name);
        return it == flags.end() ? "" : it->second;
    }
};

Args parse_args(const std::vector<std::string>& argv) {
    Args a;
    for (std::size_t i = 0; i < argv.size(); ++i) {
        if (argv[i].rfind("--", 0) == 0) {
            if (i + 1 >= argv.size()) throw UsageError("flag " + argv[i] + " needs a value");
            a.flags[argv[i].substr(2)] = argv[i + 1];
            ++i;
        } else {
            a.positional.push_back(argv[i]);
        }
    }
    return a;
}

std::vector<Point> optional_grid(const Workspace& ws, const Args& a) {
    std::string name = a.flag("samples");
    if (name.empty()) return {};
    return ws.sample_grid(name);
}

// graphs for `dj` commands: a jacobi name, a contact name or a plain 1-form
DJStructure resolve_dj(const Workspace& ws, const std::string& name) {
    if (ws.jacobis.count(name)) return graph_of_jacobi(ws.jacobi(name));
    if (ws.contacts.count(name)) return graph_of_precontact(ws.contact(name).eta);
    if (ws.oneforms.count(name)) return graph_of_precontact(ws.oneform(name));
    throw UsageError("no jacobi/contact/oneform named " + name);
}

std::string emit_chart(const Chart& c) {
    std::string out = "chart " + c.name + " :";
    for (Var v : c.coords) out += " " + v.name();
    return out + "\n";
}

std::string emit_oneform(const std::string& name, const Tensor& t) {
    std::string out = "oneform " + name + " on " + t.chart.name + " :";
    bool first = true;
    for (const auto& [idx, s] : t.comps) {
        out += std::string(first ? " " : " ; ") + t.chart.coords[static_cast<std::size_t>(idx[0])].name() +
               " = " + s.str();
        first = false;
    }
    if (first) out += " " + t.chart.coords[0].name() + " = 0";
    return out + "\n";
}

std::string emit_twoform(const std::string& name, const Tensor& t) {
    std::string out = "twoform " + name + " on " + t.chart.name + " :";
    bool first = true;
    for (const auto& [idx, s] : t.comps) {
        out += std::string(first ? " " : " ; ") + t.chart.coords[static_cast<std::size_t>(idx[0])].name() +
               "^" + t.chart.coords[static_cast<std::size_t>(idx[1])].name() + " = " + s.str();
        first = false;
    }
    if (first) out += " " + t.chart.coords[0].name() + "^" + t.chart.coords[1].name() + " = 0";
    return out + "\n";
}

std::string emit_jacobi(const std::string& name, const JacobiStructure& j) {
    std::string out = "jacobi " + name + " on " + j.chart.name + " :";
    bool first = true;
    for (const auto& [idx, s] : j.pi.comps) {
        out += std::string(first ? " " : " ; ") + "pi " +
               j.chart.coords[static_cast<std::size_t>(idx[0])].name() + "^" +
               j.chart.coords[static_cast<std::size_t>(idx[1])].name() + " = " + s.str();
        first = false;
    }
    for (const auto& [idx, s] : j.e.comps) {
        out += std::string(first ? " " : " ; ") + "E " +
               j.chart.coords[static_cast<std::size_t>(idx[0])].name() + " = " + s.str();
        first = false;
    }
    if (first) out += " pi " + j.chart.coords[0].name() + "^" + j.chart.coords[1].name() + " = 0";
    return out + "\n";
}

void cmd_verify(Workspace& ws, const Args& a, Report& rep) {
    if (a.positional.size() < 3) throw UsageError("verify needs a kind and an entity name");
    const std::string& kind = a.positional[1];
    const std::string& name = a.positional[2];
    if (kind == "jacobi") {
        JacobiReport r = verify_jacobi(ws.jacobi(name));
        add_check(rep, "jacobi-bracket-identity", r.c1.is_zero(), "", r.c1.is_zero() ? "" : r.c1.str());
        add_check(rep, "jacobi-invariance-identity", r.c2.is_zero(), "", r.c2.is_zero() ? "" : r.c2.str());
    } else if (kind == "dj") {
        DJStructure l = resolve_dj(ws, name);
        try {
            DJReport r = verify_dj(l, optional_grid(ws, a));
            add_check(rep, "dj-isotropy", r.isotropy, r.isotropy ? "" : r.witness);
            add_check(rep, "dj-rank", r.rank_ok, r.rank_ok ? "" : r.witness);
            add_check(rep, "dj-integrability", r.integrable, r.integrable ? "" : r.witness);
        } catch (const Inconclusive& e) {
            add_undecided(rep, "dj-rank", e.what());
        }
    } else if (kind == "contact") {
        const ContactForm& c = ws.contact(name);
        try {
            add_classify(rep, "contact-nondegeneracy", verify_contact(c.eta, optional_grid(ws, a)));
        } catch (const Inconclusive& e) {
            add_undecided(rep, "contact-nondegeneracy", e.what());
        }
    } else if (kind == "lcs") {
        const LcsData& l = ws.lcs(name);
        Tensor dth = exterior_derivative(l.theta);
        add_check(rep, "lcs-lee-closed", dth.is_zero(), "", dth.is_zero() ? "" : dth.str());
        Tensor res = exterior_derivative(l.omega) - wedge(l.theta, l.omega);
        add_check(rep, "lcs-structure-identity", res.is_zero(), "", res.is_zero() ? "" : res.str());
        try {
            add_classify(rep, "lcs-nondegeneracy",
                         classify_nonvanishing(lcs_top_coefficient(l.omega), optional_grid(ws, a)));
        } catch (const Inconclusive& e) {
            add_undecided(rep, "lcs-nondegeneracy", e.what());
        }
    } else if (kind == "commute-diracization") {
        if (a.positional.size() < 4) throw UsageError("verify commute-diracization <entity> <one-form>");
        DJStructure l = resolve_dj(ws, name);
        const Tensor& b = ws.oneform(a.positional[3]);
        bool ok = verify_commute_diracization(l, b, optional_grid(ws, a));
        add_check(rep, "diracization-square", ok);
    } else if (kind == "commute-poissonization") {
        if (a.positional.size() < 4) throw UsageError("verify commute-poissonization <jacobi> <one-form>");
        const JacobiStructure& j = ws.jacobi(name);
        const Tensor& b = ws.oneform(a.positional[3]);
        try {
            PoissonCommuteReport r = verify_commute_poissonization(j, b, optional_grid(ws, a));
            add_check(rep, "admissibility-biconditional", r.admissibility_statuses_agree);
            add_check(rep, "poissonization-square", r.commutes);
        } catch (const Inconclusive& e) {
            add_undecided(rep, "poissonization-square", e.what());
        }
    } else if (kind == "algebroid-iso") {
        if (a.positional.size() < 4) throw UsageError("verify algebroid-iso <jacobi> <one-form>");
        const JacobiStructure& j = ws.jacobi(name);
        const Tensor& b = ws.oneform(a.positional[3]);
        auto adm = admissibility(j, b, optional_grid(ws, a));
        add_classify(rep, "admissible", adm.status);
        if (adm.status.nonvanishing())
            add_check(rep, "algebroid-isomorphism", verify_algebroid_iso(j, b, optional_grid(ws, a)));
    } else {
        throw UsageError("unknown verify kind '" + kind + "'");
    }
}

void cmd_gauge(Workspace& ws, const Args& a, Report& rep) {
    if (a.positional.size() < 3) throw UsageError("gauge needs a kind and an entity name");
    const std::string& kind = a.positional[1];
    const std::string& name = a.positional[2];
    std::string bname = a.flag("one-form");
    if (bname.empty()) throw UsageError("gauge needs --one-form <name>");
    const Tensor& b = ws.oneform(bname);
    auto grid = optional_grid(ws, a);
    if (kind == "jacobi") {
        const JacobiStructure& j = ws.jacobi(name);
        AdmissibilityReport adm = [&] {
            try {
                return admissibility(j, b, grid);
            } catch (const Inconclusive& e) {
                throw UsageError(std::string("admissibility needs samples: ") + e.what());
            }
        }();
        add_classify(rep, "admissible", adm.status);
        if (!adm.status.nonvanishing()) return;
        JacobiStructure jb = gauge_jacobi(j, b, grid);
        add_check(rep, "gauged-jacobi-identities", verify_jacobi(jb).pass);
        bool span = spans_equal(frame_matrix(graph_of_jacobi(jb).frame),
                                frame_matrix(gauge_dj(graph_of_jacobi(j), b).frame), grid);
        add_check(rep, "gauged-graph-coherence", span);
        rep.emitted = emit_chart(j.chart) + emit_jacobi(name + "_gauged", jb);
    } else if (kind == "contact") {
        const ContactForm& c = ws.contact(name);
        try {
            ContactForm cb = gauge_contact(c, b, grid);
            add_check(rep, "gauged-contact-nondegenerate", true);
            Mat lhs = sharp_map(contact_to_jacobi(cb)).m;
            Mat rhs = sharp_map(gauge_jacobi(contact_to_jacobi(c), b, grid)).m;
            add_check(rep, "gauged-jacobi-coherence", (lhs - rhs).is_zero());
            rep.emitted = emit_chart(c.chart) + emit_oneform(name + "_gauged_form", cb.eta) +
                          "contact " + name + "_gauged on " + c.chart.name + " : " + name +
                          "_gauged_form\n";
        } catch (const Inconclusive& e) {
            add_undecided(rep, "gauged-contact-nondegenerate", e.what());
        } catch (const Error& e) {
            add_check(rep, "gauged-contact-nondegenerate", false, e.what());
        }
    } else if (kind == "lcs") {
        const LcsData& raw = ws.lcs(name);
        try {
            LcsStructure l = make_lcs(raw.chart, raw.omega, raw.theta, grid);
            LcsStructure lb = gauge_lcs(l, b, grid);
            add_check(rep, "gauged-lcs-nondegenerate", true);
            Tensor res = exterior_derivative(lb.omega) - wedge(lb.theta, lb.omega);
            add_check(rep, "gauged-lcs-structure-identity", res.is_zero());
            Mat lhs = sharp_map(lcs_to_jacobi(lb)).m;
            Mat rhs = sharp_map(gauge_jacobi(lcs_to_jacobi(l), b, grid)).m;
            add_check(rep, "gauged-jacobi-coherence", (lhs - rhs).is_zero());
            rep.emitted = emit_chart(raw.chart) + emit_twoform(name + "_gauged_omega", lb.omega) +
                          emit_oneform(name + "_gauged_theta", lb.theta) + "lcs " + name +
                          "_gauged on " + raw.chart.name + " : omega = " + name +
                          "_gauged_omega ; theta = " + name + "_gauged_theta\n";
        } catch (const Inconclusive& e) {
            add_undecided(rep, "gauged-lcs-nondegenerate", e.what());
        } catch (const Error& e) {
            add_check(rep, "gauged-lcs-nondegenerate", false, e.what());
        }
    } else if (kind == "dj") {
        DJStructure l = resolve_dj(ws, name);
        DJStructure lb = gauge_dj(l, b);
        try {
            DJReport r = verify_dj(lb, grid);
            add_check(rep, "gauged-dj-isotropy", r.isotropy, r.isotropy ? "" : r.witness);
            add_check(rep, "gauged-dj-rank", r.rank_ok, r.rank_ok ? "" : r.witness);
            add_check(rep, "gauged-dj-integrability", r.integrable, r.integrable ? "" : r.witness);
        } catch (const Inconclusive& e) {
            add_undecided(rep, "gauged-dj-rank", e.what());
        }
    } else {
        throw UsageError("unknown gauge kind '" + kind + "'");
    }
}

void cmd_poissonize(Workspace& ws, const Args& a, Report& rep) {
    if (a.positional.size() < 2) throw UsageError("poissonize <jacobi>");
    const JacobiStructure& j = ws.jacobi(a.positional[1]);
    Poissonization p = poissonize(j);
    Tensor self = schouten(p.pi, p.pi);
    add_check(rep, "poissonization-self-bracket", self.is_zero(), "", self.is_zero() ? "" : self.str());
    rep.emitted = emit_chart(p.chart) + emit_jacobi(a.positional[1] + "_pois", p.as_jacobi());
}

void cmd_groupoid(Workspace& ws, const Args& a, Report& rep) {
    if (a.positional.size() < 3 || a.positional[1] != "pair")
        throw UsageError("groupoid pair <contact> [--gauge <one-form>] --samples <grid>");
    const ContactForm& c = ws.contact(a.positional[2]);
    std::string gname = a.flag("samples");
    if (gname.empty()) throw UsageError("groupoid pair needs --samples <grid on the total chart>");
    const std::vector<Point>& total_grid = ws.sample_grid(gname);
    PairGroupoid g = build_pair_groupoid(c, total_grid);
    for (const auto& pt : total_grid)
        for (Var v : g.total.coords)
            if (!pt.count(v))
                throw UsageError("sample grid must assign the total chart coordinates (left copy, t, right copy)");
    // base grid: push total samples through the target projection
    std::vector<Point> base_grid;
    for (const auto& pt : total_grid) base_grid.push_back(map_point(g.beta_map, pt));

    add_check(rep, "total-contact", true, "", vanishing_str(verify_contact(g.eta_g, total_grid).kind));
    add_check(rep, "sigma-multiplicative", verify_sigma_multiplicative(g));
    add_check(rep, "eta-multiplicative", verify_multiplicative(g, g.eta_g));
    JacobiStructure jg = contact_to_jacobi(ContactForm{g.total, g.eta_g});
    JacobiStructure base_j = contact_to_jacobi(c);
    Scalar es = Scalar::exp_linform({{g.total.coords[static_cast<std::size_t>(g.t_index())], Rat(1)}});
    add_check(rep, "source-conformal-jacobi", check_map(g.alpha_map, jg, base_j, MapMode::Conformal, &es));
    add_check(rep, "target-anti-jacobi", check_map(g.beta_map, jg, base_j, MapMode::Anti));
    std::vector<Scalar> probes;
    for (Var v : g.base.coords) probes.push_back(Scalar::var(v));
    try {
        KernelCheckReport kr = check_source_target_kernels(g, probes, total_grid);
        add_check(rep, "source-target-kernels", kr.containment && kr.span_match);
    } catch (const Error& e) {
        add_check(rep, "source-target-kernels", false, e.what());
    }

    std::string bname = a.flag("gauge");
    if (!bname.empty()) {
        const Tensor& b = ws.oneform(bname);
        PairGroupoid gb = gauge_groupoid_contact(g, b, base_grid, total_grid);
        add_check(rep, "gauged-eta-multiplicative", verify_multiplicative(gb, gb.eta_g));
        Tensor direct = g.alpha_map.pullback(c.eta - b).scaled(es) - g.beta_map.pullback(c.eta - b);
        add_check(rep, "gauged-eta-remark-form", (gb.eta_g - direct).is_zero());
        JacobiStructure jb = contact_to_jacobi(ContactForm{gb.total, gb.eta_g});
        JacobiStructure base_b = gauge_jacobi(base_j, b, base_grid);
        add_check(rep, "gauged-source-conformal-jacobi",
                  check_map(gb.alpha_map, jb, base_b, MapMode::Conformal, &es));
        add_check(rep, "gauged-target-anti-jacobi", check_map(gb.beta_map, jb, base_b, MapMode::Anti));
        try {
            KernelCheckReport kr = check_source_target_kernels(gb, probes, total_grid);
            add_check(rep, "gauged-source-target-kernels", kr.containment && kr.span_match);
        } catch (const Error& e) {
            add_check(rep, "gauged-source-target-kernels", false, e.what());
        }
    }
}

void cmd_glb(Workspace& ws, const Args& a, Report& rep) {
    if (a.positional.size() < 3) throw UsageError("glb canonical|compat|psi-b <jacobi> ...");
    const std::string& sub = a.positional[1];
    const JacobiStructure& j = ws.jacobi(a.positional[2]);
    CanonicalPair pair = canonical_pair(j);
    if (sub == "canonical") {
        PairForm phi0 = PairForm::make(Tensor::zero(j.chart, TKind::Form, 1),
                                       Tensor::constant(j.chart, TKind::Form, Scalar(1)));
        add_check(rep, "tangent-cocycle-closed", tangent_d(phi0).is_zero());
        MvPair x0 = MvPair::make(-j.e, Tensor::zero(j.chart, TKind::MultiVector, 0));
        add_check(rep, "cotangent-cocycle-closed", cotangent_d(j, x0).is_zero());
        rep.checks.push_back({"cotangent-cocycle", "PASS", "", "(-E, 0) with E = " + j.e.str()});
    } else if (sub == "compat") {
        const Chart& c = j.chart;
        std::vector<std::pair<std::string, MvPair>> items;
        for (Var v : c.coords) items.emplace_back(v.name(), MvPair::scalar(c, Scalar::var(v)));
        for (int i = 0; i < c.dim(); ++i)
            items.emplace_back("d/d" + c.coords[static_cast<std::size_t>(i)].name(),
                               MvPair::make(Tensor::basis_vector(c, i),
                                            Tensor::zero(c, TKind::MultiVector, 0)));
        items.emplace_back("e", MvPair::make(Tensor::zero(c, TKind::MultiVector, 1),
                                             Tensor::constant(c, TKind::MultiVector, Scalar(1))));
        bool all = true;
        std::string witness;
        for (const auto& [pn, p] : items)
            for (const auto& [qn, q] : items)
                if (!verify_glb_compat(pair, p, q)) {
                    all = false;
                    if (witness.empty()) witness = "(" + pn + ", " + qn + ")";
                }
        add_check(rep, "glb-compatibility", all, witness);
    } else if (sub == "psi-b") {
        if (a.positional.size() < 4) throw UsageError("glb psi-b <jacobi> <one-form> --samples <grid>");
        const Tensor& b = ws.oneform(a.positional[3]);
        try {
            PsiBReport r = psi_b_gauge(pair, b, optional_grid(ws, a));
            add_classify(rep, "psi-invertible", r.status);
            add_check(rep, "psi-matches-admissibility", r.status_matches_admissibility);
            if (r.status.nonvanishing()) {
                add_check(rep, "psi-transpose-is-phi", r.transpose_is_phi);
                add_check(rep, "gauged-sharp-coherence", r.sharp_coherent);
                add_check(rep, "gauged-cocycle-closed", r.gauged_cocycle_closed);
                add_check(rep, "canonical-pair-isomorphism", r.remark_iso);
            }
        } catch (const Inconclusive& e) {
            add_undecided(rep, "psi-invertible", e.what());
        }
    } else {
        throw UsageError("unknown glb subcommand '" + sub + "'");
    }
}

void cmd_gcs(Workspace& ws, const Args& a, Report& rep) {
    if (a.positional.size() < 3 || a.positional[1] != "from-contact")
        throw UsageError("gcs from-contact <contact> [--bfield <one-form>]");
    const ContactForm& c = ws.contact(a.positional[2]);
    E1Endomorphism i = from_contact(c);
    GcAxiomReport base = check_axioms(i);
    rep.checks.push_back({"square-class",
                          base.square == SquareClass::Neither ? "FAIL" : "PASS", "",
                          square_class_str(base.square) +
                              (base.square == SquareClass::MinusId
                                   ? " (note: the defining text states I^2 = Id; the contact block "
                                     "matrix squares to -Id)"
                                   : "")});
    add_check(rep, "anti-self-adjoint", base.adjoint_ok);
    add_check(rep, "torsion-zero", base.torsion_zero);
    std::string bname = a.flag("bfield");
    if (bname.empty()) {
        add_check(rep, "contact-type", is_contact_type(i));
    } else {
        const Tensor& b = ws.oneform(bname);
        E1Endomorphism moved = bfield_transform(i, b);
        add_check(rep, "bfield-preserves-axioms", check_axioms(moved) == base);
        if (b.is_zero()) {
            add_check(rep, "contact-type", is_contact_type(moved));
        } else {
            JacobiStructure j = contact_to_jacobi(c);
            Mat witness = sharp_map(j).m * db_b_tilde(b).m;
            bool flipped = !is_contact_type(moved) && !witness.is_zero() &&
                           (moved.block(0, 0) + witness).is_zero();
            add_check(rep, "bfield-breaks-contact-type", flipped,
                      flipped ? "" : "contact shape unexpectedly preserved");
        }
    }
}

}  // namespace

Report run_command(Workspace& ws, const std::vector<std::string>& argv) {
    Args a = parse_args(argv);
    if (a.positional.empty()) throw UsageError("missing command");
    Report rep;
    for (std::size_t i = 0; i < argv.size(); ++i) rep.command += (i ? " " : "") + argv[i];
    const std::string& cmd = a.positional[0];
    if (cmd == "verify")
        cmd_verify(ws, a, rep);
    else if (cmd == "gauge")
        cmd_gauge(ws, a, rep);
    else if (cmd == "poissonize")
        cmd_poissonize(ws, a, rep);
    else if (cmd == "groupoid")
        cmd_groupoid(ws, a, rep);
    else if (cmd == "glb")
        cmd_glb(ws, a, rep);
    else if (cmd == "gcs")
        cmd_gcs(ws, a, rep);
    else
        throw UsageError("unknown command '" + cmd + "'");
    return rep;
}

int report_exit_code(const Report& r) {
    bool undecided = false;
    for (const auto& c : r.checks) {
        if (c.status == "FAIL") return 1;
        if (c.status == "UNDECIDED") undecided = true;
    }
    return undecided ? 3 : 0;
}

std::string render_text(const Report& r) {
    std::string out;
    for (const auto& c : r.checks) {
        out += "CHECK " + c.name + " " + c.status + "\n";
        if (!c.witness.empty()) out += "  witness: " + c.witness + "\n";
        if (!c.residue.empty()) out += "  detail: " + c.residue + "\n";
    }
    return out;
}

std::string render_json(const Report& r) {
    nlohmann::json j;
    j["command"] = r.command;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : r.checks) {
        nlohmann::json jc;
        jc["name"] = c.name;
        jc["status"] = c.status;
        if (!c.witness.empty()) jc["witness"] = c.witness;
        if (!c.residue.empty()) jc["residue"] = c.residue;
        j["checks"].push_back(jc);
    }
    j["elapsed_ms"] = r.elapsed_ms;
    return j.dump(2) + "\n";
}

}  // namespace jkit
