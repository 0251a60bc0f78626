#ifndef FOCKSPEC_TOOLS_CLI_HPP
#define FOCKSPEC_TOOLS_CLI_HPP

// Command-line front end. run() is the whole program minus process plumbing, so tests
// can drive it in-process with string streams.

#include <algorithm>
#include <cstdio>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fockspec/catalog.hpp"
#include "fockspec/errors.hpp"
#include "fockspec/parser.hpp"
#include "fockspec/realizations.hpp"
#include "fockspec/roots.hpp"
#include "fockspec/solvability.hpp"
#include "fockspec/spectra.hpp"

namespace fockspec::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { ok = 0, usage = 1, binding = 2, leakage = 3, nonconvergence = 4 };

struct RunConfig {
    std::size_t degree_cap = default_degree_cap;
    double tol = 1e-12;
    std::size_t max_iter = 500;
    std::string format = "json";
    std::vector<std::string> deltas{"1", "1/3"};
    std::vector<std::string> qs{"2", "1/2"};
    std::vector<std::size_t> fibers{0};
};

/// 17 significant digits, the same on every run.
inline std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

struct OperatorArgs {
    std::string expr;
    std::string op;
    std::vector<std::string> binds;
};

struct Resolved {
    WeylElement element;
    std::optional<OpSpec> spec;  // set for --op
    Json json;
};

/// Failure carrying an exit code and an optional structured diagnostic.
struct Failure {
    ExitCode code;
    std::string message;
    Json detail = Json::object();
};

inline Json rational_array(const std::vector<Rational>& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(to_string(x));
    return a;
}

inline Json bindings_json(const Bindings& b) {
    Json o = Json::object();
    for (const auto& [k, v] : b) o[k] = to_string(v);
    return o;
}

inline Json overflow_json(const std::vector<Rational>& coeffs) {
    Json a = Json::array();
    for (std::size_t d = 0; d < coeffs.size(); ++d)
        if (coeffs[d] != 0) a.push_back({{"degree", d}, {"coeff", to_string(coeffs[d])}});
    return a;
}

inline Json matrix_json(const RationalMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(to_string(m(i, j)));
        rows.push_back(std::move(r));
    }
    return rows;
}

inline Json poly_json(const UniPoly& p) {
    return {{"text", to_string(p, "t")}, {"coeffs", rational_array(p.coeffs())}};
}

inline Json eigenvalue_json(const Eigenvalue& e) {
    if (e.is_exact()) return {{"exact", to_string(*e.exact)}};
    return {{"re", num(e.re)}, {"im", num(e.im)}, {"residual", num(e.residual)}};
}

inline std::string eigenvalue_text(const Eigenvalue& e) {
    if (e.is_exact()) return to_string(*e.exact);
    if (e.im == 0) return num(e.re);
    return num(e.re) + (e.im < 0 ? " - " : " + ") + num(std::abs(e.im)) + "i";
}

inline Bindings parse_bindings(const std::vector<std::string>& items) {
    Bindings out;
    for (const auto& item : items) {
        auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw Failure{usage, "malformed binding '" + item + "', expected name=value"};
        std::string key = item.substr(0, eq);
        try {
            out[key] = parse_rational(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw Failure{binding, "binding '" + key + "' is not a rational number: '" + item.substr(eq + 1) + "'"};
        }
    }
    return out;
}

inline void collect_params(const OpAst& ast, std::set<std::string>& out) {
    if (ast.kind == OpAst::Kind::Param) out.insert(ast.name);
    for (const auto& c : ast.children) collect_params(c, out);
}

inline Resolved resolve(const OperatorArgs& a, const RunConfig& cfg, Json& diagnostics) {
    if (a.expr.empty() == a.op.empty()) throw Failure{usage, "exactly one of --expr or --op is required"};
    Bindings binds = parse_bindings(a.binds);
    Resolved r;
    if (!a.op.empty()) {
        const CatalogEntry* entry = nullptr;
        for (const auto& e : catalog())
            if (e.name == a.op) entry = &e;
        if (!entry) throw Failure{usage, "unknown operator '" + a.op + "'"};
        for (const auto& [k, v] : binds) {
            bool known = std::any_of(entry->params.begin(), entry->params.end(),
                                     [&](const ParamSchema& p) { return p.name == k; });
            if (!known) diagnostics.push_back({{"severity", "warning"}, {"kind", "unused_binding"},
                                               {"message", "binding '" + k + "' is not a parameter of " + a.op}});
        }
        OpSpec spec = entry->build(binds);
        r.element = spec.element;
        r.json = {{"name", spec.name}, {"bindings", bindings_json(spec.params)}, {"family", to_string(spec.family)}};
        if (spec.invariant_degree) r.json["invariant_degree"] = *spec.invariant_degree;
        r.spec = std::move(spec);
    } else {
        const OpAst ast = parse(a.expr);
        std::set<std::string> used;
        collect_params(ast, used);
        for (const auto& [k, v] : binds)
            if (!used.contains(k))
                diagnostics.push_back({{"severity", "warning"}, {"kind", "unused_binding"},
                                       {"message", "binding '" + k + "' does not appear in the expression"}});
        r.element = lower(ast, binds, cfg.degree_cap);
        r.json = {{"expr", a.expr}, {"bindings", bindings_json(binds)}};
    }
    r.json["canonical"] = print_canonical(r.element);
    return r;
}

inline std::size_t degree_for(const Resolved& r, const std::optional<std::size_t>& n) {
    if (n) return *n;
    if (r.spec && r.spec->invariant_degree) return *r.spec->invariant_degree;
    throw Failure{usage, "--n is required for operators without a declared invariant degree"};
}

inline RealizationId realization_from(const std::string& kind, const std::optional<std::string>& param) {
    auto need = [&]() -> Rational {
        if (!param) throw Failure{usage, "--param is required for realization '" + kind + "'"};
        try {
            return parse_rational(*param);
        } catch (const std::exception&) {
            throw Failure{usage, "--param is not a rational number: '" + *param + "'"};
        }
    };
    try {
        if (kind == "differential") return RealizationId::differential();
        if (kind == "complex") return RealizationId::complex_plane();
        if (kind == "delta") return RealizationId::delta_lattice(need());
        if (kind == "q") return RealizationId::q_lattice(need());
    } catch (const std::invalid_argument& e) {
        throw Failure{usage, e.what()};
    }
    throw Failure{usage, "unknown realization '" + kind + "'"};
}

inline Json config_json(const RunConfig& c) {
    Json fibers = Json::array();
    for (auto m : c.fibers) fibers.push_back(m);
    return {{"degree_cap", c.degree_cap}, {"tol", num(c.tol)},       {"max_iter", c.max_iter},
            {"format", c.format},         {"deltas", c.deltas},      {"qs", c.qs},
            {"fibers", fibers}};
}

// --- commands -------------------------------------------------------------

inline Json normal_order(const Resolved& r) {
    std::vector<std::pair<Monomial, Rational>> terms(r.element.terms().begin(), r.element.terms().end());
    std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) {
        const auto dx = x.first.b_exp + x.first.a_exp, dy = y.first.b_exp + y.first.a_exp;
        return dx != dy ? dx > dy : x.first.a_exp > y.first.a_exp;
    });
    Json t = Json::array();
    for (const auto& [m, c] : terms) t.push_back({{"b", m.b_exp}, {"a", m.a_exp}, {"coeff", to_string(c)}});
    return {{"canonical", print_canonical(r.element)}, {"terms", t}};
}

inline Json classify_cmd(const Resolved& r, std::size_t nmax, const RunConfig& cfg, Json& diagnostics) {
    SolvabilityReport rep = classify(r.element, nmax, cfg.degree_cap);
    Json res{{"exactly_solvable", rep.exactly_solvable},
             {"scan_bound", rep.scan_bound},
             {"invariant_degrees", rep.invariant_degrees}};
    Json residuals = Json::array();
    auto qc = QESCoeffs::from_element(r.element);
    for (const auto& [n, cr] : rep.constraint_residuals) {
        Json e{{"n", n}};
        bool nonzero = false;
        if (cr.heun) {
            e["heun"] = to_string(*cr.heun);
            nonzero = *cr.heun != 0;
        }
        if (cr.qes) {
            e["r1"] = to_string(cr.qes->first);
            e["r2"] = to_string(cr.qes->second);
            nonzero = cr.qes->first != 0 || cr.qes->second != 0;
        }
        if (qc) {
            auto lc = qes_leakage_conditions(*qc, n);
            e["derived"] = {{"raise2_at_n", to_string(lc.raise2_at_n)},
                            {"raise2_at_prev", lc.raise2_at_prev ? Json(to_string(*lc.raise2_at_prev)) : Json(nullptr)},
                            {"raise1_at_n", to_string(lc.raise1_at_n)}};
        }
        if (nonzero)
            diagnostics.push_back({{"severity", "warning"}, {"kind", "constraint_mismatch"},
                                   {"message", "degree " + std::to_string(n) +
                                                   " is invariant but the closed-form residual is nonzero"}});
        residuals.push_back(std::move(e));
    }
    res["constraint_residuals"] = residuals;
    if (qc && !rep.exactly_solvable) {
        for (std::size_t n = 0; n <= nmax; ++n) {
            if (std::find(rep.invariant_degrees.begin(), rep.invariant_degrees.end(), n) != rep.invariant_degrees.end())
                continue;
            const long ln = static_cast<long>(n);
            const bool closed_form_holds =
                qc->heun_form() ? heun_constraint_residual(qc->a3, qc->b2, qc->d1, ln) == 0
                                : qes_constraint_residuals(*qc, ln) == std::pair<Rational, Rational>(0, 0);
            if (closed_form_holds)
                diagnostics.push_back({{"severity", "warning"}, {"kind", "constraint_mismatch"},
                                       {"message", "closed-form residuals vanish at degree " + std::to_string(n) +
                                                       " but the sector is not invariant"}});
        }
    }
    if (rep.leakage_witness) {
        const auto& w = *rep.leakage_witness;
        res["leakage_witness"] = {{"degree", w.degree}, {"column", w.column}, {"overflow", overflow_json(w.overflow.coeffs())}};
    } else {
        res["leakage_witness"] = nullptr;
    }
    return res;
}

inline Json spectrum_cmd(const Resolved& r, std::size_t n, const RealizationId& rid, std::size_t fiber,
                         const RunConfig& cfg) {
    if (n > cfg.degree_cap) throw DegreeOverflow(n, cfg.degree_cap);
    Spectrum s = spectrum(r.element, rid, n, RootOptions{cfg.tol, cfg.max_iter}, fiber);
    Json eig = Json::array();
    for (const auto& e : s.eigenvalues) eig.push_back(eigenvalue_json(e));
    Json pairs = Json::array();
    for (const auto& p : s.eigenpairs) {
        Json v = Json::array();
        if (p.value.is_exact()) {
            v = rational_array(p.exact_vector);
        } else {
            for (auto z : p.numeric_vector) v.push_back({{"re", num(z.real())}, {"im", num(z.imag())}});
        }
        pairs.push_back({{"eigenvalue", eigenvalue_json(p.value)}, {"vector", v}});
    }
    return {{"realization", s.realization}, {"degree", s.degree},     {"matrix", matrix_json(s.matrix)},
            {"char_poly", poly_json(s.char_poly)}, {"eigenvalues", eig}, {"eigenpairs", pairs}};
}

inline Json isospectral_cmd(const Resolved& r, std::size_t n, const RunConfig& cfg) {
    if (n > cfg.degree_cap) throw DegreeOverflow(n, cfg.degree_cap);
    std::vector<RealizationId> rs{RealizationId::differential()};
    for (const auto& d : cfg.deltas) rs.push_back(realization_from("delta", d));
    for (const auto& q : cfg.qs) rs.push_back(realization_from("q", q));
    IsospectralReport rep = isospectral_check(r.element, n, rs, cfg.fibers);
    Json entries = Json::array();
    for (const auto& e : rep.entries) entries.push_back({{"realization", e.realization}, {"char_poly", poly_json(e.char_poly)}});
    return {{"degree", rep.degree}, {"all_equal", rep.all_equal}, {"entries", entries}};
}

inline Json catalog_cmd() {
    Json ops = Json::array();
    for (const auto& e : catalog()) {
        Json params = Json::array();
        for (const auto& p : e.params) {
            Json pj{{"name", p.name},
                    {"type", p.nonneg_integer ? "nonneg_integer" : "rational"},
                    {"default", p.default_value ? Json(to_string(*p.default_value)) : Json(nullptr)},
                    {"description", p.description}};
            params.push_back(std::move(pj));
        }
        ops.push_back({{"name", e.name}, {"description", e.description}, {"family", to_string(e.family)}, {"params", params}});
    }
    return {{"operators", ops}};
}

// --- text rendering ---------------------------------------------------------

inline void render_text(const std::string& command, const Json& doc, std::ostream& out) {
    const Json& res = doc["result"];
    if (doc.contains("operator")) out << "operator: " << doc["operator"]["canonical"].get<std::string>() << "\n";
    if (command == "normal-order") {
        for (const auto& t : res["terms"])
            out << "  b^" << t["b"].get<std::size_t>() << " a^" << t["a"].get<std::size_t>() << "  "
                << t["coeff"].get<std::string>() << "\n";
    } else if (command == "classify") {
        out << "exactly_solvable: " << (res["exactly_solvable"].get<bool>() ? "true" : "false") << "\n";
        out << "invariant_degrees (n <= " << res["scan_bound"].get<std::size_t>() << "):";
        for (const auto& n : res["invariant_degrees"]) out << " " << n.get<std::size_t>();
        out << "\n";
        for (const auto& c : res["constraint_residuals"]) {
            out << "  n=" << c["n"].get<std::size_t>();
            if (c.contains("heun")) out << " heun=" << c["heun"].get<std::string>();
            if (c.contains("r1")) out << " r1=" << c["r1"].get<std::string>() << " r2=" << c["r2"].get<std::string>();
            out << "\n";
        }
        if (!res["leakage_witness"].is_null()) {
            const auto& w = res["leakage_witness"];
            out << "leakage at n=" << w["degree"].get<std::size_t>() << ", column " << w["column"].get<std::size_t>()
                << "\n";
        }
    } else if (command == "spectrum") {
        out << "realization: " << res["realization"].get<std::string>() << ", degree " << res["degree"].get<std::size_t>()
            << "\n";
        out << "char_poly: " << res["char_poly"]["text"].get<std::string>() << "\n";
        out << "eigenvalues:";
        for (const auto& e : res["eigenvalues"]) {
            if (e.contains("exact"))
                out << " " << e["exact"].get<std::string>();
            else
                out << " " << e["re"].get<std::string>() << (e["im"].get<std::string>() == "0" ? "" : "+(" + e["im"].get<std::string>() + ")i");
        }
        out << "\n";
    } else if (command == "isospectral") {
        out << "degree " << res["degree"].get<std::size_t>() << ": " << (res["all_equal"].get<bool>() ? "isospectral" : "NOT isospectral") << "\n";
        for (const auto& e : res["entries"])
            out << "  " << e["realization"].get<std::string>() << ": " << e["char_poly"]["text"].get<std::string>() << "\n";
    } else if (command == "catalog") {
        for (const auto& op : res["operators"]) {
            out << op["name"].get<std::string>() << " [" << op["family"].get<std::string>() << "]";
            for (const auto& p : op["params"]) out << " " << p["name"].get<std::string>();
            out << "\n";
        }
    }
    for (const auto& d : doc["diagnostics"])
        out << d["severity"].get<std::string>() << ": " << d["message"].get<std::string>() << "\n";
}

}  // namespace detail

/// Runs one command. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using namespace detail;
    RunConfig cfg;
    CLI::App app{"Exact spectra of Weyl-algebra operators on polynomial sectors", "fockspec"};
    app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.add_option("--degree-cap", cfg.degree_cap, "maximum b- and a-exponent")->check(CLI::PositiveNumber);
    app.add_option("--tol", cfg.tol, "root residual tolerance")->check(CLI::PositiveNumber);
    app.add_option("--max-iter", cfg.max_iter, "root iteration cap")->check(CLI::PositiveNumber);
    app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--deltas", cfg.deltas, "delta-lattice spacings for isospectral")->delimiter(',');
    app.add_option("--qs", cfg.qs, "q-lattice parameters for isospectral")->delimiter(',');
    app.add_option("--fibers", cfg.fibers, "complex-plane vacuum degrees m for isospectral")->delimiter(',');
    app.require_subcommand(1);

    OperatorArgs oa;
    std::size_t nmax = default_scan_bound;
    std::optional<std::size_t> n;
    std::string realization = "differential";
    std::optional<std::string> param;
    std::size_t fiber = 0;

    auto operator_opts = [&](CLI::App* sub, bool allow_op) {
        sub->add_option("--expr", oa.expr, "operator expression");
        if (allow_op) sub->add_option("--op", oa.op, "catalog operator name");
        sub->add_option("--bind", oa.binds, "parameter binding name=value (repeatable)");
        sub->fallthrough();
    };
    auto* cmd_no = app.add_subcommand("normal-order", "print the normal-ordered form");
    operator_opts(cmd_no, false);
    auto* cmd_cl = app.add_subcommand("classify", "exact/quasi-exact solvability report");
    operator_opts(cmd_cl, true);
    cmd_cl->add_option("--nmax", nmax, "largest degree scanned");
    auto* cmd_sp = app.add_subcommand("spectrum", "spectrum on an invariant polynomial sector");
    operator_opts(cmd_sp, true);
    cmd_sp->add_option("--n", n, "sector degree (defaults to the catalog invariant degree)");
    cmd_sp->add_option("--realization", realization, "differential | delta | q | complex")
        ->check(CLI::IsMember({"differential", "delta", "q", "complex"}));
    cmd_sp->add_option("--param", param, "delta or q for lattice realizations");
    cmd_sp->add_option("--fiber", fiber, "vacuum degree m for the complex plane");
    auto* cmd_is = app.add_subcommand("isospectral", "compare characteristic polynomials across realizations");
    operator_opts(cmd_is, true);
    cmd_is->add_option("--n", n, "sector degree (defaults to the catalog invariant degree)");
    auto* cmd_ca = app.add_subcommand("catalog", "list catalog operators and their parameters");
    cmd_ca->fallthrough();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "fockspec: " << e.what() << "\n";
        return usage;
    }

    std::string command = app.get_subcommands().front()->get_name();
    Json doc;
    doc["command"] = command;
    doc["config"] = config_json(cfg);
    Json diagnostics = Json::array();
    int code = ok;
    try {
        if (command == "catalog") {
            doc["result"] = catalog_cmd();
        } else {
            Resolved r = resolve(oa, cfg, diagnostics);
            doc["operator"] = r.json;
            if (command == "normal-order")
                doc["result"] = normal_order(r);
            else if (command == "classify")
                doc["result"] = classify_cmd(r, nmax, cfg, diagnostics);
            else if (command == "spectrum")
                doc["result"] = spectrum_cmd(r, degree_for(r, n), realization_from(realization, param), fiber, cfg);
            else
                doc["result"] = isospectral_cmd(r, degree_for(r, n), cfg);
        }
    } catch (const Failure& f) {
        code = f.code;
        Json d{{"severity", "error"}, {"kind", f.code == binding ? "binding" : "usage"}, {"message", f.message}};
        d.update(f.detail);
        diagnostics.push_back(std::move(d));
    } catch (const ParseError& e) {
        code = usage;
        diagnostics.push_back({{"severity", "error"}, {"kind", "parse"}, {"message", e.what()}, {"position", e.position}});
    } catch (const BindingError& e) {
        code = binding;
        diagnostics.push_back({{"severity", "error"}, {"kind", "binding"}, {"message", e.what()}});
    } catch (const ConstraintViolation& e) {
        code = binding;
        diagnostics.push_back({{"severity", "error"}, {"kind", "constraint"}, {"message", e.what()},
                               {"residual", to_string(e.residual)}});
    } catch (const LeakageError& e) {
        code = leakage;
        diagnostics.push_back({{"severity", "error"}, {"kind", "leakage"}, {"message", e.what()},
                               {"witness", {{"column", e.column}, {"overflow", overflow_json(e.overflow)}}}});
    } catch (const NumericNonConvergence& e) {
        code = nonconvergence;
        Json partial = Json::array();
        for (const auto& p : e.partial) partial.push_back(eigenvalue_json(p));
        diagnostics.push_back({{"severity", "error"}, {"kind", "nonconvergence"}, {"message", e.what()}, {"partial", partial}});
    } catch (const DegreeOverflow& e) {
        code = usage;
        diagnostics.push_back({{"severity", "error"}, {"kind", "degree_overflow"}, {"message", e.what()}});
    } catch (const std::invalid_argument& e) {
        code = usage;
        diagnostics.push_back({{"severity", "error"}, {"kind", "usage"}, {"message", e.what()}});
    }
    if (code != ok) {
        doc["result"] = nullptr;
        err << "fockspec: " << diagnostics.back()["message"].get<std::string>() << "\n";
    }
    doc["diagnostics"] = diagnostics;

    if (cfg.format == "json") {
        out << doc.dump(2) << "\n";
    } else if (code == ok) {
        render_text(command, doc, out);
    }
    return code;
}

}  // namespace fockspec::cli

#endif  // FOCKSPEC_TOOLS_CLI_HPP
