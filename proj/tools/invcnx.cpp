#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "invcnx/catalog.hpp"
#include "invcnx/errors.hpp"
#include "invcnx/fiber.hpp"

using namespace invcnx;
using ordered_json = nlohmann::ordered_json;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    int case_id = 0;
    std::vector<std::string> params;
    int r = 0;
    std::string fixture;
    int window = 0;
    std::string point;
    std::string format = "json";
};

ParamBindings bindings(const Options& o) {
    ParamBindings out;
    for (const auto& text : o.params) {
        auto eq = text.find('=');
        if (eq == std::string::npos) throw UsageError("--param expects name=value or name=symbolic, got '" + text + "'");
        std::string name = text.substr(0, eq), value = text.substr(eq + 1);
        if (value == "symbolic") continue;
        try {
            out[name] = parse_rational(value);
        } catch (const ParseError&) {
            throw UsageError("--param " + name + ": '" + value + "' is not an exact rational or 'symbolic'");
        }
    }
    return out;
}

std::optional<int> r_of(const Options& o) { return o.r > 0 ? std::optional<int>(o.r) : std::nullopt; }

CaseSpec load_case(const Options& o) {
    if (o.case_id == 0) throw UsageError("--case is required");
    CaseSpec c = get_case(o.case_id, bindings(o), r_of(o));
    if (o.window > 0) c.profile.window = o.window;
    return c;
}

ordered_json christoffel_json(const Christoffel& G) {
    ordered_json j = ordered_json::object();
    for (std::size_t n = 0; n < 8; ++n) j[component_label(n)] = G.t[n].to_string();
    return j;
}

ordered_json fiber_vector_json(const FiberVector& v) {
    ordered_json j = ordered_json::object();
    for (std::size_t n = 0; n < 8; ++n) j[component_label(n)] = v[n].to_string();
    return j;
}

ordered_json case_header(const CaseSpec& c) {
    ordered_json j;
    j["case"] = c.id;
    j["r"] = c.r ? ordered_json(*c.r) : ordered_json(nullptr);
    j["params"] = describe_params(c);
    return j;
}

std::string cell(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '|') out += '\\';
        out += ch;
    }
    return out;
}

std::string point_string(const Point& p) { return "(" + p.x.get_str() + ", " + p.y.get_str() + ")"; }

ordered_json solve_json(const CaseSpec& c, const SolutionSpace& s, const Ansatz& a) {
    ordered_json j = case_header(c);
    j["status"] = s.empty ? "empty" : (s.dimension() == 0 ? "unique" : "dim");
    j["dimension"] = s.empty ? ordered_json(nullptr) : ordered_json(s.dimension());
    j["particular"] = s.empty ? ordered_json(nullptr) : christoffel_json(s.particular);
    ordered_json basis = ordered_json::array();
    for (const auto& b : s.basis) basis.push_back(christoffel_json(Christoffel{b.t}));
    j["basis"] = basis;
    ordered_json piv = ordered_json::array();
    for (const auto& p : s.pivot_denominators) piv.push_back(p.to_string());
    j["pivot_denominators"] = piv;
    j["domain_notes"] = s.domain_notes;
    ordered_json exc = ordered_json::array();
    for (const auto& e : s.exceptional) {
        ordered_json ej;
        ej["param"] = e.param;
        ej["value"] = e.value.get_str();
        ej["admissible"] = constraints_hold(c.constraints, {{e.param, e.value}});
        ej["status"] = e.empty ? "empty" : (e.dimension == 0 ? "unique" : "dim");
        ej["dimension"] = e.empty ? ordered_json(nullptr) : ordered_json(e.dimension);
        exc.push_back(ej);
    }
    j["exceptional"] = exc;
    j["certificate"] = s.certificate ? ordered_json(s.certificate->to_string(&c.action)) : ordered_json(nullptr);
    j["ansatz"] = a.description;
    j["expected"] = to_string(expected_result(c.id, c.bindings, c.r));
    return j;
}

std::string solve_markdown(const CaseSpec& c, const SolutionSpace& s) {
    std::ostringstream os;
    os << "# Case " << c.id << (c.r ? " (r = " + std::to_string(*c.r) + ")" : "") << "\n\n";
    if (!c.params.empty()) os << "Parameters: " << describe_params(c) << "\n\n";
    os << "Generators:\n\n";
    for (const auto& X : c.action.generators) os << "- " << X.to_string() << "\n";
    os << "\n";
    if (s.empty) {
        os << "No invariant connection.\n";
        if (s.certificate) os << "\nCertificate: " << s.certificate->to_string(&c.action) << "\n";
        return os.str();
    }
    os << "Dimension: " << s.dimension() << "\n\nParticular solution:\n\n";
    for (std::size_t n = 0; n < 8; ++n) os << "    " << component_label(n) << " = " << s.particular.t[n].to_string() << "\n";
    for (std::size_t b = 0; b < s.basis.size(); ++b) {
        os << "\nDirection " << b + 1 << ":\n\n";
        for (std::size_t n = 0; n < 8; ++n)
            if (!s.basis[b].t[n].is_zero())
                os << "    " << component_label(n) << " = " << s.basis[b].t[n].to_string() << "\n";
    }
    for (const auto& d : s.domain_notes) os << "\nDomain: " << d << "\n";
    for (const auto& e : s.exceptional)
        os << "\nAt " << e.param << " = " << e.value.get_str() << ": "
           << (e.empty ? std::string("empty") : "dimension " + std::to_string(e.dimension)) << "\n";
    return os.str();
}

int cmd_solve(const Options& o) {
    CaseSpec c = load_case(o);
    Ansatz a = build_ansatz(c.action, c.profile);
    SolutionSpace s = invariant_connection_space(c.action, c.profile);
    if (o.format == "json") std::cout << solve_json(c, s, a).dump(2) << "\n";
    else std::cout << solve_markdown(c, s);
    return 0;
}

std::filesystem::path find_fixture(const std::string& name) {
    std::filesystem::path p(name);
    if (std::filesystem::exists(p)) return p;
    std::filesystem::path shipped = std::filesystem::path(INVCNX_DATA_DIR) / "fixtures" / name;
    if (std::filesystem::exists(shipped)) return shipped;
    throw UsageError("fixture not found: " + name);
}

int cmd_verify(const Options& o) {
    CaseSpec c = load_case(o);
    if (o.fixture.empty()) throw UsageError("verify needs --fixture");
    std::ifstream in(find_fixture(o.fixture));
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    std::set<std::string> names(c.params.begin(), c.params.end());
    static const std::regex constants(R"(#\s*constants:\s*([^\n]*))");
    std::smatch m;
    if (std::regex_search(text, m, constants)) {
        std::istringstream ss(m[1].str());
        for (std::string w; ss >> w;) names.insert(w);
    }
    Christoffel G = parse_christoffel(text, names).substitute(c.bindings);
    InvarianceReport rep = verify_invariance(c.action, G);
    if (o.format == "json") {
        ordered_json j = case_header(c);
        j["fixture"] = o.fixture;
        j["invariant"] = rep.invariant();
        ordered_json res = ordered_json::array();
        for (const auto& r : rep.residuals) {
            ordered_json rj;
            rj["generator"] = c.action.generators[r.generator].to_string();
            rj["component"] = component_label(r.component);
            rj["value"] = r.value.to_string();
            res.push_back(rj);
        }
        j["residuals"] = res;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "Case " << c.id << ", fixture " << o.fixture << ": "
                  << (rep.invariant() ? "pass (invariant)" : "fail") << "\n";
        if (!rep.invariant()) std::cout << rep.to_string(c.action);
    }
    return rep.invariant() ? 0 : 2;
}

std::vector<Point> fiber_points(const Options& o, const CaseSpec& c) {
    if (o.point.empty()) {
        if (c.base_points.empty()) throw UsageError("case " + std::to_string(c.id) + " has no base points; pass --point x,y");
        return c.base_points;
    }
    auto comma = o.point.find(',');
    if (comma == std::string::npos) throw UsageError("--point expects x,y");
    try {
        return {Point{parse_rational(o.point.substr(0, comma)), parse_rational(o.point.substr(comma + 1))}};
    } catch (const ParseError&) {
        throw UsageError("--point expects exact rationals x,y");
    }
}

int cmd_fiber(const Options& o) {
    CaseSpec c = load_case(o);
    SolutionSpace s = invariant_connection_space(c.action, c.profile);
    ordered_json j = case_header(c);
    j["solver_status"] = s.empty ? "empty" : (s.dimension() == 0 ? "unique" : "dim");
    j["solver_dimension"] = s.empty ? ordered_json(nullptr) : ordered_json(s.dimension());
    ordered_json pts = ordered_json::array();
    std::ostringstream md;
    md << "# Fiber method, case " << c.id << "\n\n| point | isotropy | status | dimension | linear part | routes agree |\n"
       << "|---|---|---|---|---|---|\n";
    for (const Point& p : fiber_points(o, c)) {
        ordered_json pj;
        pj["point"] = {p.x.get_str(), p.y.get_str()};
        pj["transitive"] = is_transitive_at(c.action, p);
        ordered_json iso = ordered_json::array();
        for (const auto& X : isotropy_basis(c.action, p)) iso.push_back(X.to_string());
        pj["isotropy"] = iso;
        if (!pj["transitive"].get<bool>()) {
            pts.push_back(pj);
            md << "| " << point_string(p) << " | - | not transitive | - | - | - |\n";
            continue;
        }
        FiberSpace f = fiber_fixed_space(c.action, p);
        pj["status"] = f.empty ? "empty" : (f.dimension() == 0 ? "unique" : "dim");
        pj["dimension"] = f.empty ? ordered_json(nullptr) : ordered_json(f.dimension());
        pj["particular"] = f.empty ? ordered_json(nullptr) : fiber_vector_json(f.particular.values);
        ordered_json basis = ordered_json::array();
        for (const auto& b : f.basis) basis.push_back(fiber_vector_json(b));
        pj["basis"] = basis;
        pj["linear_dimension"] = f.linear_dimension;
        pj["routes_agree"] = f.routes_agree;
        pts.push_back(pj);
        md << "| " << point_string(p) << " | " << f.isotropy_dimension << " | "
           << (f.empty ? "empty" : f.dimension() == 0 ? "unique" : "dim") << " | "
           << (f.empty ? std::string("-") : std::to_string(f.dimension())) << " | " << f.linear_dimension << " | "
           << (f.routes_agree ? "yes" : "no") << " |\n";
    }
    j["points"] = pts;
    if (o.format == "json") std::cout << j.dump(2) << "\n";
    else std::cout << md.str();
    return 0;
}

int cmd_bracket(const Options& o) {
    CaseSpec c = load_case(o);
    const auto& gens = c.action.generators;
    auto sc = structure_constants(c.action);
    ordered_json j = case_header(c);
    ordered_json g = ordered_json::array();
    for (const auto& X : gens) g.push_back(X.to_string());
    j["generators"] = g;
    j["closed"] = sc.has_value();
    ordered_json br = ordered_json::array();
    std::ostringstream md;
    md << "# Brackets, case " << c.id << "\n\n";
    for (std::size_t a = 0; a < gens.size(); ++a)
        for (std::size_t b = a + 1; b < gens.size(); ++b) {
            ordered_json e;
            e["a"] = a + 1;
            e["b"] = b + 1;
            VectorField v = lie_bracket(gens[a], gens[b]);
            e["bracket"] = v.to_string();
            if (sc) {
                ordered_json co = ordered_json::array();
                for (const auto& q : (*sc)[a][b]) co.push_back(q.to_string());
                e["coefficients"] = co;
            }
            md << "- [A" << a + 1 << ", A" << b + 1 << "] = " << v.to_string() << "\n";
            br.push_back(e);
        }
    j["brackets"] = br;
    if (o.format == "json") std::cout << j.dump(2) << "\n";
    else std::cout << md.str() << "\nClosed: " << (sc ? "yes" : "no") << "\n";
    return sc ? 0 : 2;
}

int cmd_report(const Options& o) {
    Report rep;
    if (o.case_id) rep.rows.push_back(check_case(o.case_id));
    else rep = run_full_report();
    if (o.format == "json") {
        ordered_json rows = ordered_json::array();
        for (const auto& r : rep.rows) {
            ordered_json j;
            j["case"] = r.id;
            j["structure"] = r.structure;
            j["expected"] = r.expected;
            j["computed"] = r.computed;
            bool fiber = true;
            ordered_json checks = ordered_json::array();
            for (const auto& ch : r.checks) {
                ordered_json cj;
                cj["r"] = ch.r ? ordered_json(*ch.r) : ordered_json(nullptr);
                cj["params"] = ch.params;
                cj["expected"] = ch.expected;
                cj["computed"] = ch.computed;
                cj["fiber_dimensions"] = ch.fiber_dimensions;
                cj["fiber_agrees"] = ch.fiber_agrees;
                cj["pass"] = ch.pass;
                checks.push_back(cj);
                fiber = fiber && ch.fiber_agrees;
            }
            j["fiber_agrees"] = fiber;
            j["verdict"] = r.pass ? "pass" : "fail";
            j["notes"] = r.notes;
            j["checks"] = checks;
            rows.push_back(j);
        }
        ordered_json out;
        out["rows"] = rows;
        out["all_pass"] = rep.all_pass();
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "| case | structure | expected | computed | fiber | verdict |\n|---|---|---|---|---|---|\n";
        for (const auto& r : rep.rows) {
            bool fiber = true;
            for (const auto& ch : r.checks) fiber = fiber && ch.fiber_agrees;
            std::cout << "| " << r.id << " | " << cell(r.structure) << " | " << cell(r.expected) << " | " << cell(r.computed) << " | "
                      << (fiber ? "agrees" : "disagrees") << " | " << (r.pass ? "pass" : "FAIL") << " |\n";
        }
        std::cout << "\n";
        for (const auto& r : rep.rows)
            for (const auto& n : r.notes) std::cout << "- case " << r.id << ": " << n << "\n";
    }
    return rep.all_pass() ? 0 : 2;
}

int cmd_catalog(const Options& o) {
    auto data = ordered_json::parse(catalog_text());
    if (o.case_id) {
        bool found = false;
        for (const auto& c : data.at("cases"))
            if (c.at("id").get<int>() == o.case_id) {
                data = c;
                found = true;
            }
        if (!found) throw UnknownCase("no case " + std::to_string(o.case_id));
    }
    if (o.format == "json") {
        std::cout << data.dump(2) << "\n";
        return 0;
    }
    std::cout << "| case | structure | r | generators | parameters | expectation |\n|---|---|---|---|---|---|\n";
    const auto& list = o.case_id ? ordered_json::array({data}) : data.at("cases");
    for (const auto& c : list)
        for (const auto& inst : c.at("instances")) {
            std::string gens;
            for (const auto& g : inst.at("generators")) gens += (gens.empty() ? "" : ", ") + g.get<std::string>();
            std::string params;
            for (const auto& p : c.at("params")) params += (params.empty() ? "" : ", ") + p.get<std::string>();
            for (const auto& k : c.at("constraints")) params += "; " + k.get<std::string>();
            std::cout << "| " << c.at("id").get<int>() << " | " << cell(c.at("structure").get<std::string>()) << " | "
                      << (inst.at("r").is_null() ? std::string("-") : std::to_string(inst.at("r").get<int>())) << " | "
                      << cell(gens) << " | " << cell(params) << " | "
                      << to_string(expected_result(c.at("id").get<int>(), {},
                                                   inst.at("r").is_null() ? std::nullopt
                                                                          : std::optional<int>(inst.at("r").get<int>())))
                      << " |\n";
        }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Invariant affine connections of Lie algebras of vector fields on the plane"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* sub, bool needs_case) {
        auto* opt = sub->add_option("--case", o.case_id, "case id (1..28)");
        if (needs_case) opt->required();
        sub->add_option("--param", o.params, "parameter binding name=value or name=symbolic");
        sub->add_option("--r", o.r, "r value for cases with an r family")->check(CLI::PositiveNumber);
        sub->add_option("--window", o.window, "ansatz exponent window")->check(CLI::PositiveNumber);
        sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "markdown"}));
    };
    auto* solve = app.add_subcommand("solve", "solve for the invariant connections of a case");
    common(solve, true);
    auto* verify = app.add_subcommand("verify", "check that a Christoffel fixture is invariant");
    common(verify, true);
    verify->add_option("--fixture", o.fixture, "fixture file (or name under the shipped fixtures)")->required();
    auto* fiber = app.add_subcommand("fiber", "isotropy fixed-point method at base points");
    common(fiber, true);
    fiber->add_option("--point", o.point, "base point x,y (default: the case's base points)");
    auto* bracket = app.add_subcommand("bracket", "brackets and structure constants");
    common(bracket, true);
    auto* report = app.add_subcommand("report", "compare every case with its published verdict");
    common(report, false);
    auto* catalog = app.add_subcommand("catalog", "dump the case catalog");
    common(catalog, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    try {
        if (*solve) return cmd_solve(o);
        if (*verify) return cmd_verify(o);
        if (*fiber) return cmd_fiber(o);
        if (*bracket) return cmd_bracket(o);
        if (*report) return cmd_report(o);
        if (*catalog) return cmd_catalog(o);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const UnknownCase& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const UnknownParameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ConstraintViolated& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
