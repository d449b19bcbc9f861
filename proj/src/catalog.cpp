#include "invcnx/catalog.hpp"

#include <json.hpp>

#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "catalog_data.hpp"
#include "invcnx/errors.hpp"
#include "invcnx/fiber.hpp"

namespace invcnx {

namespace {

using nlohmann::json;

const json& catalog_json() {
    static const json data = json::parse(detail::kCatalogJson);
    return data;
}

const json& case_entry(int id) {
    for (const auto& c : catalog_json().at("cases"))
        if (c.at("id").get<int>() == id) return c;
    throw UnknownCase("no case " + std::to_string(id) + " in the catalog (ids 1..28)");
}

const json& instance_entry(const json& c, std::optional<int> r) {
    const auto& list = c.at("instances");
    if (!r) return list.front();
    for (const auto& inst : list)
        if (!inst.at("r").is_null() && inst.at("r").get<int>() == *r) return inst;
    throw UnknownCase("case " + std::to_string(c.at("id").get<int>()) + " has no instance with r = " +
                      std::to_string(*r));
}

std::vector<std::string> strings(const json& j) {
    std::vector<std::string> out;
    for (const auto& s : j) out.push_back(s.get<std::string>());
    return out;
}

ParamBindings bindings_of(const json& j) {
    ParamBindings out;
    for (const auto& [k, v] : j.items()) out[k] = parse_rational(v.get<std::string>());
    return out;
}

Expectation expectation_of(const json& j) {
    static const std::map<std::string, Expectation::Status> kStatus{{"unique", Expectation::Status::Unique},
                                                                    {"empty", Expectation::Status::Empty},
                                                                    {"dim", Expectation::Status::Dim},
                                                                    {"characterized", Expectation::Status::Characterized},
                                                                    {"none", Expectation::Status::None}};
    Expectation e;
    e.status = kStatus.at(j.at("status").get<std::string>());
    if (j.contains("dimension")) e.dimension = j.at("dimension").get<std::size_t>();
    if (j.contains("fixture")) e.fixture = j.at("fixture").get<std::string>();
    if (j.contains("family")) e.family = strings(j.at("family"));
    if (j.contains("notes")) e.notes = strings(j.at("notes"));
    return e;
}

AnsatzProfile profile_of(const json& inst) {
    AnsatzProfile p;
    if (!inst.contains("profile")) return p;
    const auto& j = inst.at("profile");
    const std::string kind = j.value("kind", "auto");
    if (kind == "mixed") p.kind = AnsatzProfile::Kind::Mixed;
    else if (kind == "constants") p.kind = AnsatzProfile::Kind::Constants;
    else if (kind == "laurent-y") p.kind = AnsatzProfile::Kind::LaurentY;
    else if (kind == "laurent-x") p.kind = AnsatzProfile::Kind::LaurentX;
    const std::string atom = j.value("atom", "x-y");
    p.mixed_atom = atom == "sphere" ? Atom::Sphere : Atom::XMinusY;
    return p;
}

std::string status_of(const SolutionSpace& s) {
    if (s.empty) return "empty";
    if (s.dimension() == 0) return "unique";
    return "dim(" + std::to_string(s.dimension()) + ")";
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

std::string r_prefix(std::optional<int> r) { return r ? "r=" + std::to_string(*r) + ": " : ""; }

// Compares a computed space with the expectation; appends notes on mismatch.
bool matches(const CaseSpec& c, const Expectation& e, const SolutionSpace& s, std::vector<std::string>& notes) {
    switch (e.status) {
        case Expectation::Status::None: return true;
        case Expectation::Status::Characterized: return true;
        case Expectation::Status::Empty:
            if (!s.empty) return false;
            if (!s.certificate) {
                notes.push_back("empty without certificate");
                return false;
            }
            return true;
        case Expectation::Status::Unique:
        case Expectation::Status::Dim: {
            const std::size_t want = e.status == Expectation::Status::Unique ? 0 : e.dimension;
            if (s.empty || s.dimension() != want) return false;
            if (!e.fixture) return true;
            Christoffel f = fixture_symbols(c, e);
            bool ok = e.status == Expectation::Status::Unique ? s.particular == f : s.contains(f);
            if (!ok) notes.push_back("published closed form is not in the computed space");
            return ok;
        }
    }
    return false;
}

bool same_outcome(const Expectation& e, bool empty, std::size_t dim) {
    switch (e.status) {
        case Expectation::Status::Empty: return empty;
        case Expectation::Status::Unique: return !empty && dim == 0;
        case Expectation::Status::Dim: return !empty && dim == e.dimension;
        default: return true;
    }
}

}  // namespace

const std::string& catalog_text() {
    static const std::string text = detail::kCatalogJson;
    return text;
}

Rational parse_rational(const std::string& text) {
    static const std::regex re(R"(\s*(-?\d+)(?:\s*/\s*(\d+))?\s*)");
    std::smatch m;
    if (!std::regex_match(text, m, re)) throw ParseError("not a rational number: '" + text + "'");
    Rational q(m[1].str() + (m[2].matched ? "/" + m[2].str() : ""));
    if (m[2].matched && q.get_den() == 0) throw ParseError("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

std::string to_string(const Expectation& e) {
    switch (e.status) {
        case Expectation::Status::Unique: return "unique";
        case Expectation::Status::Empty: return "empty";
        case Expectation::Status::Dim: return "dim(" + std::to_string(e.dimension) + ")";
        case Expectation::Status::Characterized: return "characterized";
        case Expectation::Status::None: return "no expectation";
    }
    return "";
}

std::vector<int> case_r_values(int id) {
    std::vector<int> out;
    for (const auto& inst : case_entry(id).at("instances")) out.push_back(inst.at("r").is_null() ? 0 : inst.at("r").get<int>());
    return out;
}

bool constraints_hold(const std::vector<std::string>& constraints, const ParamBindings& params) {
    static const std::regex re(R"(\s*(\w+)\s*(>=|<=|!=|>|<|=)\s*(\S+)\s*)");
    for (const auto& text : constraints) {
        std::smatch m;
        if (!std::regex_match(text, m, re)) throw ParseError("malformed constraint '" + text + "'");
        auto it = params.find(m[1].str());
        if (it == params.end()) continue;
        const Rational& v = it->second;
        const Rational bound = parse_rational(m[3].str());
        const std::string op = m[2].str();
        bool ok = op == ">=" ? v >= bound
                  : op == "<=" ? v <= bound
                  : op == ">"  ? v > bound
                  : op == "<"  ? v < bound
                  : op == "!=" ? v != bound
                               : v == bound;
        if (!ok) return false;
    }
    return true;
}

CaseSpec get_case(int id, const ParamBindings& params, std::optional<int> r) {
    const json& c = case_entry(id);
    const json& inst = instance_entry(c, r);
    CaseSpec s;
    s.id = id;
    if (!inst.at("r").is_null()) s.r = inst.at("r").get<int>();
    s.table = c.at("table").get<std::string>();
    s.structure = c.at("structure").get<std::string>();
    s.geometry = c.value("geometry", "");
    s.surface = c.value("surface", "");
    s.connections = c.value("connections", "");
    s.params = strings(c.at("params"));
    s.constraints = strings(c.at("constraints"));
    s.notes = strings(c.at("notes"));
    s.transitive = c.at("transitive").get<bool>();
    s.primitive = c.at("primitive").get<bool>();

    const std::set<std::string> declared(s.params.begin(), s.params.end());
    for (const auto& [name, value] : params)
        if (!declared.count(name)) throw UnknownParameter("case " + std::to_string(id) + " has no parameter '" + name + "'");
    if (!constraints_hold(s.constraints, params))
        throw ConstraintViolated("case " + std::to_string(id) + " requires " + join(s.constraints, ", "));
    s.bindings = params;

    LieAlgebraAction g;
    for (const auto& text : inst.at("generators")) g.generators.push_back(parse_vector_field(text.get<std::string>(), declared));
    g.params = s.params;
    g.constraints = s.constraints;
    s.action = g.substitute(params);
    s.profile = profile_of(inst);
    for (const auto& p : inst.at("base_points"))
        s.base_points.push_back(Point{parse_rational(p.at(0).get<std::string>()), parse_rational(p.at(1).get<std::string>())});
    if (inst.contains("samples"))
        for (const auto& b : inst.at("samples")) s.samples.push_back(bindings_of(b));
    if (inst.contains("xi")) s.xi = parse_expr(inst.at("xi").get<std::string>(), declared);
    if (inst.contains("characterization")) {
        s.valid_samples = strings(inst.at("characterization").at("valid"));
        s.invalid_samples = strings(inst.at("characterization").at("invalid"));
    }
    return s;
}

Expectation expected_result(int id, const ParamBindings& params, std::optional<int> r) {
    const json& exp = instance_entry(case_entry(id), r).at("expectation");
    if (exp.contains("regimes"))
        for (const auto& reg : exp.at("regimes")) {
            ParamBindings when = bindings_of(reg.at("when"));
            bool all = true;
            for (const auto& [k, v] : when) {
                auto it = params.find(k);
                all = all && it != params.end() && it->second == v;
            }
            if (all) return expectation_of(reg);
        }
    return expectation_of(exp);
}

Christoffel fixture_symbols(const CaseSpec& c, const Expectation& e) {
    std::set<std::string> names(c.params.begin(), c.params.end());
    names.insert(e.family.begin(), e.family.end());
    return parse_christoffel(e.fixture.value_or(""), names).substitute(c.bindings);
}

std::string describe_params(const CaseSpec& c) {
    std::vector<std::string> parts;
    for (const auto& p : c.params) {
        auto it = c.bindings.find(p);
        parts.push_back(p + "=" + (it == c.bindings.end() ? std::string("symbolic") : it->second.get_str()));
    }
    return join(parts, ", ");
}

bool Report::all_pass() const {
    for (const auto& r : rows)
        if (!r.pass) return false;
    return true;
}

ReportRow check_case(int id) {
    ReportRow row;
    row.id = id;
    row.pass = true;
    std::vector<std::string> expected, computed;
    for (int rv : case_r_values(id)) {
        const std::optional<int> r = rv > 0 ? std::optional<int>(rv) : std::nullopt;
        CaseSpec base = get_case(id, {}, r);
        row.structure = base.structure;
        std::vector<ParamBindings> configs{{}};
        if (!base.params.empty()) configs.insert(configs.end(), base.samples.begin(), base.samples.end());
        for (const auto& cfg : configs) {
            CaseSpec c = get_case(id, cfg, r);
            Expectation e = expected_result(id, cfg, r);
            InstanceCheck ch;
            ch.r = r;
            ch.params = describe_params(c);
            ch.expected = to_string(e);
            try {
                if (!structure_constants(c.action)) {
                    ch.notes.push_back("generators are not bracket-closed");
                    throw Error("closure");
                }
                SolutionSpace s = invariant_connection_space(c.action, c.profile);
                ch.computed = status_of(s);
                bool ok = matches(c, e, s, ch.notes);
                if (s.certificate) ch.notes.push_back(s.certificate->to_string(&c.action));
                if (e.status == Expectation::Status::Characterized) {
                    ch.computed = "characterized (infinite-dimensional; windowed solve " + status_of(s) + ")";
                    for (const auto& text : c.valid_samples)
                        ok = ok && verify_characterization(id, c.action, c.xi.value_or(Expr()),
                                                           parse_christoffel(text, {}))
                                       .ok();
                    for (const auto& text : c.invalid_samples)
                        ok = ok && !verify_characterization(id, c.action, c.xi.value_or(Expr()),
                                                            parse_christoffel(text, {}))
                                        .ok();
                    if (!ok) ch.notes.push_back("characterization samples disagree");
                }
                if (!c.action.params.empty()) {
                    std::set<std::string> seen;
                    for (const auto& ev : s.exceptional) {
                        std::string where = ev.param + " = " + ev.value.get_str();
                        seen.insert(where);
                        std::string what = ev.empty ? "empty" : "dimension " + std::to_string(ev.dimension);
                        if (!constraints_hold(c.constraints, {{ev.param, ev.value}})) {
                            ch.notes.push_back("pivot degenerates at " + where + " (" + what + ", outside constraints)");
                            continue;
                        }
                        Expectation at = expected_result(id, {{ev.param, ev.value}}, r);
                        bool covered = same_outcome(at, ev.empty, ev.dimension);
                        ch.notes.push_back("pivot degenerates at " + where + " (" + what + ")" +
                                           (covered ? "" : ", published verdict is " + to_string(at)));
                        ok = ok && covered;
                    }
                    const json& exp = instance_entry(case_entry(id), r).at("expectation");
                    if (exp.contains("regimes"))
                        for (const auto& reg : exp.at("regimes"))
                            for (const auto& [k, v] : reg.at("when").items())
                                if (!seen.count(k + " = " + parse_rational(v.get<std::string>()).get_str())) {
                                    ch.notes.push_back("no pivot degeneration at " + k + " = " + v.get<std::string>());
                                    ok = false;
                                }
                }
                if (c.transitive) {
                    for (const auto& p : c.base_points) {
                        FiberSpace f = fiber_fixed_space(c.action, p);
                        ch.fiber_dimensions.push_back(f.empty ? 0 : f.dimension());
                        bool agree = f.routes_agree && f.empty == s.empty && f.dimension() == s.dimension();
                        if (agree && !s.empty) agree = f.contains(fiber_value(s.particular, p));
                        if (!agree) ch.notes.push_back("fiber method disagrees at (" + p.x.get_str() + ", " + p.y.get_str() + ")");
                        ch.fiber_agrees = ch.fiber_agrees && agree;
                    }
                }
                ch.pass = ok && ch.fiber_agrees;
            } catch (const Error& err) {
                ch.computed = "error";
                ch.notes.push_back(err.what());
                ch.pass = false;
            }
            if (&cfg == &configs.front()) {
                expected.push_back(r_prefix(r) + ch.expected);
                computed.push_back(r_prefix(r) + ch.computed);
            }
            for (const auto& n : ch.notes) {
                std::string where = ch.params.empty() ? "" : ch.params + ": ";
                row.notes.push_back(r_prefix(r) + where + n);
            }
            row.pass = row.pass && ch.pass;
            row.checks.push_back(std::move(ch));
        }
    }
    row.expected = join(expected, "; ");
    row.computed = join(computed, "; ");
    return row;
}

Report run_full_report() {
    Report rep;
    for (const auto& c : catalog_json().at("cases")) rep.rows.push_back(check_case(c.at("id").get<int>()));
    return rep;
}

}  // namespace invcnx
