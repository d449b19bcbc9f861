#pragma once

#include <optional>
#include <string>
#include <vector>

#include "invcnx/solver.hpp"

namespace invcnx {

/// Published verdict for one case instance and parameter regime.
struct Expectation {
    enum class Status { Unique, Empty, Dim, Characterized, None };
    Status status = Status::None;
    std::size_t dimension = 0;
    /// Christoffel fixture text; empty text is the standard flat connection.
    std::optional<std::string> fixture;
    /// Free constants of a fixture describing a family.
    std::vector<std::string> family;
    std::vector<std::string> notes;
};

std::string to_string(const Expectation& e);

/// One case of the classification, instantiated at given parameter values.
struct CaseSpec {
    int id = 0;
    std::optional<int> r;
    std::string table;
    std::string structure;
    std::string geometry;
    std::string surface;
    std::string connections;
    std::vector<std::string> params;  // declared parameters
    std::vector<std::string> constraints;
    std::vector<std::string> notes;
    bool transitive = false;
    bool primitive = false;
    ParamBindings bindings;
    /// Generators with bound parameters substituted; unbound ones remain
    /// symbolic and are listed in action.params.
    LieAlgebraAction action;
    AnsatzProfile profile;
    std::vector<Point> base_points;
    std::vector<ParamBindings> samples;
    /// Representative function for the non-transitive families.
    std::optional<Expr> xi;
    /// Fixtures for characterized cases: members and non-members.
    std::vector<std::string> valid_samples;
    std::vector<std::string> invalid_samples;
};

/// "3", "-1/2". Throws ParseError.
Rational parse_rational(const std::string& text);

/// Encoded r values of a case, or {0} when the case has no r.
std::vector<int> case_r_values(int id);

/// Throws UnknownCase (bad id or r), UnknownParameter, ConstraintViolated.
CaseSpec get_case(int id, const ParamBindings& params = {}, std::optional<int> r = {});

/// Expectation for the given parameters: a regime whose bindings all match
/// wins, otherwise the generic one. Throws UnknownCase.
Expectation expected_result(int id, const ParamBindings& params = {}, std::optional<int> r = {});

/// Whether the bindings satisfy constraints of the form "name op value"
/// (op one of >=, <=, >, <, !=, =). Unbound parameters satisfy everything.
bool constraints_hold(const std::vector<std::string>& constraints, const ParamBindings& params);

/// Fixture of `e` as symbols, with the case's bound parameters substituted.
Christoffel fixture_symbols(const CaseSpec& c, const Expectation& e);

/// "alpha=1/3, beta=symbolic" style description of the bindings of `c`.
std::string describe_params(const CaseSpec& c);

/// Outcome of running one parameter configuration of one case instance.
struct InstanceCheck {
    std::optional<int> r;
    std::string params;
    std::string expected;
    std::string computed;
    std::vector<std::size_t> fiber_dimensions;
    bool fiber_agrees = true;
    bool pass = false;
    std::vector<std::string> notes;
};

struct ReportRow {
    int id = 0;
    std::string structure;
    std::string expected;
    std::string computed;
    bool pass = false;
    std::vector<InstanceCheck> checks;
    std::vector<std::string> notes;
};

struct Report {
    std::vector<ReportRow> rows;
    bool all_pass() const;
};

/// Solver, fiber method and expectation comparison for every instance and
/// parameter configuration of one case.
ReportRow check_case(int id);
Report run_full_report();

/// The catalog data file as shipped.
const std::string& catalog_text();

}  // namespace invcnx
