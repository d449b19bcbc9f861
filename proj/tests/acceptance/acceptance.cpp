#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "invcnx/catalog.hpp"
#include "invcnx/errors.hpp"
#include "invcnx/fiber.hpp"
#include "invcnx/solver.hpp"
#include "properties.hpp"

using namespace invcnx;

namespace {

struct Criterion {
    bool pass = true;
    std::vector<std::string> details;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        details.push_back(std::string(ok ? "ok    " : "FAIL  ") + what);
    }
};

std::optional<int> opt_r(int r) { return r > 0 ? std::optional<int>(r) : std::nullopt; }

std::string verdict(const SolutionSpace& s) {
    return s.empty ? std::string("empty") : s.dimension() == 0 ? std::string("unique") : "dim " + std::to_string(s.dimension());
}

SolutionSpace solve(int id, const ParamBindings& params = {}, std::optional<int> r = {}) {
    CaseSpec c = get_case(id, params, r);
    return invariant_connection_space(c.action, c.profile);
}

bool all_zero(const Christoffel& g) { return g.is_zero(); }

Expr E(const std::string& s) { return parse_expr(s, {"alpha"}); }

Christoffel published(int id, std::optional<int> r = {}, const ParamBindings& params = {}) {
    CaseSpec c = get_case(id, params, r);
    return fixture_symbols(c, expected_result(id, params, r));
}

ParamBindings zero_family(int id, std::optional<int> r = {}) {
    ParamBindings z;
    for (const auto& name : expected_result(id, {}, r).family) z[name] = 0;
    return z;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1
Criterion case1_determinant_check() {
    Criterion c;
    auto t0 = std::chrono::steady_clock::now();
    ParamScalar det = case1_determinant();
    double t = seconds_since(t0);
    ParamScalar want = parse_scalar("alpha^8 + 12*alpha^6 + 30*alpha^4 + 28*alpha^2 + 9", {"alpha"});
    c.require(det == want, "det = " + det.to_string());
    std::ostringstream os;
    os << "runtime " << std::fixed << std::setprecision(3) << t << " s < 1 s";
    c.require(t < 1.0, os.str());
    return c;
}

// 2
Criterion primitive_cases() {
    Criterion c;
    auto t0 = std::chrono::steady_clock::now();
    for (int id : {1, 4, 5, 6}) {
        SolutionSpace s = solve(id);
        c.require(!s.empty && s.dimension() == 0 && all_zero(s.particular),
                  "case " + std::to_string(id) + ": " + verdict(s) + (all_zero(s.particular) ? ", zero symbols" : ", nonzero symbols"));
    }
    for (int id : {2, 3}) {
        CaseSpec cs = get_case(id);
        SolutionSpace s = solve(id);
        bool ok = !s.empty && s.dimension() == 0 && !all_zero(s.particular) &&
                  verify_invariance(cs.action, s.particular).invariant() && s.particular == published(id);
        c.require(ok, "case " + std::to_string(id) + ": " + verdict(s) + ", invariant nonzero particular equal to the published one");
    }
    for (int id : {7, 8}) {
        SolutionSpace s = solve(id);
        c.require(s.empty, "case " + std::to_string(id) + ": " + verdict(s));
    }
    double t = seconds_since(t0);
    std::ostringstream os;
    os << "runtime " << std::fixed << std::setprecision(3) << t << " s < 5 s";
    c.require(t < 5.0, os.str());
    return c;
}

// 3
Criterion transitive_imprimitive() {
    Criterion c;
    auto t0 = std::chrono::steady_clock::now();

    CaseSpec c12 = get_case(12);
    SolutionSpace s12 = invariant_connection_space(c12.action, c12.profile);
    std::vector<std::string> admissible;
    bool half_dim1 = false;
    for (const auto& e : s12.exceptional)
        if (constraints_hold(c12.constraints, {{e.param, e.value}})) {
            admissible.push_back(e.param + " = " + e.value.get_str());
            half_dim1 = e.value == Rational(1, 2) && !e.empty && e.dimension == 1;
        }
    c.require(!s12.empty && s12.dimension() == 0 && admissible == std::vector<std::string>{"alpha = 1/2"} && half_dim1,
              "case 12 (alpha symbolic): " + verdict(s12) + ", admissible degeneracy at " +
                  (admissible.empty() ? std::string("none") : admissible.front()));

    SolutionSpace h = solve(12, {{"alpha", Rational(1, 2)}});
    bool free_g221 = h.dimension() == 1 && all_zero(h.particular);
    if (free_g221) {
        const EndValuedOneForm& b = h.basis.front();
        for (std::size_t n = 0; n < 8; ++n)
            free_g221 = free_g221 && (n == Christoffel::flat(1, 1, 0) ? b.t[n].is_constant() && !b.t[n].is_zero() : b.t[n].is_zero());
    }
    c.require(free_g221, "case 12 (alpha = 1/2): " + verdict(h) + " spanned by constant G[2][2][1]");

    for (auto [id, r] : std::vector<std::pair<int, int>>{{13, 0}, {24, 1}, {25, 1}, {26, 1}}) {
        SolutionSpace s = solve(id, {}, opt_r(r));
        c.require(!s.empty && s.dimension() == 0 && all_zero(s.particular),
                  "case " + std::to_string(id) + (r ? " (r = 1)" : "") + ": " + verdict(s) + ", standard flat");
    }

    SolutionSpace s17 = solve(17);
    Christoffel want17;
    want17(0, 0, 0) = E("-2/(x-y)");
    want17(1, 1, 1) = E("-2/(y-x)");
    c.require(!s17.empty && s17.dimension() == 0 && s17.particular == want17,
              "case 17: " + verdict(s17) + ", G[1][1][1] = " + s17.particular(0, 0, 0).to_string() +
                  ", G[2][2][2] = " + s17.particular(1, 1, 1).to_string());

    SolutionSpace s18 = solve(18);
    Christoffel pub18 = published(18);
    bool family18 = s18.contains(pub18.substitute({{"a", 1}, {"b", -2}, {"c", Rational(3, 5)}}));
    c.require(s18.dimension() == 3 && s18.particular == pub18.substitute(zero_family(18)) && family18,
              "case 18: " + verdict(s18) + ", particular G[1][2][1] = " + s18.particular(0, 1, 0).to_string() +
                  ", G[2][2][2] = " + s18.particular(1, 1, 1).to_string());

    SolutionSpace s22 = solve(22, {}, 1);
    c.require(s22.dimension() == 8 && !s22.empty, "case 22 (r = 1, alpha symbolic): " + verdict(s22));

    SolutionSpace s23 = solve(23, {}, 1);
    Christoffel pub23 = published(23, 1);
    bool contains_all = s23.contains(pub23.substitute({{"a", 1}, {"b", 2}, {"c", -1}, {"d", 3}}));
    bool contains_b0 = s23.contains(pub23.substitute({{"a", 1}, {"b", 0}, {"c", -1}, {"d", 3}}));
    c.require(!s23.empty && s23.dimension() == 4 && contains_all,
              "case 23 (r = 1, alpha symbolic): " + verdict(s23) + "; published family with b != 0 " +
                  (contains_all ? "contained" : "not contained") + ", with b = 0 " +
                  (contains_b0 ? "contained" : "not contained"));
    if (!contains_all) {
        CaseSpec cs = get_case(23, {}, 1);
        InvarianceReport rep = verify_invariance(cs.action, pub23);
        std::string text = rep.to_string(cs.action);
        while (!text.empty() && text.back() == '\n') text.pop_back();
        c.details.push_back("      residual of the published family: " + text);
    }

    double t = seconds_since(t0);
    std::ostringstream os;
    os << "runtime " << std::fixed << std::setprecision(3) << t << " s < 30 s";
    c.require(t < 30.0, os.str());
    return c;
}

// 4
Criterion emptiness() {
    Criterion c;
    for (auto [id, r] : std::vector<std::pair<int, int>>{{11, 0}, {14, 0}, {15, 0}, {16, 0}, {19, 0},
                                                          {27, 1}, {27, 2}, {28, 1}, {28, 2}}) {
        CaseSpec cs = get_case(id, {}, opt_r(r));
        SolutionSpace s = invariant_connection_space(cs.action, cs.profile);
        std::string label = "case " + std::to_string(id) + (r ? " (r = " + std::to_string(r) + ")" : "") + ": ";
        bool ok = s.empty && s.certificate && !s.certificate->value.is_zero();
        if (ok) {
            c.require(true, label + "empty, " + s.certificate->to_string(&cs.action));
        } else {
            std::string extra;
            if (!s.empty) extra = ", particular satisfies verify_invariance: " +
                                  std::string(verify_invariance(cs.action, s.particular).invariant() ? "yes" : "no");
            c.require(false, label + verdict(s) + extra);
            if (!s.empty)
                for (std::size_t n = 0; n < 8; ++n)
                    if (!s.particular.t[n].is_zero())
                        c.details.push_back("      " + component_label(n) + " = " + s.particular.t[n].to_string());
        }
    }
    return c;
}

// 5
Expr random_function(std::mt19937& rng, Var v) {
    auto q = [&] {
        Rational r(std::uniform_int_distribution<int>(-5, 5)(rng), std::uniform_int_distribution<int>(1, 3)(rng));
        r.canonicalize();
        return Expr(ParamScalar(r));
    };
    Expr t = v == Var::X ? Expr::x() : Expr::y();
    Expr f = q() + q() * t + q() * t.pow(2);
    if (v == Var::Y) f += q() * t.pow(-1);
    else f += q() * Expr::exp_ax(ParamScalar(1));
    return f;
}

Expr nonzero_rational(std::mt19937& rng) {
    int p = std::uniform_int_distribution<int>(1, 5)(rng) * (std::uniform_int_distribution<int>(0, 1)(rng) ? 1 : -1);
    Rational r(p, std::uniform_int_distribution<int>(1, 3)(rng));
    r.canonicalize();
    return Expr(ParamScalar(r));
}

Christoffel valid_sample(int id, std::mt19937& rng) {
    Christoffel g;
    switch (id) {
        case 9:
            for (auto& e : g.t) e = random_function(rng, Var::Y);
            break;
        case 10:
            for (std::size_t n : {Christoffel::flat(0, 1, 0), Christoffel::flat(1, 0, 0), Christoffel::flat(1, 1, 1)})
                g.t[n] = random_function(rng, Var::Y);
            break;
        default: {
            g(0, 0, 0) = random_function(rng, Var::X);
            g(0, 1, 1) = random_function(rng, Var::X);
            if (id == 20) g(0, 0, 1) = random_function(rng, Var::X);
            // G[1][2][2] + G[2][1][2] - G[1][1][1] = -xi''/xi' = -1 for xi = e^x.
            g(1, 0, 1) = g(0, 0, 0) - g(0, 1, 1) - Expr(1);
        }
    }
    return g;
}

Christoffel perturb(int id, Christoffel g, std::mt19937& rng) {
    const int kind = std::uniform_int_distribution<int>(0, 1)(rng);
    const std::size_t slot = static_cast<std::size_t>(std::uniform_int_distribution<int>(0, 7)(rng));
    switch (id) {
        case 9: g.t[slot] += nonzero_rational(rng) * Expr::x(); break;
        case 10:
            if (kind == 0) {
                const std::size_t zeros[] = {0, 1, 3, 5, 6};
                g.t[zeros[slot % 5]] += nonzero_rational(rng);
            } else {
                g(1, 1, 1) += nonzero_rational(rng) * Expr::x();
            }
            break;
        default:
            if (kind == 0) g(1, 0, 1) += nonzero_rational(rng);
            else g(1, 1, 0) += nonzero_rational(rng);
    }
    return g;
}

Criterion characterizations() {
    Criterion c;
    std::mt19937 rng(2024);
    for (int id : {9, 10, 20, 21}) {
        CaseSpec cs = get_case(id);
        Expr xi = cs.xi.value_or(Expr());
        int accepted = 0, rejected = 0;
        std::string first_problem;
        for (int k = 0; k < 3; ++k) {
            Christoffel g = valid_sample(id, rng);
            CharacterizationResult ok = verify_characterization(id, cs.action, xi, g);
            if (ok.ok()) ++accepted;
            else if (first_problem.empty()) first_problem = "valid sample rejected (" + ok.violated + ")";
            CharacterizationResult bad = verify_characterization(id, cs.action, xi, perturb(id, g, rng));
            if (!bad.ok()) ++rejected;
            else if (first_problem.empty()) first_problem = "perturbed sample accepted";
        }
        c.require(accepted == 3 && rejected == 3,
                  "case " + std::to_string(id) + ": " + std::to_string(accepted) + "/3 admissible samples accepted, " +
                      std::to_string(rejected) + "/3 perturbations rejected" +
                      (first_problem.empty() ? "" : "; " + first_problem));
    }
    return c;
}

// 6
Criterion cross_method() {
    Criterion c;
    for (int id = 1; id <= 28; ++id)
        for (int r : case_r_values(id)) {
            CaseSpec base = get_case(id, {}, opt_r(r));
            if (!base.transitive) continue;
            std::vector<ParamBindings> configs;
            if (!base.params.empty()) configs.push_back({});
            for (const auto& s : base.samples) configs.push_back(s);
            if (configs.empty()) configs.push_back({});
            int agree = 0, total = 0;
            std::string first;
            for (const auto& cfg : configs) {
                CaseSpec cs = get_case(id, cfg, opt_r(r));
                SolutionSpace s = invariant_connection_space(cs.action, cs.profile);
                for (const Point& p : cs.base_points) {
                    ++total;
                    FiberSpace f = fiber_fixed_space(cs.action, p);
                    bool ok = f.empty == s.empty && f.routes_agree;
                    if (ok && !s.empty) ok = f.dimension() == s.dimension() && f.contains(fiber_value(s.particular, p));
                    if (ok) ++agree;
                    else if (first.empty())
                        first = "; disagreement at " + describe_params(cs) + " (" + p.x.get_str() + ", " +
                                p.y.get_str() + "): solver " + verdict(s) + ", fiber " +
                                (f.empty ? std::string("empty") : "dim " + std::to_string(f.dimension()));
                }
            }
            c.require(agree == total && total >= 3,
                      "case " + std::to_string(id) + (r ? " (r = " + std::to_string(r) + ")" : "") + ": " +
                          std::to_string(agree) + "/" + std::to_string(total) + " base-point checks over " +
                          std::to_string(configs.size()) + " parameter configuration" + (configs.size() == 1 ? "" : "s") + first);
        }
    return c;
}

// 7
Criterion oracle() {
    Criterion c;
    for (auto [id, r] : std::vector<std::pair<int, int>>{{2, 0}, {3, 0}, {17, 0}, {18, 0}, {22, 1}, {23, 1}}) {
        CaseSpec base = get_case(id, {}, opt_r(r));
        std::vector<ParamBindings> configs{{}};
        if (!base.params.empty()) configs = base.samples;
        double worst = 0;
        int evaluations = 0;
        bool failed = false;
        for (const auto& cfg : configs) {
            CaseSpec cs = get_case(id, cfg, opt_r(r));
            Christoffel G = fixture_symbols(cs, expected_result(id, cfg, opt_r(r))).substitute(zero_family(id, opt_r(r)));
            std::map<std::string, double> numeric;
            for (const auto& [k, v] : cfg) numeric[k] = v.get_d();
            for (const auto& X : cs.action.generators) {
                EndValuedOneForm exact = lie_derivative_connection(X, G);
                for (const Point& p : cs.base_points) {
                    auto num = numeric_flow_oracle(X, G, p.x.get_d(), p.y.get_d(), numeric);
                    for (std::size_t n = 0; n < 8; ++n) {
                        double want = exact.t[n].eval_numeric(p.x.get_d(), p.y.get_d(), numeric);
                        double rel = std::abs(num[n] - want) / std::max(1.0, std::abs(want));
                        worst = std::max(worst, rel);
                        if (!(rel < 1e-6)) failed = true;
                    }
                    ++evaluations;
                }
            }
        }
        std::ostringstream os;
        os << "case " << id << ": " << evaluations << " generator/point evaluations, worst relative residual "
           << std::scientific << std::setprecision(2) << worst;
        c.require(!failed && evaluations > 0, os.str());
    }
    return c;
}

// 8
Criterion properties() {
    Criterion c;
    using Suite = std::function<props::PropertyResult()>;
    for (const Suite& suite : std::vector<Suite>{
             [] { return props::ring_axioms(101); }, [] { return props::mixed_partials(102); },
             [] { return props::leibniz(103); }, [] { return props::normalization_soundness(104); },
             [] { return props::bracket_jacobi(105); }, [] { return props::lie_derivative_commutator(106); },
             [] { return props::window_stability(107); }}) {
        props::PropertyResult r = suite();
        c.require(r.ok() && r.trials == 500, r.name + ": " + std::to_string(r.trials - r.failures) + "/" +
                                                 std::to_string(r.trials) + " trials" +
                                                 (r.first_failure.empty() ? "" : "; " + r.first_failure));
    }
    return c;
}

}  // namespace

int main() {
    struct Entry {
        int number;
        std::string title;
        std::function<Criterion()> run;
    };
    const std::vector<Entry> entries{
        {1, "case-1 determinant", case1_determinant_check},
        {2, "primitive cases", primitive_cases},
        {3, "transitive imprimitive dimensions", transitive_imprimitive},
        {4, "emptiness with certificates", emptiness},
        {5, "non-transitive characterizations", characterizations},
        {6, "fiber method agrees with the solver", cross_method},
        {7, "flow oracle on published solutions", oracle},
        {8, "property suites", properties},
    };
    int failed = 0;
    for (const auto& e : entries) {
        Criterion c;
        try {
            c = e.run();
        } catch (const std::exception& ex) {
            c.pass = false;
            c.details.push_back(std::string("FAIL  exception: ") + ex.what());
        }
        std::cout << (c.pass ? "PASS" : "FAIL") << "  criterion " << e.number << ": " << e.title << "\n";
        for (const auto& d : c.details) std::cout << "        " << d << "\n";
        std::cout.flush();
        if (!c.pass) ++failed;
    }
    std::cout << "\n" << entries.size() - static_cast<std::size_t>(failed) << "/" << entries.size() << " criteria pass\n";
    return failed == 0 ? 0 : 1;
}
