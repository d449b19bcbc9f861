#include "properties.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "invcnx/catalog.hpp"
#include "invcnx/errors.hpp"
#include "invcnx/solver.hpp"

namespace invcnx::props {

namespace {

int uniform(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Rational small_rational(std::mt19937& rng) {
    Rational r(uniform(rng, -5, 5), uniform(rng, 1, 4));
    r.canonicalize();
    return r;
}

ParamScalar random_coefficient(std::mt19937& rng) {
    ParamScalar c = small_rational(rng);
    if (uniform(rng, 0, 3) == 0) c += ParamScalar(small_rational(rng)) * ParamScalar::param("alpha");
    return c;
}

Expr poly(std::mt19937& rng, int degree) {
    std::uniform_int_distribution<int> coef(-3, 3);
    Expr e;
    for (int a = 0; a <= degree; ++a)
        for (int b = 0; a + b <= degree; ++b) {
            int c = coef(rng);
            if (c != 0) e += Expr(c) * Expr::x().pow(a) * Expr::y().pow(b);
        }
    return e;
}

template <class Check>
PropertyResult run(const std::string& name, unsigned seed, int trials, Check check) {
    PropertyResult res{name, 0, 0, {}};
    std::mt19937 rng(seed);
    for (int t = 0; t < trials; ++t) {
        ++res.trials;
        std::string why;
        try {
            why = check(rng);
        } catch (const std::exception& e) {
            why = std::string("exception: ") + e.what();
        }
        if (!why.empty()) {
            ++res.failures;
            if (res.first_failure.empty()) res.first_failure = "trial " + std::to_string(t) + ": " + why;
        }
    }
    return res;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

Expr random_expr(std::mt19937& rng) {
    Expr e;
    const int terms = uniform(rng, 1, 3);
    for (int t = 0; t < terms; ++t) {
        Expr term = Expr(random_coefficient(rng)) * Expr::x().pow(uniform(rng, 0, 2)) * Expr::y().pow(uniform(rng, 0, 2));
        switch (uniform(rng, 0, 3)) {
            case 0: term *= Expr::y().pow(-uniform(rng, 1, 2)); break;
            case 1: term *= Expr::atom_power(Atom::XMinusY, -uniform(rng, 1, 2)); break;
            case 2: term *= Expr::exp_ax(ParamScalar::param("alpha"), uniform(rng, -1, 1)); break;
            default: break;
        }
        e += term;
    }
    return e;
}

VectorField random_field(std::mt19937& rng, int degree) { return {{poly(rng, degree), poly(rng, degree)}}; }

Christoffel random_christoffel(std::mt19937& rng, int degree) {
    Christoffel g;
    for (auto& e : g.t) e = poly(rng, degree);
    return g;
}

PropertyResult ring_axioms(unsigned seed, int trials) {
    return run("expr ring axioms", seed, trials, [](std::mt19937& rng) -> std::string {
        Expr a = random_expr(rng), b = random_expr(rng), c = random_expr(rng);
        if ((a + b) + c != a + (b + c)) return "additive associativity";
        if ((a * b) * c != a * (b * c)) return "multiplicative associativity";
        if (a * (b + c) != a * b + a * c) return "distributivity";
        if (a + b != b + a || a * b != b * a) return "commutativity";
        if (a + Expr() != a || a * Expr(1) != a || !(a - a).is_zero()) return "identities";
        return {};
    });
}

PropertyResult mixed_partials(unsigned seed, int trials) {
    return run("mixed partials", seed, trials, [](std::mt19937& rng) -> std::string {
        Expr e = random_expr(rng) * random_expr(rng);
        if (e.differentiate(Var::X).differentiate(Var::Y) != e.differentiate(Var::Y).differentiate(Var::X))
            return "d_x d_y != d_y d_x for " + e.to_string();
        return {};
    });
}

PropertyResult leibniz(unsigned seed, int trials) {
    return run("leibniz rule", seed, trials, [](std::mt19937& rng) -> std::string {
        Expr a = random_expr(rng), b = random_expr(rng);
        for (Var v : {Var::X, Var::Y})
            if ((a * b).differentiate(v) != a.differentiate(v) * b + a * b.differentiate(v))
                return "product rule for " + a.to_string() + " and " + b.to_string();
        return {};
    });
}

PropertyResult normalization_soundness(unsigned seed, int trials) {
    return run("normalization soundness", seed, trials, [](std::mt19937& rng) -> std::string {
        Expr a = random_expr(rng), b = random_expr(rng);
        Expr sum = a + b, prod = a * b, zero = (a + b) * b - a * b - b * b;
        if (!zero.is_zero()) return "(a + b) b - a b - b b not zero";
        std::uniform_real_distribution<double> coord(-3.0, 3.0);
        for (int k = 0; k < 20; ++k) {
            double x = std::round(coord(rng) * 8) / 8 + 1.0 / 16, y = std::round(coord(rng) * 8) / 8 + 1.0 / 32;
            std::map<std::string, double> th{{"alpha", std::round(coord(rng) * 4) / 4 + 1.0 / 8}};
            double va = a.eval_numeric(x, y, th), vb = b.eval_numeric(x, y, th);
            if (!close(sum.eval_numeric(x, y, th), va + vb)) return "sum evaluates differently";
            if (!close(prod.eval_numeric(x, y, th), va * vb)) return "product evaluates differently";
            if (zero.eval_numeric(x, y, th) != 0.0) return "zero evaluates nonzero";
        }
        return {};
    });
}

PropertyResult bracket_jacobi(unsigned seed, int trials) {
    return run("bracket Jacobi", seed, trials, [](std::mt19937& rng) -> std::string {
        VectorField X = random_field(rng), Y = random_field(rng), Z = random_field(rng);
        if (!(lie_bracket(X, Y) + lie_bracket(Y, X)).is_zero()) return "antisymmetry";
        VectorField jac = lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) +
                          lie_bracket(Z, lie_bracket(X, Y));
        if (!jac.is_zero()) return "Jacobi identity";
        return {};
    });
}

PropertyResult lie_derivative_commutator(unsigned seed, int trials) {
    return run("Lie-derivative commutator", seed, trials, [](std::mt19937& rng) -> std::string {
        VectorField X = random_field(rng), Y = random_field(rng);
        Christoffel g = random_christoffel(rng);
        EndValuedOneForm comm = lie_derivative_tensor(X, lie_derivative_connection(Y, g)) -
                                lie_derivative_tensor(Y, lie_derivative_connection(X, g));
        if (comm != lie_derivative_connection(lie_bracket(X, Y), g)) return "L_X L_Y - L_Y L_X != L_[X,Y]";
        return {};
    });
}

PropertyResult window_stability(unsigned seed, int trials) {
    struct Instance {
        int id;
        std::optional<int> r;
    };
    std::vector<Instance> instances;
    for (int id = 1; id <= 28; ++id) {
        if (id == 9 || id == 10 || id == 20 || id == 21) continue;
        for (int r : case_r_values(id)) instances.push_back({id, r > 0 ? std::optional<int>(r) : std::nullopt});
    }
    std::map<std::string, std::string> memo;
    auto summary = [](const SolutionSpace& s) { return s.empty ? std::string("empty") : std::to_string(s.dimension()); };
    return run("ansatz window stability", seed, trials, [&](std::mt19937& rng) -> std::string {
        const Instance& inst = instances[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(instances.size()) - 1))];
        CaseSpec spec = get_case(inst.id, {}, inst.r);
        ParamBindings binding;
        for (const auto& p : spec.params) {
            if (uniform(rng, 0, 3) == 0) continue;
            for (int attempt = 0; attempt < 50; ++attempt) {
                Rational v(uniform(rng, -6, 6), uniform(rng, 1, 4));
                v.canonicalize();
                ParamBindings trial = binding;
                trial[p] = v;
                if (constraints_hold(spec.constraints, trial)) {
                    binding = trial;
                    break;
                }
            }
        }
        CaseSpec c = get_case(inst.id, binding, inst.r);
        std::ostringstream key;
        key << inst.id << '/' << (inst.r ? *inst.r : 0) << '/' << describe_params(c);
        auto it = memo.find(key.str());
        if (it == memo.end()) {
            AnsatzProfile wide = c.profile;
            wide.window = 6;
            std::string narrow = summary(invariant_connection_space(c.action, c.profile));
            std::string large = summary(invariant_connection_space(c.action, wide));
            it = memo.emplace(key.str(), narrow == large ? std::string() : narrow + " vs " + large).first;
        }
        return it->second.empty() ? std::string() : key.str() + ": " + it->second;
    });
}

}  // namespace invcnx::props
