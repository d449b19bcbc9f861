#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "invcnx/geometry.hpp"

namespace invcnx::props {

struct PropertyResult {
    std::string name;
    int trials = 0;
    int failures = 0;
    std::string first_failure;
    bool ok() const { return trials > 0 && failures == 0; }
};

/// Random expression over x, y, the atoms y^-1, (x-y)^-1 and exp(alpha*x),
/// with coefficients in Q(alpha).
Expr random_expr(std::mt19937& rng);
VectorField random_field(std::mt19937& rng, int degree = 2);
Christoffel random_christoffel(std::mt19937& rng, int degree = 2);

PropertyResult ring_axioms(unsigned seed, int trials = 500);
PropertyResult mixed_partials(unsigned seed, int trials = 500);
PropertyResult leibniz(unsigned seed, int trials = 500);
/// Canonical forms of sums and products evaluate like their operands at 20
/// random rational points per trial.
PropertyResult normalization_soundness(unsigned seed, int trials = 500);
PropertyResult bracket_jacobi(unsigned seed, int trials = 500);
PropertyResult lie_derivative_commutator(unsigned seed, int trials = 500);
/// Solver dimension with the default window equals the dimension with window
/// 6, on random catalog instances and admissible parameter samples. The
/// characterized cases are infinite-dimensional and excluded.
PropertyResult window_stability(unsigned seed, int trials = 500);

}  // namespace invcnx::props
