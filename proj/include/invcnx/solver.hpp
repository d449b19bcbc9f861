#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "invcnx/geometry.hpp"
#include "invcnx/linear.hpp"

namespace invcnx {

/// Function space the unknown symbols are sought in.
///
///   Constants  every symbol is an unknown constant
///   LaurentY   sum of y^p, p in [-window, window] (symbols independent of x)
///   LaurentX   sum of x^p * exp(rate*x)^m, p in [-window, window], m in
///              [-exp_window, exp_window] (symbols independent of y)
///   Mixed      sum of x^a y^b atom^c, a, b in [0, 2], c in [-window, 0]
///   Auto       chosen from the translations contained in the algebra
struct AnsatzProfile {
    enum class Kind { Auto, Constants, LaurentY, LaurentX, Mixed };
    Kind kind = Kind::Auto;
    int window = 4;
    Atom mixed_atom = Atom::XMinusY;
    int exp_window = 1;
};

std::string to_string(AnsatzProfile::Kind k);

/// One unknown: coefficient of `basis` in symbol `component` (flat index).
struct AnsatzColumn {
    std::size_t component;
    Expr basis;
};

struct Ansatz {
    AnsatzProfile::Kind kind;
    std::vector<AnsatzColumn> columns;
    std::string description;

    std::vector<std::string> unknowns() const;  // "u1", "u2", ...
    /// Christoffel whose entries are combinations of the basis with the
    /// unknowns as symbolic coefficients.
    Christoffel template_symbols() const;
    /// Symbols for the given coefficient vector.
    Christoffel instantiate(const std::vector<ParamScalar>& coeffs) const;
};

/// Throws ProfileUnsupported when a generator leaves the profile's closure.
Ansatz build_ansatz(const LieAlgebraAction& g, const AnsatzProfile& profile = {});

struct RowLabel {
    std::size_t generator;
    std::size_t component;
    Monomial monomial;
    std::string to_string() const;
};

/// Rows: coefficient of one monomial in one component of one L_A nabla.
/// Columns: ansatz unknowns. The inhomogeneous part d_i d_j A^k is moved to
/// the right-hand side.
struct AffineSystem {
    std::vector<SparseRow<ParamScalar>> rows;
    std::vector<RowLabel> labels;
    int ncols = 0;
};

AffineSystem assemble_system(const LieAlgebraAction& g, const Ansatz& ansatz);

/// Row that reduced to 0 = value.
struct InconsistencyCertificate {
    RowLabel row;
    ParamScalar value;
    std::string to_string(const LieAlgebraAction* g = nullptr) const;
};

/// A parameter value at which a pivot vanishes and the dimension changes.
struct ExceptionalValue {
    std::string param;
    Rational value;
    bool empty = false;
    std::size_t dimension = 0;
};

struct SolutionSpace {
    bool empty = false;
    Christoffel particular;
    std::vector<EndValuedOneForm> basis;
    std::vector<std::string> domain_notes;
    /// Non-constant pivot factors (numerators), canonical and deduplicated.
    std::vector<Polynomial> pivot_denominators;
    std::vector<ExceptionalValue> exceptional;
    std::optional<InconsistencyCertificate> certificate;

    std::size_t dimension() const { return basis.size(); }
    /// Whether `G` lies in the affine space particular + span(basis).
    bool contains(const Christoffel& G) const;
};

struct SolveOptions {
    /// Re-solve at rational roots of univariate pivot factors.
    bool probe_exceptional = true;
};

SolutionSpace solve_affine(const AffineSystem& sys, const Ansatz& ansatz, const SolveOptions& opt = {});

SolutionSpace invariant_connection_space(const LieAlgebraAction& g, const AnsatzProfile& profile = {},
                                         const SolveOptions& opt = {});

/// The 8x8 matrix of the rotation generator of the case-1 algebra acting on
/// constant symbols, and its exact determinant.
Eigen::Matrix<ParamScalar, Eigen::Dynamic, Eigen::Dynamic> case1_matrix();
ParamScalar case1_determinant();

/// Membership test for the non-transitive families (cases 9, 10, 20, 21 with
/// r = 1): checks the defining relations on `sample`, then certifies
/// invariance under `g` symbolically.
struct CharacterizationResult {
    bool relations_hold = false;
    bool invariant = false;
    std::string violated;
    bool ok() const { return relations_hold && invariant; }
};
CharacterizationResult verify_characterization(int case_id, const LieAlgebraAction& g, const Expr& xi,
                                               const Christoffel& sample);

}  // namespace invcnx
