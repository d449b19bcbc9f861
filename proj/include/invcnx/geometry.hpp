#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "invcnx/expr.hpp"

namespace invcnx {

/// Vector field X = comp[0] dx + comp[1] dy.
struct VectorField {
    std::array<Expr, 2> comp;

    const Expr& operator[](int k) const { return comp[static_cast<std::size_t>(k)]; }
    Expr& operator[](int k) { return comp[static_cast<std::size_t>(k)]; }
    bool is_zero() const { return comp[0].is_zero() && comp[1].is_zero(); }
    bool operator==(const VectorField&) const = default;

    friend VectorField operator+(const VectorField& a, const VectorField& b) {
        return {{a[0] + b[0], a[1] + b[1]}};
    }
    friend VectorField operator-(const VectorField& a, const VectorField& b) {
        return {{a[0] - b[0], a[1] - b[1]}};
    }
    friend VectorField operator*(const Expr& f, const VectorField& a) { return {{f * a[0], f * a[1]}}; }

    VectorField substitute(const ParamBindings& values) const {
        return {{comp[0].substitute(values), comp[1].substitute(values)}};
    }
    std::set<std::string> parameters() const;
    /// "(x) dx + (y) dy"; zero components are omitted, the zero field prints "0".
    std::string to_string() const;
};

/// Eight (1,2)-tensor components t(i, j, k) with i, j, k in {0, 1} stored in
/// lexicographic (i, j, k) order.
///
/// For a connection, t(i, j, k) is the Christoffel symbol of index (i+1, j+1, k+1): the
/// coefficient of d_k in nabla_{d_i} d_j. Note that i is the direction
/// of differentiation; the symbols are not assumed symmetric in (i, j).
template <class Tag>
struct ThreeIndex {
    std::array<Expr, 8> t;

    static constexpr std::size_t flat(int i, int j, int k) {
        return static_cast<std::size_t>(4 * i + 2 * j + k);
    }
    const Expr& operator()(int i, int j, int k) const { return t[flat(i, j, k)]; }
    Expr& operator()(int i, int j, int k) { return t[flat(i, j, k)]; }
    bool is_zero() const {
        for (const auto& e : t)
            if (!e.is_zero()) return false;
        return true;
    }
    bool operator==(const ThreeIndex&) const = default;

    friend ThreeIndex operator+(ThreeIndex a, const ThreeIndex& b) {
        for (std::size_t n = 0; n < 8; ++n) a.t[n] += b.t[n];
        return a;
    }
    friend ThreeIndex operator-(ThreeIndex a, const ThreeIndex& b) {
        for (std::size_t n = 0; n < 8; ++n) a.t[n] -= b.t[n];
        return a;
    }
    friend ThreeIndex operator*(const Expr& f, ThreeIndex a) {
        for (auto& e : a.t) e *= f;
        return a;
    }
    ThreeIndex substitute(const ParamBindings& values) const {
        ThreeIndex r;
        for (std::size_t n = 0; n < 8; ++n) r.t[n] = t[n].substitute(values);
        return r;
    }
    std::set<std::string> parameters() const {
        std::set<std::string> s;
        for (const auto& e : t) {
            auto p = e.parameters();
            s.insert(p.begin(), p.end());
        }
        return s;
    }
};

struct ChristoffelTag {};
struct OneFormTag {};
using Christoffel = ThreeIndex<ChristoffelTag>;
using EndValuedOneForm = ThreeIndex<OneFormTag>;

/// "G[i][j][k]" with one-based indices for flat position n.
std::string component_label(std::size_t n);

/// The difference of two connections is a tensor.
EndValuedOneForm difference(const Christoffel& a, const Christoffel& b);
Christoffel translate(const Christoffel& g, const EndValuedOneForm& t);

/// Lie algebra of vector fields given by generators.
struct LieAlgebraAction {
    std::vector<VectorField> generators;
    std::vector<std::string> params;
    std::vector<std::string> constraints;

    std::set<std::string> param_set() const { return {params.begin(), params.end()}; }
    LieAlgebraAction substitute(const ParamBindings& values) const;
};

using Matrix2P = Eigen::Matrix<ParamScalar, 2, 2>;
using Vector2P = Eigen::Matrix<ParamScalar, 2, 1>;

/// Second-order jet of a vector field at a point:
/// jacobian(k, l) = d_l X^k, hessians[k](i, j) = d_i d_j X^k.
struct Jet2 {
    Vector2P value;
    Matrix2P jacobian;
    std::array<Matrix2P, 2> hessians;
};

VectorField lie_bracket(const VectorField& X, const VectorField& Y);

/// Lie derivative of the connection with symbols G along X:
///
///   (L_X nabla)^k_ij = X^l d_l G^k_ij - G^l_ij d_l X^k
///                      + G^k_lj d_i X^l + G^k_il d_j X^l + d_i d_j X^k.
///
/// Derivation: put Y = d_i, Z = d_j in
///   (L_X nabla)(Y, Z) = [X, nabla_Y Z] - nabla_[X,Y] Z - nabla_Y [X, Z].
/// Here [X, d_i] = -(d_i X^l) d_l, nabla_{d_i} d_j = G^k_ij d_k, and
///   [X, G^k_ij d_k]       = X(G^k_ij) d_k - G^l_ij (d_l X^k) d_k,
///   -nabla_{[X,d_i]} d_j  = (d_i X^l) G^k_lj d_k,
///   -nabla_{d_i}[X, d_j]  = nabla_{d_i}((d_j X^l) d_l)
///                         = (d_i d_j X^k) d_k + (d_j X^l) G^k_il d_k.
EndValuedOneForm lie_derivative_connection(const VectorField& X, const Christoffel& G);

/// Tensor Lie derivative of a (1,2)-tensor: the formula above without the
/// second-derivative term.
EndValuedOneForm lie_derivative_tensor(const VectorField& X, const EndValuedOneForm& T);

struct InvarianceReport {
    struct Residual {
        std::size_t generator;
        std::size_t component;  // flat (i, j, k) index
        Expr value;
    };
    std::vector<Residual> residuals;

    bool invariant() const { return residuals.empty(); }
    std::string to_string(const LieAlgebraAction& g) const;
};

InvarianceReport verify_invariance(const LieAlgebraAction& g, const Christoffel& G);

/// Throws JetSingular when a component cannot be evaluated exactly at p.
Jet2 jet2_at(const VectorField& X, const Point& p);

/// Coefficients of `Z` in the span of `basis` over Q(params), if it lies there.
std::optional<std::vector<ParamScalar>> span_coefficients(const std::vector<VectorField>& basis,
                                                          const VectorField& Z);

/// Structure constants c[a][b] with [A_a, A_b] = sum_c c[a][b][c] A_c; nullopt
/// when some bracket leaves the span of the generators.
using StructureConstants = std::vector<std::vector<std::vector<ParamScalar>>>;
std::optional<StructureConstants> structure_constants(const LieAlgebraAction& g);

/// Christoffel fixture text: lines "G[i][j][k] = <expr>", one-based indices,
/// '#' comments. Missing components are zero. Throws ParseError.
Christoffel parse_christoffel(std::string_view text, const std::set<std::string>& params);
std::string format_christoffel(const Christoffel& G);

/// "(expr) dx + (expr) dy"; either term may be omitted. Throws ParseError.
VectorField parse_vector_field(std::string_view text, const std::set<std::string>& params);
/// One vector field per non-empty, non-comment line.
std::vector<VectorField> parse_generators(std::string_view text, const std::set<std::string>& params);

/// Approximates (L_X nabla)(p) by integrating the flow of X together with its
/// first and second variational equations (classical Runge-Kutta) and
/// central-differencing the pulled-back symbols in t (steps h and h/2 with
/// Richardson extrapolation). Test oracle only.
/// Throws OracleSingular.
struct FlowOracleOptions {
    double t_step = 1e-3;
    double h = 1e-4;
};
std::array<double, 8> numeric_flow_oracle(const VectorField& X, const Christoffel& G, double px, double py,
                                          const std::map<std::string, double>& params = {},
                                          const FlowOracleOptions& opt = {});

}  // namespace invcnx
