#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "invcnx/geometry.hpp"

namespace invcnx {

/// Values G^k_ij(p) of a connection at one point, flat (i, j, k) order.
struct FiberPoint {
    std::array<ParamScalar, 8> values;
    bool operator==(const FiberPoint&) const = default;
};

/// Values of the symbols at p. Throws EvalSingular.
FiberPoint fiber_value(const Christoffel& G, const Point& p);

using FiberMatrix = Eigen::Matrix<ParamScalar, 8, 8>;
using FiberVector = std::array<ParamScalar, 8>;

/// Infinitesimal action of the isotropy algebra at p on the fiber of
/// connection values: for each isotropy generator X, G(p) maps to
/// linear * G(p) + translation, the value of L_X nabla at p.
struct IsotropyAction {
    Point p;
    std::vector<VectorField> generators;
    std::vector<FiberMatrix> linear;
    std::vector<FiberVector> translation;
};

/// Rank of the 2 x n matrix of generator values at p equals 2.
bool is_transitive_at(const LieAlgebraAction& g, const Point& p);

/// Combinations of the generators vanishing at p (exact nullspace of the
/// evaluation map).
std::vector<VectorField> isotropy_basis(const LieAlgebraAction& g, const Point& p);

IsotropyAction isotropy_action(const LieAlgebraAction& g, const Point& p);

/// Affine subspace of the fiber fixed by the isotropy action.
///
/// Computed twice: from the isotropy rows alone, and from the 0-jet of
/// L_A nabla at p for every generator A with the first derivatives of the
/// symbols at p as extra unknowns, projected back to the fiber.
/// `routes_agree` records whether both give the same affine space.
/// `linear_dimension` is the dimension of the fixed space of the linear
/// part alone (no second-derivative translation).
struct FiberSpace {
    Point p;
    bool empty = false;
    FiberPoint particular;
    std::vector<FiberVector> basis;
    bool routes_agree = false;
    std::size_t linear_dimension = 0;
    std::size_t isotropy_dimension = 0;

    std::size_t dimension() const { return basis.size(); }
    bool contains(const FiberPoint& v) const;
};

/// Throws NotTransitive.
FiberSpace fiber_fixed_space(const LieAlgebraAction& g, const Point& p);

}  // namespace invcnx
