#pragma once

#include <array>
#include <vector>

#include "bplab/vec2.hpp"

namespace bplab::propagator {

using Mat2 = std::array<std::array<double, 2>, 2>;

/// phi(xi) = v . xi - xi_1/|xi|^2 with v = x/t.
struct Phase1D {
  Vec2 x_over_t;

  double value(Vec2 xi) const;
  /// v - |xi|^-4 (xi_2^2 - xi_1^2, -2 xi_1 xi_2).
  Vec2 gradient(Vec2 xi) const;
  /// Closed-form Hessian; does not depend on v.
  Mat2 hessian(Vec2 xi) const;
};

/// Search annulus for stationary points.
inline constexpr double kStationaryShellInner = 0.25;
inline constexpr double kStationaryShellOuter = 4.0;

/// All roots of grad phi = 0 with |xi| in [1/4, 4]. Empty for x/t = 0.
std::vector<Vec2> stationary_points(Vec2 x_over_t);

/// det of the Hessian of phi, -4/|xi|^6. Throws DomainError at xi = 0.
double hessian_det(Vec2 xi);

/// Hessian of phi from central differences of Phase1D::value with step h.
Mat2 finite_difference_hessian(const Phase1D& phase, Vec2 xi, double h);

}  // namespace bplab::propagator
