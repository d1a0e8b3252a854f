#pragma once

#include "bplab/spectral/field.hpp"

namespace bplab::spectral {

/// Degree-seven smoothstep S(u) = u^4 (35 - 84 u + 70 u^2 - 20 u^3), clamped to [0, 1].
double smoothstep7(double u);

/// Radial Littlewood-Paley bump phi(r), supported in [1/2, 2].
///
/// phi(r) = S(2r - 1) on [1/2, 1] and 1 - S(r - 1) on [1, 2]. The dyadic rescalings
/// phi(2^-j r) telescope to exactly 1 for every r > 0.
double lp_bump(double r);

/// phi_j(r) = phi(2^-j r).
double lp_bump(double r, int j);

/// Breakpoints of the piecewise polynomial bump: 1/2, 1, 2.
inline constexpr double kBumpInner = 0.5;
inline constexpr double kBumpMiddle = 1.0;
inline constexpr double kBumpOuter = 2.0;

/// One dyadic shell P_j as a data object.
struct LPBump {
  int j = 0;
  double operator()(double r) const { return lp_bump(r, j); }
  double inner_radius() const;
  double outer_radius() const;
};

/// Dyadic indices j whose shells meet the nonzero lattice points of the grid.
struct DyadicRange {
  int j_min = 0;
  int j_max = 0;
};
DyadicRange lp_range(const Grid2D& grid);

/// Multiplies every coefficient by phi(2^-j |xi|).
SpectralField2D lp_project(const SpectralField2D& f, int j);

}  // namespace bplab::spectral
