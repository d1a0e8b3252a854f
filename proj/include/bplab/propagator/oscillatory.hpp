#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "bplab/vec2.hpp"

namespace bplab::propagator {

struct QuadratureResult {
  std::complex<double> value;
  double error_estimate = 0.0;
  long evaluations = 0;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate)
      : std::runtime_error(what), achieved_estimate(estimate) {}
  double achieved_estimate;
};

struct QuadratureOptions {
  double abs_tol = 1e-8;
  int max_depth = 24;
};

/// int phi(2^-j |xi|) exp(i x.xi - i t xi_1/|xi|^2) dxi over the shell 2^(j-1) <= |xi| <= 2^(j+1).
///
/// Polar tensor Gauss-Legendre panels, radial breakpoints at the bump's polynomial pieces,
/// initial panel count from the phase variation, then per-panel 16-point vs 12-point comparison
/// with bisection until the summed difference meets abs_tol.
QuadratureResult oscillatory_quadrature(Vec2 x, double t, int j, const QuadratureOptions& opt = {});

/// Max |value| over the points; a convenience for decay measurements.
double oscillatory_sup(const std::vector<Vec2>& xs, double t, int j, const QuadratureOptions& opt = {});

}  // namespace bplab::propagator
