#include "bplab/spectral/littlewood_paley.hpp"

#include <cmath>

namespace bplab::spectral {

double smoothstep7(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double u2 = u * u;
  return u2 * u2 * (35.0 + u * (-84.0 + u * (70.0 - 20.0 * u)));
}

double lp_bump(double r) {
  if (r <= kBumpInner || r >= kBumpOuter) return 0.0;
  if (r <= kBumpMiddle) return smoothstep7(2.0 * r - 1.0);
  return 1.0 - smoothstep7(r - 1.0);
}

double lp_bump(double r, int j) { return lp_bump(std::ldexp(r, -j)); }

double LPBump::inner_radius() const { return std::ldexp(kBumpInner, j); }
double LPBump::outer_radius() const { return std::ldexp(kBumpOuter, j); }

DyadicRange lp_range(const Grid2D& grid) {
  const double r_min = grid.dk();
  const double r_max = grid.dk() * (grid.n() / 2) * std::sqrt(2.0);
  DyadicRange range;
  range.j_min = static_cast<int>(std::floor(std::log2(r_min) - 1.0)) + 1;
  range.j_max = static_cast<int>(std::ceil(std::log2(r_max) + 1.0)) - 1;
  return range;
}

SpectralField2D lp_project(const SpectralField2D& f, int j) {
  SpectralField2D out(f.grid);
  const int n = f.grid.n();
  for (int i2 = 0; i2 < n; ++i2) {
    for (int i1 = 0; i1 < n; ++i1) {
      const double w = lp_bump(norm(f.grid.wavevector(i1, i2)), j);
      if (w != 0.0) out.at(i1, i2) = w * f.at(i1, i2);
    }
  }
  return out;
}

}  // namespace bplab::spectral
