#include "bplab/propagator/semigroup.hpp"

namespace bplab::propagator {

double dispersion(Vec2 xi) {
  const double r2 = norm2(xi);
  return r2 == 0.0 ? 0.0 : xi.x / r2;
}

void apply_semigroup_inplace(SpectralField2D& f, double t) {
  if (t == 0.0) return;
  const int n = f.grid.n();
  for (int i2 = 0; i2 < n; ++i2) {
    for (int i1 = 0; i1 < n; ++i1) {
      const double p = dispersion(f.grid.wavevector(i1, i2));
      if (p != 0.0) f.at(i1, i2) *= std::polar(1.0, -t * p);
    }
  }
}

SpectralField2D apply_semigroup(const SpectralField2D& f, double t) {
  SpectralField2D out = f;
  apply_semigroup_inplace(out, t);
  return out;
}

}  // namespace bplab::propagator
