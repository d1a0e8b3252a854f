#include <cmath>

#include "bplab/solver/stepper.hpp"
#include "bplab/spectral/field_io.hpp"
#include "bplab/spectral/littlewood_paley.hpp"

namespace bplab::solver {

namespace {

template <class F>
RealField2D sample(const Grid2D& g, F&& f) {
  RealField2D out(g);
  for (int i2 = 0; i2 < g.n(); ++i2)
    for (int i1 = 0; i1 < g.n(); ++i1) out.at(i1, i2) = f(g.point(i1, i2));
  return out;
}

}  // namespace

SpectralField2D initial_vorticity(const SimConfig& cfg) {
  const Grid2D g(cfg.n, cfg.box_length);
  const InitSpec& in = cfg.init;
  const double inv2s2 = 1.0 / (2.0 * in.width * in.width);
  SpectralField2D omega(g);
  switch (in.kind) {
    case InitKind::GaussianVortex:
      omega = ingest_vorticity(sample(g, [&](Vec2 x) {
        const double q = norm2(x) * inv2s2;
        return in.eps * (1.0 - q) * std::exp(-q);
      }));
      break;
    case InitKind::VortexPair: {
      const Vec2 a{0.5 * in.separation, 0.0};
      omega = ingest_vorticity(sample(g, [&](Vec2 x) {
        return in.eps * (std::exp(-norm2(x - a) * inv2s2) - std::exp(-norm2(x + a) * inv2s2));
      }));
      break;
    }
    case InitKind::ShellBump: {
      const double scale = in.eps / omega.continuum_scale();
      for (int i2 = 0; i2 < g.n(); ++i2)
        for (int i1 = 0; i1 < g.n(); ++i1)
          omega.at(i1, i2) = scale * spectral::lp_bump(norm(g.wavevector(i1, i2)));
      break;
    }
    case InitKind::File: {
      const auto field = spectral::load_field(in.file);
      if (!(field.grid == g)) throw ConfigError("init_file grid does not match n and L of the config");
      omega = ingest_vorticity(field);
      break;
    }
  }
  dealias_inplace(omega);
  return omega;
}

SimState initial_state(const SimConfig& cfg) {
  return SimState{0.0, Profile{initial_vorticity(cfg), 0.0}, 0};
}

}  // namespace bplab::solver
