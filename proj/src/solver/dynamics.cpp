#include "bplab/solver/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "bplab/errors.hpp"
#include "bplab/propagator/semigroup.hpp"
#include "bplab/spectral/norms.hpp"
#include "bplab/spectral/transform.hpp"

namespace bplab::solver {

using spectral::Complex;

namespace {

constexpr Complex kI{0.0, 1.0};

// i xi^perp / |xi|^2 omegahat with the sign left out.
std::pair<Complex, Complex> unsigned_velocity(Vec2 xi, Complex w) {
  const double r2 = norm2(xi);
  if (r2 == 0.0) return {0.0, 0.0};
  const Vec2 p = perp(xi);
  const Complex z = kI * w / r2;
  return {z * p.x, z * p.y};
}

int probe_sign() {
  const Vec2 xi{0.7, -1.3};
  const Complex w{1.0, 0.0};
  const auto [u1, u2] = unsigned_velocity(xi, w);
  const Complex curl = kI * xi.x * u2 - kI * xi.y * u1;
  return curl.real() > 0.0 ? 1 : -1;
}

void require_mean_zero(const SpectralField2D& omega) {
  const double m = std::abs(omega.mode(0, 0));
  if (m > 1e-12 * std::max(spectral::max_abs_mode(omega), 1e-300) && m > 0.0) {
    throw InputError("vorticity must have zero mean");
  }
}

}  // namespace

int biot_savart_sign() {
  static const int sign = probe_sign();
  return sign;
}

std::pair<SpectralField2D, SpectralField2D> biot_savart(const SpectralField2D& omega) {
  require_mean_zero(omega);
  const double s = biot_savart_sign();
  SpectralField2D u1(omega.grid), u2(omega.grid);
  const int n = omega.grid.n();
  for (int i2 = 0; i2 < n; ++i2) {
    for (int i1 = 0; i1 < n; ++i1) {
      const auto [a, b] = unsigned_velocity(omega.grid.wavevector(i1, i2), omega.at(i1, i2));
      u1.at(i1, i2) = s * a;
      u2.at(i1, i2) = s * b;
    }
  }
  return {std::move(u1), std::move(u2)};
}

void dealias_inplace(SpectralField2D& f) {
  const Grid2D& g = f.grid;
  const int n = g.n();
  for (int i2 = 0; i2 < n; ++i2) {
    const bool row_kept = kept_by_dealias(n, g.signed_index(i2));
    for (int i1 = 0; i1 < n; ++i1) {
      if (!row_kept || !kept_by_dealias(n, g.signed_index(i1))) f.at(i1, i2) = 0.0;
    }
  }
}

SpectralField2D dealias(const SpectralField2D& f) {
  SpectralField2D out = f;
  dealias_inplace(out);
  return out;
}

NonlinearResult nonlinear_term_with_speed(const SpectralField2D& omega_in) {
  require_mean_zero(omega_in);
  const Grid2D& g = omega_in.grid;
  const int n = g.n();
  const double s = biot_savart_sign();

  // Packed spectra: U = u1 + i u2 and G = d1 omega + i d2 omega, both real pairs.
  std::vector<Complex> packed_u(g.size()), packed_g(g.size());
  for (int i2 = 0; i2 < n; ++i2) {
    const bool row_kept = kept_by_dealias(n, g.signed_index(i2));
    for (int i1 = 0; i1 < n; ++i1) {
      if (!row_kept || !kept_by_dealias(n, g.signed_index(i1))) continue;
      const std::size_t idx = g.flat(i1, i2);
      const Complex w = omega_in.modes[idx];
      if (w == Complex{}) continue;
      const Vec2 xi = g.wavevector(i1, i2);
      const auto [a, b] = unsigned_velocity(xi, w);
      packed_u[idx] = s * a + kI * (s * b);
      packed_g[idx] = kI * xi.x * w + kI * (kI * xi.y * w);
    }
  }
  const auto u = spectral::synthesize(g, packed_u);
  const auto grad = spectral::synthesize(g, packed_g);

  NonlinearResult out{SpectralField2D(g), 0.0};
  std::vector<Complex> product(g.size());
  double speed2 = 0.0;
  for (std::size_t i = 0; i < product.size(); ++i) {
    product[i] = -(u[i].real() * grad[i].real() + u[i].imag() * grad[i].imag());
    speed2 = std::max(speed2, std::norm(u[i]));
  }
  out.max_speed = std::sqrt(speed2);
  out.term.modes = spectral::analyze(g, product);
  dealias_inplace(out.term);
  // The mean of u . grad omega = div(u omega) vanishes identically.
  out.term.mode(0, 0) = 0.0;
  return out;
}

SpectralField2D nonlinear_term(const SpectralField2D& omega) { return nonlinear_term_with_speed(omega).term; }

double l2_pairing(const SpectralField2D& f, const SpectralField2D& g) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.modes.size(); ++i) acc += (std::conj(f.modes[i]) * g.modes[i]).real();
  const double L = f.grid.box_length();
  return acc * L * L;
}

SupNorms sup_norms(const SpectralField2D& omega) {
  using spectral::linf_norm;
  const Grid2D& g = omega.grid;
  SupNorms out;
  out.omega = linf_norm(omega);
  auto [u1, u2] = biot_savart(omega);
  out.l2_u = std::hypot(spectral::l2_norm(u1), spectral::l2_norm(u2));
  auto [pu1, pu2] = spectral::transform_inverse_pair(u1, u2);
  double speed2 = 0.0;
  for (std::size_t i = 0; i < pu1.samples.size(); ++i) {
    speed2 = std::max(speed2, pu1.samples[i] * pu1.samples[i] + pu2.samples[i] * pu2.samples[i]);
  }
  out.u = std::sqrt(speed2);

  auto derivative = [&](const SpectralField2D& f, int axis) {
    SpectralField2D d(g);
    for (int i2 = 0; i2 < g.n(); ++i2)
      for (int i1 = 0; i1 < g.n(); ++i1) {
        const Vec2 xi = g.wavevector(i1, i2);
        d.at(i1, i2) = Complex(0.0, axis == 0 ? xi.x : xi.y) * f.at(i1, i2);
      }
    return d;
  };
  auto [d11, d12] = spectral::transform_inverse_pair(derivative(u1, 0), derivative(u1, 1));
  auto [d21, d22] = spectral::transform_inverse_pair(derivative(u2, 0), derivative(u2, 1));
  out.du = std::max({linf_norm(d11), linf_norm(d12), linf_norm(d21), linf_norm(d22)});
  return out;
}

SpectralField2D linear_forcing(const SpectralField2D& omega, double beta) {
  SpectralField2D out(omega.grid);
  const int n = omega.grid.n();
  for (int i2 = 0; i2 < n; ++i2) {
    for (int i1 = 0; i1 < n; ++i1) {
      const double p = propagator::dispersion(omega.grid.wavevector(i1, i2));
      out.at(i1, i2) = Complex(0.0, -beta * p) * omega.at(i1, i2);
    }
  }
  return out;
}

SpectralField2D ingest_vorticity(const RealField2D& omega, double rel_tol) {
  double peak = 0.0, sum = 0.0;
  for (double v : omega.samples) {
    if (!std::isfinite(v)) throw InputError("initial vorticity has non-finite samples");
    peak = std::max(peak, std::abs(v));
    sum += v;
  }
  const double mean = sum / static_cast<double>(omega.samples.size());
  if (std::abs(mean) > rel_tol * peak) {
    throw InputError("initial vorticity has nonzero mean " + std::to_string(mean));
  }
  auto s = spectral::transform_forward(omega);
  s.mode(0, 0) = 0.0;
  return s;
}

}  // namespace bplab::solver
