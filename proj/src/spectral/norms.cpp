#include "bplab/spectral/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bplab/errors.hpp"
#include "bplab/spectral/transform.hpp"

namespace bplab::spectral {

namespace {

template <class Weight>
double weighted_mode_sum(const SpectralField2D& f, Weight&& w) {
  const int n = f.grid.n();
  double acc = 0.0;
  for (int i2 = 0; i2 < n; ++i2) {
    for (int i1 = 0; i1 < n; ++i1) {
      const double a = std::norm(f.at(i1, i2));
      if (a != 0.0) acc += w(norm2(f.grid.wavevector(i1, i2))) * a;
    }
  }
  return acc;
}

}  // namespace

double l2_norm(const SpectralField2D& f) {
  return f.grid.box_length() * std::sqrt(weighted_mode_sum(f, [](double) { return 1.0; }));
}

double sobolev_norm(const SpectralField2D& f, int k) {
  if (k < 0) throw DomainError("Sobolev index must be nonnegative");
  if (k == 0) return l2_norm(f);
  return f.grid.box_length() *
         std::sqrt(weighted_mode_sum(f, [k](double r2) { return std::pow(1.0 + r2, k); }));
}

double homogeneous_sobolev_norm(const SpectralField2D& f, double s) {
  return f.grid.box_length() *
         std::sqrt(weighted_mode_sum(f, [s](double r2) { return r2 == 0.0 ? 0.0 : std::pow(r2, s); }));
}

double linf_norm(const RealField2D& f) {
  double m = 0.0;
  for (double v : f.samples) m = std::max(m, std::abs(v));
  return m;
}

double linf_norm(const SpectralField2D& f) { return linf_norm(transform_inverse(f)); }

double lp_norm(const RealField2D& f, double p) {
  if (!(p >= 1.0)) throw DomainError("L^p exponent must be >= 1");
  if (std::isinf(p)) return linf_norm(f);
  double acc = 0.0;
  if (p == 1.0) {
    for (double v : f.samples) acc += std::abs(v);
    return acc * f.grid.cell_area();
  }
  if (p == 2.0) {
    for (double v : f.samples) acc += v * v;
    return std::sqrt(acc * f.grid.cell_area());
  }
  for (double v : f.samples) acc += std::pow(std::abs(v), p);
  return std::pow(acc * f.grid.cell_area(), 1.0 / p);
}

BesovValue besov_norm_detailed(const SpectralField2D& f, double s, double p, double q) {
  if (!(q >= 1.0)) throw DomainError("Besov q must be >= 1");
  BesovValue out;
  out.range = lp_range(f.grid);
  double acc = 0.0;
  for (int j = out.range.j_min; j <= out.range.j_max; ++j) {
    SpectralField2D pj = lp_project(f, j);
    if (max_abs_mode(pj) == 0.0) continue;
    const double term = std::exp2(s * j) * lp_norm(transform_inverse(pj), p);
    acc = std::isinf(q) ? std::max(acc, term) : acc + std::pow(term, q);
  }
  out.value = std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
  return out;
}

double besov_norm(const SpectralField2D& f, double s, double p, double q) {
  return besov_norm_detailed(f, s, p, q).value;
}

double fhat_sup_weighted(const SpectralField2D& f) {
  const int n = f.grid.n();
  double m = 0.0;
  for (int i2 = 0; i2 < n; ++i2) {
    for (int i1 = 0; i1 < n; ++i1) {
      m = std::max(m, norm2(f.grid.wavevector(i1, i2)) * std::abs(f.at(i1, i2)));
    }
  }
  return m * f.continuum_scale();
}

WeightedNorm weighted_profile_norm(const SpectralField2D& f, int l) {
  if (l < 0) throw DomainError("weight order must be nonnegative");
  const Grid2D& g = f.grid;
  const int n = g.n();
  const RealField2D phys = transform_inverse(f);

  // x1 f and x2 f packed as real and imaginary parts of one complex field.
  std::vector<Complex> xf(g.size());
  double total = 0.0, central = 0.0;
  const double quarter = 0.25 * g.box_length();
  for (int i2 = 0; i2 < n; ++i2) {
    for (int i1 = 0; i1 < n; ++i1) {
      const Vec2 x = g.point(i1, i2);
      const double v = phys.at(i1, i2);
      xf[g.flat(i1, i2)] = Complex{x.x * v, x.y * v};
      const double m = v * v;
      total += m;
      if (std::abs(x.x) < quarter && std::abs(x.y) < quarter) central += m;
    }
  }
  const auto c = analyze(g, xf);

  // Split the packed transform back into the spectra of x1 f and x2 f.
  double acc = 0.0;
  for (int i2 = 0; i2 < n; ++i2) {
    for (int i1 = 0; i1 < n; ++i1) {
      const double r2 = norm2(g.wavevector(i1, i2));
      if (r2 == 0.0 && l > 0) continue;
      const Complex a = c[g.flat(i1, i2)];
      const Complex b = std::conj(c[g.flat((n - i1) % n, (n - i2) % n)]);
      const Complex c1 = 0.5 * (a + b);
      const Complex c2 = Complex{0.0, -0.5} * (a - b);
      acc += std::pow(r2, l) * (std::norm(c1) + std::norm(c2));
    }
  }

  WeightedNorm out;
  out.value = g.box_length() / (2.0 * std::numbers::pi) * std::sqrt(acc);
  out.central_mass_fraction = total > 0.0 ? central / total : 1.0;
  out.boundary_warning = out.central_mass_fraction < kCentralMassThreshold;
  return out;
}

WeightedNorm weighted_profile_norm(const Profile& f, int l) { return weighted_profile_norm(f.field, l); }

double NormReport::hk_at(int k) const {
  if (k < 0 || k >= static_cast<int>(hk.size())) throw DomainError("hk index out of range");
  return hk[static_cast<std::size_t>(k)];
}

}  // namespace bplab::spectral
