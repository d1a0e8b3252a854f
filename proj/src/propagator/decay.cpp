#include "bplab/propagator/decay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bplab/errors.hpp"
#include "bplab/propagator/semigroup.hpp"
#include "bplab/spectral/norms.hpp"

namespace bplab::propagator {

PowerLaw fit_power_law(const std::vector<double>& t, const std::vector<double>& y) {
  PowerLaw fit;
  const std::size_t n = t.size();
  bool positive = n >= 2 && y.size() == n;
  for (std::size_t i = 0; positive && i < n; ++i) positive = t[i] > 0.0 && y[i] > 0.0 && std::isfinite(y[i]);
  const bool constant = positive && std::all_of(y.begin(), y.end(), [&](double v) { return v == y.front(); });
  if (!positive || constant) {
    fit.degenerate = true;
    fit.residual = std::numeric_limits<double>::infinity();
    if (constant) fit.constant = y.front();
    return fit;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(t[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  fit.exponent = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.exponent * sx) / n;
  fit.constant = std::exp(intercept);
  for (std::size_t i = 0; i < n; ++i) {
    const double model = fit.constant * std::pow(t[i], fit.exponent);
    fit.residual = std::max(fit.residual, std::abs(y[i] / model - 1.0));
  }
  return fit;
}

DecayFit decay_curve(const SpectralField2D& g, const std::vector<double>& times) {
  if (times.size() < 2) throw DomainError("decay_curve needs at least two times");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
      throw DomainError("decay_curve times must be positive and increasing");
    }
  }
  DecayFit out;
  out.times = times;
  out.t_min = times.front();
  out.t_max = times.back();
  out.besov311 = spectral::besov_norm(g, 3.0, 1.0, 1.0);
  for (double t : times) out.sup_norms.push_back(spectral::linf_norm(apply_semigroup(g, t)));

  const PowerLaw fit = fit_power_law(times, out.sup_norms);
  out.exponent = fit.exponent;
  out.constant = fit.constant;
  out.residual = fit.residual;
  out.degenerate = fit.degenerate;

  double c = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) c = std::max(c, times[i] * out.sup_norms[i]);
  out.c_emp = out.besov311 > 0.0 ? c / out.besov311 : (c == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  return out;
}

double split_inverse_p(double mu) { return 1.0 + mu - 1.0 / (1.0 + mu); }

double split_constant_A(double mu) {
  const double e = -(1.0 - mu) * (1.0 - mu) / (2.0 * (1.0 + mu) * (1.0 + mu));
  return std::pow(mu, e);
}

double split_decay_bound(const SplitBoundNorms& norms, double t, double N, double mu, int k) {
  if (!(mu > 0.0 && mu < 1.0)) throw DomainError("split_decay_bound needs 0 < mu < 1");
  if (!(N > 0.0) || !(t > 0.0) || k < 1) throw DomainError("split_decay_bound needs N > 0, t > 0, k >= 1");
  const double inv_p = split_inverse_p(mu);
  const double high = std::exp2(k) * std::pow(N, -k) * norms.h3k;
  const double low = std::pow(t, -1.0 + 2.0 * inv_p) * std::pow(N, 2.0 * mu + 12.0 * inv_p) * split_constant_A(mu) *
                     (norms.d3 + norms.weighted3);
  return high + low;
}

SplitBoundNorms split_bound_norms(const Profile& f, int k) {
  const double to_fourier = 1.0 / (2.0 * std::numbers::pi);
  SplitBoundNorms n;
  n.h3k = spectral::sobolev_norm(f.field, 3 + k) * to_fourier;
  n.d3 = spectral::homogeneous_sobolev_norm(f.field, 3.0) * to_fourier;
  n.weighted3 = spectral::weighted_profile_norm(f, 3).value;
  return n;
}

double split_decay_bound(const Profile& f, double t, double N, double mu, int k) {
  return split_decay_bound(split_bound_norms(f, k), t, N, mu, k);
}

}  // namespace bplab::propagator
