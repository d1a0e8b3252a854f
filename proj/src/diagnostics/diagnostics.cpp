#include "bplab/diagnostics/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bplab/errors.hpp"
#include "bplab/propagator/decay.hpp"
#include "bplab/solver/dynamics.hpp"

namespace bplab::diagnostics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) for a, b possibly -inf.
double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

std::vector<double> trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i) out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  return out;
}

}  // namespace

DecayNorms decay_norms(const SpectralField2D& omega) {
  const auto s = solver::sup_norms(omega);
  return {s.omega, s.u, s.du};
}

double fhat_sup_weighted(const Profile& f) { return spectral::fhat_sup_weighted(f.field); }

EnergyCertificate energy_certificate(const std::vector<NormReport>& series, int k) {
  EnergyCertificate cert;
  cert.k = k;
  if (k < 0) throw DomainError("energy_certificate needs k >= 0");
  if (series.empty()) {
    cert.failure = "empty series";
    return cert;
  }
  for (const auto& r : series) {
    if (static_cast<int>(r.hk.size()) <= k) throw InputError("series lacks H^" + std::to_string(k) + " norms");
    cert.t_grid.push_back(r.t);
    cert.hk_measured.push_back(r.hk[k]);
    cert.integrand.push_back(r.linf_du + r.linf_omega);
  }
  cert.cumulative = trapezoid(cert.t_grid, cert.integrand);
  const double h0 = cert.hk_measured.front();
  const double scale = std::pow(4.0, k);

  double c = 0.0;
  for (std::size_t i = 1; i < cert.t_grid.size(); ++i) {
    const double h = cert.hk_measured[i];
    if (h <= h0) continue;
    const double denom = scale * cert.cumulative[i];
    if (!(denom > 0.0)) {
      cert.failure = "H^k grew with zero integrated forcing at t = " + std::to_string(cert.t_grid[i]);
      cert.c = kInf;
      return cert;
    }
    c = std::max(c, std::log(h / h0) / denom);
  }
  cert.c = c;
  bool dominates = true;
  for (std::size_t i = 0; i < cert.t_grid.size(); ++i) {
    const double env = h0 * std::exp(c * scale * cert.cumulative[i]);
    cert.rhs_envelope.push_back(env);
    if (cert.hk_measured[i] > env * (1.0 + 1e-12)) dominates = false;
  }
  cert.valid = std::isfinite(c) && dominates;
  if (!dominates) cert.failure = "envelope does not dominate";
  return cert;
}

TransportCheck linfty_transport_check(const std::vector<NormReport>& series, double tolerance) {
  TransportCheck out;
  if (series.empty()) return out;
  std::vector<double> forcing;
  for (const auto& r : series) {
    out.t.push_back(r.t);
    out.lhs.push_back(r.linf_omega);
    forcing.push_back(r.linf_forcing);
  }
  const auto integral = trapezoid(out.t, forcing);
  const double w0 = series.front().linf_omega;
  out.worst_relative_slack = kInf;
  for (std::size_t i = 0; i < out.t.size(); ++i) {
    const double rhs = w0 + integral[i];
    out.rhs.push_back(rhs);
    out.slack.push_back(rhs - out.lhs[i]);
    if (rhs > 0.0) out.worst_relative_slack = std::min(out.worst_relative_slack, out.slack[i] / rhs);
    if (out.slack[i] < -tolerance * rhs) ++out.violations;
  }
  if (out.worst_relative_slack == kInf) out.worst_relative_slack = 0.0;
  out.ok = out.violations == 0;
  return out;
}

std::vector<WeightedRow> weighted_norm_series(const std::vector<Profile>& checkpoints, double flag_factor) {
  std::vector<WeightedRow> rows;
  double w20 = 0.0, w30 = 0.0;
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    const auto w2 = spectral::weighted_profile_norm(checkpoints[i], 2);
    const auto w3 = spectral::weighted_profile_norm(checkpoints[i], 3);
    if (i == 0) {
      w20 = w2.value;
      w30 = w3.value;
    }
    WeightedRow row;
    row.t = checkpoints[i].t;
    row.weighted2 = w2.value;
    row.weighted3 = w3.value;
    row.ratio2 = w20 > 0.0 ? w2.value / w20 : 0.0;
    row.ratio3 = w30 > 0.0 ? w3.value / w30 : 0.0;
    row.flagged = row.ratio2 > flag_factor || row.ratio3 > flag_factor;
    row.boundary_warning = w2.boundary_warning || w3.boundary_warning;
    rows.push_back(row);
  }
  return rows;
}

double doubling_time(const std::vector<NormReport>& series, int k) {
  if (series.empty()) return kInf;
  const double target = 2.0 * series.front().hk_at(k);
  if (!(target > 0.0)) return kInf;
  for (std::size_t i = 1; i < series.size(); ++i) {
    const double a = series[i - 1].hk_at(k), b = series[i].hk_at(k);
    if (b >= target) {
      const double s = b > a ? (target - a) / (b - a) : 1.0;
      return series[i - 1].t + s * (series[i].t - series[i - 1].t);
    }
  }
  return kInf;
}

BootstrapReport bootstrap_feasibility(const BootstrapParams& p) {
  if (!(p.mu > 0.0 && p.mu < 1.0)) throw DomainError("bootstrap needs 0 < mu < 1");
  if (!(p.eps > 0.0 && p.eps < 1.0)) throw DomainError("bootstrap needs 0 < eps < 1");
  if (!(p.k >= 1.0)) throw DomainError("bootstrap needs k >= 1");
  if (!(p.M > 0.0)) throw DomainError("bootstrap needs M > 0");
  if (!(p.rho > 0.0 && p.rho < 1.0)) throw DomainError("bootstrap needs 0 < rho < 1");
  if (!(p.c1 > 0.0)) throw DomainError("bootstrap needs c1 > 0");

  BootstrapReport r;
  r.params = p;
  const double M = p.M, k = p.k;
  const double le = std::log(p.eps);  // negative
  const double abs_le = -le;
  r.inverse_p = propagator::split_inverse_p(p.mu);
  r.A = propagator::split_constant_A(p.mu);
  const double log_ck = std::log(p.c1) + 2.0 * k * std::log(2.0);
  r.ck = std::exp(log_ck);

  // Condition 1: M c(k) eps^(1/8) <= 1/2.
  const double log_term1 = std::log(M) + log_ck + le / 8.0;
  r.conditions[0] = {"energy", false, 0.5 - std::exp(log_term1)};
  r.conditions[0].satisfied = r.conditions[0].margin >= 0.0;

  const double e18 = std::exp(le / 8.0);
  const double growth = -M * e18 * le;  // log eps^(-M eps^(1/8))
  const double log_sum3 = log_add(log_add(le / 2.0, le / 8.0), le / 4.0);
  const double lk = std::log(k);

  // Condition 2.
  double lhs2 = log_add(le, lk - (M / k) * le + le / 2.0 + log_sum3) + growth;
  r.conditions[1] = {"weighted2", false, (le / 2.0 - lhs2) / abs_le};
  r.conditions[1].satisfied = r.conditions[1].margin >= 0.0;

  // Condition 3.
  double lhs3 = log_add(log_add(le, lk - (M / k) * le + le / 8.0 + le / 2.0),
                        lk - (2.0 * M / k) * le + le / 2.0 + log_sum3) +
                growth;
  r.conditions[2] = {"weighted3", false, (le / 2.0 - lhs3) / abs_le};
  r.conditions[2].satisfied = r.conditions[2].margin >= 0.0;

  // Condition 4: A eps^(-2M/p) eps^(-(2M/k)(mu + 6/p)) eps^(1/2) <= eps^(1/4).
  const double ip = r.inverse_p;
  const double lhs4 = std::log(r.A) - 2.0 * M * ip * le - (2.0 * M / k) * (p.mu + 6.0 * ip) * le + le / 2.0;
  r.conditions[3] = {"dispersive", false, (le / 4.0 - lhs4) / abs_le};
  r.conditions[3].satisfied = r.conditions[3].margin >= 0.0;

  r.shortcut_applicable = k > 32.0 * M;
  if (r.shortcut_applicable) {
    // k eps^(1/16 - M eps^(1/8)) <= 1.
    const double lhs = lk + (1.0 / 16.0 - M * e18) * le;
    r.shortcut_margin = -lhs / abs_le;
    r.shortcut_satisfied = r.shortcut_margin >= 0.0;
  }
  r.feasible = std::all_of(r.conditions.begin(), r.conditions.end(), [](const auto& c) { return c.satisfied; });
  return r;
}

std::optional<BootstrapReport> bootstrap_search(double M, const BootstrapSearchBox& box) {
  for (int k = box.k_min; k <= box.k_max; ++k) {
    for (double mu : box.mu_values) {
      for (int e = box.e_min; e <= box.e_max; ++e) {
        BootstrapParams p;
        p.M = M;
        p.k = k;
        p.mu = mu;
        p.eps = std::ldexp(1.0, -e);
        auto r = bootstrap_feasibility(p);
        if (r.feasible) return r;
      }
    }
  }
  return std::nullopt;
}

}  // namespace bplab::diagnostics
