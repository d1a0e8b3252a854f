#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bplab/spectral/field.hpp"
#include "bplab/spectral/norms.hpp"

namespace bplab::diagnostics {

using spectral::NormReport;
using spectral::Profile;
using spectral::SpectralField2D;

struct DecayNorms {
  double omega = 0.0;
  double u = 0.0;
  double du = 0.0;
};

/// |omega|_inf, |u|_inf and the largest entry of grad u.
DecayNorms decay_norms(const SpectralField2D& omega);

/// max |xi|^2 |fhat(xi)| in the continuous normalization.
double fhat_sup_weighted(const Profile& f);

struct EnergyCertificate {
  int k = 0;
  std::vector<double> t_grid;
  std::vector<double> hk_measured;
  /// |Du|_inf + |omega|_inf at each output.
  std::vector<double> integrand;
  /// Trapezoid integral of the integrand from t_grid[0].
  std::vector<double> cumulative;
  std::vector<double> rhs_envelope;
  /// Smallest c with hk(t) <= hk(0) exp(c 4^k int_0^t integrand) at every sample.
  double c = 0.0;
  bool valid = false;
  std::string failure;
};

/// Needs hk up to index k in every report.
EnergyCertificate energy_certificate(const std::vector<NormReport>& series, int k);

struct TransportCheck {
  std::vector<double> t;
  std::vector<double> lhs;
  std::vector<double> rhs;
  /// rhs - lhs.
  std::vector<double> slack;
  /// Smallest slack / rhs over the series.
  double worst_relative_slack = 0.0;
  int violations = 0;
  bool ok = true;
};

/// |omega(t)|_inf <= |omega_0|_inf + int_0^t |L1 omega|_inf, trapezoid in time. A sample is a
/// violation only when slack < -tolerance * rhs.
TransportCheck linfty_transport_check(const std::vector<NormReport>& series, double tolerance = 0.01);

struct WeightedRow {
  double t = 0.0;
  double weighted2 = 0.0;
  double weighted3 = 0.0;
  double ratio2 = 0.0;
  double ratio3 = 0.0;
  /// Either norm above flag_factor times its initial value.
  bool flagged = false;
  bool boundary_warning = false;
};

std::vector<WeightedRow> weighted_norm_series(const std::vector<Profile>& checkpoints, double flag_factor = 10.0);

/// First time |omega|_{H^k} reaches twice its initial value, linearly interpolated between
/// outputs. +inf when it never doubles inside the series.
double doubling_time(const std::vector<NormReport>& series, int k);

struct BootstrapParams {
  double M = 1.0;
  double k = 1.0;
  double eps = 1e-8;
  double mu = 0.01;
  double rho = 0.01;
  double c1 = 1.0;
};

struct ConditionResult {
  std::string name;
  bool satisfied = false;
  /// Positive when satisfied. Condition 1 uses 1/2 - M c(k) eps^(1/8); the others use
  /// (log rhs - log lhs) / |log eps|.
  double margin = 0.0;
};

struct BootstrapReport {
  BootstrapParams params;
  double inverse_p = 0.0;
  double A = 0.0;
  double ck = 0.0;
  std::array<ConditionResult, 4> conditions;
  /// The k > 32 M sufficient check for conditions 2 and 3; only evaluated in that range.
  bool shortcut_applicable = false;
  bool shortcut_satisfied = false;
  double shortcut_margin = 0.0;
  bool feasible = false;
};

/// Throws DomainError on invalid parameters.
BootstrapReport bootstrap_feasibility(const BootstrapParams& params);

struct BootstrapSearchBox {
  int k_min = 1;
  int k_max = 64;
  /// eps ranges over 2^-e for integer e in [e_min, e_max].
  int e_min = 1;
  int e_max = 1020;
  std::vector<double> mu_values = {0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2};
};

/// First feasible triple scanning k upward, then mu, then eps downward.
std::optional<BootstrapReport> bootstrap_search(double M, const BootstrapSearchBox& box = {});

}  // namespace bplab::diagnostics
