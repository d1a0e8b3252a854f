#pragma once

#include <vector>

#include "bplab/spectral/field.hpp"

namespace bplab::propagator {

using spectral::Profile;
using spectral::SpectralField2D;

struct DecayFit {
  double exponent = 0.0;
  double constant = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  /// Max relative deviation of the data from constant * t^exponent; +inf for a degenerate fit.
  double residual = 0.0;
  bool degenerate = false;
  /// max_t t |exp(t L_1) g|_inf / |g|_{B^3_{1,1}}.
  double c_emp = 0.0;
  double besov311 = 0.0;
  std::vector<double> times;
  std::vector<double> sup_norms;
};

/// Measures |exp(t L_1) g|_inf at each time and fits a power law in log-log coordinates.
/// Throws DomainError unless times are positive, increasing and at least two.
DecayFit decay_curve(const SpectralField2D& g, const std::vector<double>& times);

/// Least-squares slope and intercept of log y against log t.
struct PowerLaw {
  double exponent = 0.0;
  double constant = 0.0;
  double residual = 0.0;
  bool degenerate = false;
};
PowerLaw fit_power_law(const std::vector<double>& t, const std::vector<double>& y);

/// 1/p = 1 + mu - 1/(1 + mu).
double split_inverse_p(double mu);
/// A(mu) = mu^(-(1-mu)^2 / (2 (1+mu)^2)).
double split_constant_A(double mu);

/// Inputs of the split bound, each in the Fourier L^2 measure of fhat.
struct SplitBoundNorms {
  double h3k = 0.0;       ///< |f|_{H^(3+k)}
  double d3 = 0.0;        ///< |D^3 f|_{L^2}
  double weighted3 = 0.0; ///< |D^3 x f|_{L^2}
};

/// 2^k N^-k |f|_{H^(3+k)} + t^(-1+2/p) N^(2 mu + 12/p) A(mu) (|D^3 f| + |D^3 x f|), constant 1.
double split_decay_bound(const SplitBoundNorms& norms, double t, double N, double mu, int k);

/// Evaluates the norms of the profile and then the bound. Physical L^2 norms are divided by 2 pi
/// so that every norm is measured on the Fourier side.
double split_decay_bound(const Profile& f, double t, double N, double mu, int k);
SplitBoundNorms split_bound_norms(const Profile& f, int k);

}  // namespace bplab::propagator
