#pragma once

#include <limits>
#include <vector>

#include "bplab/spectral/field.hpp"
#include "bplab/spectral/littlewood_paley.hpp"

namespace bplab::spectral {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Physical L^2 norm, (int |g|^2 dx)^(1/2) = L (sum |c_xi|^2)^(1/2).
double l2_norm(const SpectralField2D& f);

/// Inhomogeneous H^k norm L (sum (1 + |xi|^2)^k |c_xi|^2)^(1/2). Equals l2_norm at k = 0.
double sobolev_norm(const SpectralField2D& f, int k);

/// Homogeneous norm |D^s g|_{L^2} = L (sum |xi|^(2s) |c_xi|^2)^(1/2).
double homogeneous_sobolev_norm(const SpectralField2D& f, double s);

/// max |g(x)| over the physical grid.
double linf_norm(const SpectralField2D& f);
double linf_norm(const RealField2D& f);

/// Physical L^p norm on the box, p in [1, inf].
double lp_norm(const RealField2D& f, double p);

/// Homogeneous Besov norm truncated to the lattice, with the shells actually summed.
struct BesovValue {
  double value = 0.0;
  DyadicRange range;
};
BesovValue besov_norm_detailed(const SpectralField2D& f, double s, double p, double q);

/// ( sum_j (2^(s j) |P_j f|_{L^p})^q )^(1/q) over the shells present on the grid.
double besov_norm(const SpectralField2D& f, double s, double p, double q);

/// max_xi |xi|^2 |fhat(xi)| with fhat the continuous transform c_xi (L / 2 pi)^2.
double fhat_sup_weighted(const SpectralField2D& f);

/// |D^l x f|: the Fourier-side L^2 norm of |xi|^l grad_xi fhat.
struct WeightedNorm {
  double value = 0.0;
  /// Share of int |f|^2 inside the central half box [-L/4, L/4)^2.
  double central_mass_fraction = 1.0;
  bool boundary_warning = false;
};

/// Minimum central mass share before a WeightedNorm is flagged.
inline constexpr double kCentralMassThreshold = 0.99;

/// grad_xi fhat is the transform of -i x f with x the centered box coordinate; the result is
/// (int |xi|^(2l) |grad_xi fhat|^2 dxi)^(1/2) in the continuous normalization.
WeightedNorm weighted_profile_norm(const Profile& f, int l);
WeightedNorm weighted_profile_norm(const SpectralField2D& f, int l);

/// Everything tracked along a run at one output time.
struct NormReport {
  double t = 0.0;
  double l2 = 0.0;
  /// hk[k] = |omega|_{H^k} for k = 0 .. k_energy.
  std::vector<double> hk;
  double linf_omega = 0.0;
  double linf_u = 0.0;
  double linf_du = 0.0;
  double besov311 = 0.0;
  double weighted2 = 0.0;
  double weighted3 = 0.0;
  double fhat_sup2 = 0.0;
  /// |beta L_1 omega|_{L^inf}, the forcing in the transport form of the equation.
  double linf_forcing = 0.0;
  double l2_u = 0.0;
  bool boundary_warning = false;

  /// The CSV "hk" column: the last (highest) requested index.
  double hk_top() const { return hk.empty() ? 0.0 : hk.back(); }
  double hk_at(int k) const;
};

}  // namespace bplab::spectral
