#pragma once

#include <cstdlib>
#include <utility>

#include "bplab/spectral/field.hpp"

namespace bplab::solver {

using spectral::Grid2D;
using spectral::RealField2D;
using spectral::SpectralField2D;

/// Sign s in uhat = s i xi^perp / |xi|^2 omegahat, fixed on first use by requiring
/// d1 u2 - d2 u1 = omega on a probe mode.
int biot_savart_sign();

/// Velocity spectra (u1hat, u2hat). Throws InputError for a nonzero mean.
std::pair<SpectralField2D, SpectralField2D> biot_savart(const SpectralField2D& omega);

/// True when the signed lattice index survives the two-thirds rule, |k| <= n/3.
inline bool kept_by_dealias(int n, int k) { return 3 * std::abs(k) <= n; }

/// Zeroes every mode with a component outside the two-thirds band.
void dealias_inplace(SpectralField2D& f);
SpectralField2D dealias(const SpectralField2D& f);

/// Spectrum of -u . grad omega, dealiased before and after the physical-space product.
SpectralField2D nonlinear_term(const SpectralField2D& omega);

/// nonlinear_term plus max |u| on the grid, which the stepper needs for its stability check.
struct NonlinearResult {
  SpectralField2D term;
  double max_speed = 0.0;
};
NonlinearResult nonlinear_term_with_speed(const SpectralField2D& omega);

/// Real L^2 pairing int f g dx computed from spectra.
double l2_pairing(const SpectralField2D& f, const SpectralField2D& g);

struct SupNorms {
  double omega = 0.0;
  /// Euclidean length of u.
  double u = 0.0;
  /// Largest of the four entries of grad u.
  double du = 0.0;
  double l2_u = 0.0;
};
SupNorms sup_norms(const SpectralField2D& omega);

/// Spectrum of beta L_1 omega, symbol -i beta xi_1/|xi|^2.
SpectralField2D linear_forcing(const SpectralField2D& omega, double beta);

/// Mean-zero check used at ingestion. Throws InputError when |mean| exceeds rel_tol times the
/// largest sample magnitude; otherwise returns the spectrum with the zero mode set to 0.
SpectralField2D ingest_vorticity(const RealField2D& omega, double rel_tol = 1e-10);

}  // namespace bplab::solver
