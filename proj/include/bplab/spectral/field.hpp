#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "bplab/vec2.hpp"

namespace bplab::spectral {

using Complex = std::complex<double>;

/// Periodic box [-L/2, L/2)^2 sampled by n x n points.
///
/// Physical sample (i1, i2) sits at x = (-L/2 + i1 h, -L/2 + i2 h) with h = L/n and is stored at
/// index i2 * n + i1. Spectral modes use the same layout in FFT order: index i maps to the signed
/// lattice index k = i for i < n/2 and k = i - n otherwise, and to the wavenumber k * 2 pi / L.
class Grid2D {
 public:
  /// Throws ConfigError unless n >= 8 is a power of two and box_length > 0.
  Grid2D(int n, double box_length);

  int n() const { return n_; }
  double box_length() const { return box_length_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_); }

  double spacing() const { return box_length_ / n_; }
  double cell_area() const { return spacing() * spacing(); }
  /// Wavenumber spacing 2 pi / L.
  double dk() const;
  /// Largest resolved wavenumber component, pi n / L.
  double k_nyquist() const { return dk() * (n_ / 2); }

  int signed_index(int i) const { return i < n_ / 2 ? i : i - n_; }
  /// Storage slot of a signed lattice index (taken modulo n).
  int slot(int k) const { return ((k % n_) + n_) % n_; }
  std::size_t flat(int i1, int i2) const {
    return static_cast<std::size_t>(i2) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i1);
  }

  double coordinate(int i) const { return -0.5 * box_length_ + i * spacing(); }
  Vec2 point(int i1, int i2) const { return {coordinate(i1), coordinate(i2)}; }
  Vec2 wavevector(int i1, int i2) const {
    return {dk() * signed_index(i1), dk() * signed_index(i2)};
  }

  bool operator==(const Grid2D&) const = default;

 private:
  int n_;
  double box_length_;
};

/// Real samples of a field on the physical grid.
struct RealField2D {
  Grid2D grid;
  std::vector<double> samples;

  explicit RealField2D(Grid2D g) : grid(g), samples(g.size(), 0.0) {}
  RealField2D(Grid2D g, std::vector<double> values);

  double& at(int i1, int i2) { return samples[grid.flat(i1, i2)]; }
  double at(int i1, int i2) const { return samples[grid.flat(i1, i2)]; }
};

/// Fourier coefficients c_xi of a field, normalized so that g(x) = sum_xi c_xi exp(i xi . x).
///
/// The continuous transform in the convention g(x) = int ghat(xi) exp(i x . xi) dxi is recovered
/// as ghat(xi) = c_xi / dk^2 (see continuum_scale()).
struct SpectralField2D {
  Grid2D grid;
  std::vector<Complex> modes;

  explicit SpectralField2D(Grid2D g) : grid(g), modes(g.size(), Complex{}) {}
  SpectralField2D(Grid2D g, std::vector<Complex> values);

  Complex& at(int i1, int i2) { return modes[grid.flat(i1, i2)]; }
  Complex at(int i1, int i2) const { return modes[grid.flat(i1, i2)]; }
  /// Coefficient at signed lattice indices (k1, k2).
  Complex& mode(int k1, int k2) { return modes[grid.flat(grid.slot(k1), grid.slot(k2))]; }
  Complex mode(int k1, int k2) const { return modes[grid.flat(grid.slot(k1), grid.slot(k2))]; }

  /// Factor turning c_xi into the continuous transform ghat(xi): (L / 2 pi)^2.
  double continuum_scale() const;

  SpectralField2D& operator+=(const SpectralField2D& o);
  SpectralField2D& operator-=(const SpectralField2D& o);
  SpectralField2D& operator*=(double s);
};

SpectralField2D operator+(SpectralField2D a, const SpectralField2D& b);
SpectralField2D operator-(SpectralField2D a, const SpectralField2D& b);
SpectralField2D operator*(double s, SpectralField2D a);

/// The vorticity profile fhat(t) = exp(+i t xi_1/|xi|^2) omegahat(t) with its time stamp.
struct Profile {
  SpectralField2D field;
  double t = 0.0;
};

/// Largest deviation |c(-xi) - conj(c(xi))| over the lattice.
double hermitian_defect(const SpectralField2D& f);

/// Largest |c_xi| over the lattice.
double max_abs_mode(const SpectralField2D& f);

/// Largest |a - b| over modes; grids must match.
double max_mode_difference(const SpectralField2D& a, const SpectralField2D& b);

}  // namespace bplab::spectral
