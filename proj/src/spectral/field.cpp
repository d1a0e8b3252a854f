#include "bplab/spectral/field.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "bplab/errors.hpp"

namespace bplab::spectral {

Grid2D::Grid2D(int n, double box_length) : n_(n), box_length_(box_length) {
  if (n < 8 || (n & (n - 1)) != 0) {
    throw ConfigError("grid size must be a power of two >= 8, got " + std::to_string(n));
  }
  if (!(box_length > 0.0)) {
    throw ConfigError("box length must be positive");
  }
}

double Grid2D::dk() const { return 2.0 * std::numbers::pi / box_length_; }

RealField2D::RealField2D(Grid2D g, std::vector<double> values) : grid(g), samples(std::move(values)) {
  if (samples.size() != grid.size()) throw ConfigError("sample count does not match grid");
}

SpectralField2D::SpectralField2D(Grid2D g, std::vector<Complex> values)
    : grid(g), modes(std::move(values)) {
  if (modes.size() != grid.size()) throw ConfigError("mode count does not match grid");
}

double SpectralField2D::continuum_scale() const {
  const double s = 1.0 / grid.dk();
  return s * s;
}

namespace {
void require_same_grid(const Grid2D& a, const Grid2D& b) {
  if (!(a == b)) throw ConfigError("fields live on different grids");
}
}  // namespace

SpectralField2D& SpectralField2D::operator+=(const SpectralField2D& o) {
  require_same_grid(grid, o.grid);
  for (std::size_t i = 0; i < modes.size(); ++i) modes[i] += o.modes[i];
  return *this;
}

SpectralField2D& SpectralField2D::operator-=(const SpectralField2D& o) {
  require_same_grid(grid, o.grid);
  for (std::size_t i = 0; i < modes.size(); ++i) modes[i] -= o.modes[i];
  return *this;
}

SpectralField2D& SpectralField2D::operator*=(double s) {
  for (auto& m : modes) m *= s;
  return *this;
}

SpectralField2D operator+(SpectralField2D a, const SpectralField2D& b) { return a += b; }
SpectralField2D operator-(SpectralField2D a, const SpectralField2D& b) { return a -= b; }
SpectralField2D operator*(double s, SpectralField2D a) { return a *= s; }

double hermitian_defect(const SpectralField2D& f) {
  const int n = f.grid.n();
  double worst = 0.0;
  for (int i2 = 0; i2 < n; ++i2) {
    for (int i1 = 0; i1 < n; ++i1) {
      const Complex a = f.at(i1, i2);
      const Complex b = f.at((n - i1) % n, (n - i2) % n);
      worst = std::max(worst, std::abs(b - std::conj(a)));
    }
  }
  return worst;
}

double max_abs_mode(const SpectralField2D& f) {
  double m = 0.0;
  for (const auto& c : f.modes) m = std::max(m, std::abs(c));
  return m;
}

double max_mode_difference(const SpectralField2D& a, const SpectralField2D& b) {
  require_same_grid(a.grid, b.grid);
  double m = 0.0;
  for (std::size_t i = 0; i < a.modes.size(); ++i) m = std::max(m, std::abs(a.modes[i] - b.modes[i]));
  return m;
}

}  // namespace bplab::spectral
