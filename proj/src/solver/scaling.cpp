#include "bplab/solver/scaling.hpp"

#include <cmath>

#include "bplab/errors.hpp"
#include "bplab/solver/dynamics.hpp"
#include "bplab/spectral/transform.hpp"

namespace bplab::solver {

using spectral::Complex;

RealField2D scaling_transform(const RealField2D& omega, double lambda, double support_tol) {
  if (!(lambda > 0.0)) throw DomainError("scaling needs lambda > 0");
  if (lambda == 1.0) return omega;
  const Grid2D& g = omega.grid;
  const int n = g.n();
  const double half = 0.5 * g.box_length();

  double total = 0.0;
  for (double v : omega.samples) total += v * v;
  if (total == 0.0) return RealField2D(g);

  if (lambda < 1.0) {
    // Input outside lambda * box has no preimage in the box.
    double lost = 0.0;
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < n; ++i1) {
        const Vec2 x = g.point(i1, i2);
        if (std::abs(x.x) >= lambda * half || std::abs(x.y) >= lambda * half) lost += omega.at(i1, i2) * omega.at(i1, i2);
      }
    if (lost > support_tol * total) {
      throw DomainError("scaling support overflow: the rescaled field does not fit the box");
    }
  }

  const auto c = spectral::analyze(g, std::vector<Complex>(omega.samples.begin(), omega.samples.end()));
  if (lambda > 1.0) {
    double spectral_total = 0.0, beyond = 0.0;
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < n; ++i1) {
        const double m = std::norm(c[g.flat(i1, i2)]);
        spectral_total += m;
        const double k1 = lambda * std::abs(g.signed_index(i1)), k2 = lambda * std::abs(g.signed_index(i2));
        if (3.0 * k1 > n || 3.0 * k2 > n) beyond += m;
      }
    if (beyond > support_tol * spectral_total) {
      throw DomainError("scaling support overflow: the compressed field is not resolved on the grid");
    }
  }

  // e[a][k] = exp(i xi_k y_a) at y_a = lambda x_a; the Nyquist column uses cos so the
  // interpolant stays real.
  std::vector<Complex> e(static_cast<std::size_t>(n) * n);
  std::vector<bool> inside(n);
  for (int a = 0; a < n; ++a) {
    const double y = lambda * g.coordinate(a);
    inside[a] = y >= -half && y < half;
    for (int k = 0; k < n; ++k) {
      const int s = g.signed_index(k);
      const double arg = s * g.dk() * y;
      e[static_cast<std::size_t>(a) * n + k] = (2 * s == -n) ? Complex(std::cos(arg), 0.0) : std::polar(1.0, arg);
    }
  }

  // Rows first: A[a][k2] = sum_k1 c[k1, k2] e[a][k1].
  std::vector<Complex> rows(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    if (!inside[a]) continue;
    const Complex* ea = &e[static_cast<std::size_t>(a) * n];
    for (int k2 = 0; k2 < n; ++k2) {
      Complex acc = 0.0;
      for (int k1 = 0; k1 < n; ++k1) acc += c[g.flat(k1, k2)] * ea[k1];
      rows[static_cast<std::size_t>(a) * n + k2] = acc;
    }
  }

  RealField2D out(g);
  for (int b = 0; b < n; ++b) {
    if (!inside[b]) continue;
    const Complex* eb = &e[static_cast<std::size_t>(b) * n];
    for (int a = 0; a < n; ++a) {
      if (!inside[a]) continue;
      const Complex* ra = &rows[static_cast<std::size_t>(a) * n];
      double acc = 0.0;
      for (int k2 = 0; k2 < n; ++k2) acc += (ra[k2] * eb[k2]).real();
      out.at(a, b) = acc / lambda;
    }
  }
  return out;
}

}  // namespace bplab::solver
