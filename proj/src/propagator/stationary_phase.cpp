#include "bplab/propagator/stationary_phase.hpp"

#include <cmath>
#include <numbers>

#include "bplab/errors.hpp"

namespace bplab::propagator {

namespace {

constexpr int kScanIntervals = 2048;
constexpr double kGradTol = 1e-10;

// Hessian of p(xi) = xi_1/|xi|^2. The two diagonal entries are evaluated separately.
Mat2 dispersion_hessian(Vec2 xi) {
  const double x = xi.x, y = xi.y;
  const double r2 = x * x + y * y;
  const double r6 = r2 * r2 * r2;
  const double p11 = (2 * x * x * x - 6 * x * y * y) / r6;
  const double p22 = (-2 * x * x * x + 6 * x * y * y) / r6;
  const double p12 = (6 * x * x * y - 2 * y * y * y) / r6;
  return {{{p11, p12}, {p12, p22}}};
}

// Scalar reduction: grad phi = 0 forces v = -(cos 2 theta, sin 2 theta)/r^2, so the polar angle
// solves v x (cos 2 theta, sin 2 theta) = 0 with a negative dot product.
double angular_residual(Vec2 v, double theta) {
  return v.x * std::sin(2 * theta) - v.y * std::cos(2 * theta);
}

double bisect(Vec2 v, double a, double b) {
  double fa = angular_residual(v, a);
  for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = angular_residual(v, m);
    if (fm == 0.0) return m;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Damped Newton on grad phi = 0; the Jacobian is the Hessian of phi.
Vec2 newton_polish(const Phase1D& phase, Vec2 xi) {
  Vec2 g = phase.gradient(xi);
  for (int it = 0; it < 50 && norm(g) > 0.0; ++it) {
    const Mat2 h = phase.hessian(xi);
    const double det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    if (det == 0.0) break;
    const Vec2 step{(h[1][1] * g.x - h[0][1] * g.y) / det, (-h[1][0] * g.x + h[0][0] * g.y) / det};
    double damp = 1.0;
    bool improved = false;
    for (int k = 0; k < 30; ++k) {
      const Vec2 cand = xi - damp * step;
      const Vec2 gc = phase.gradient(cand);
      if (norm(gc) < norm(g)) {
        xi = cand;
        g = gc;
        improved = true;
        break;
      }
      damp *= 0.5;
    }
    if (!improved) break;
  }
  return xi;
}

}  // namespace

double Phase1D::value(Vec2 xi) const {
  const double r2 = norm2(xi);
  if (r2 == 0.0) throw DomainError("phase undefined at xi = 0");
  return dot(x_over_t, xi) - xi.x / r2;
}

Vec2 Phase1D::gradient(Vec2 xi) const {
  const double r2 = norm2(xi);
  if (r2 == 0.0) throw DomainError("phase undefined at xi = 0");
  const double r4 = r2 * r2;
  return {x_over_t.x - (xi.y * xi.y - xi.x * xi.x) / r4, x_over_t.y + 2 * xi.x * xi.y / r4};
}

Mat2 Phase1D::hessian(Vec2 xi) const {
  if (norm2(xi) == 0.0) throw DomainError("phase undefined at xi = 0");
  Mat2 h = dispersion_hessian(xi);
  for (auto& row : h)
    for (double& e : row) e = -e;
  return h;
}

std::vector<Vec2> stationary_points(Vec2 v) {
  std::vector<Vec2> roots;
  const double vn = norm(v);
  if (vn == 0.0) return roots;
  const Phase1D phase{v};
  const double r = 1.0 / std::sqrt(vn);
  const double two_pi = 2 * std::numbers::pi;
  const double h = two_pi / kScanIntervals;

  std::vector<double> angles;
  double prev = angular_residual(v, 0.0);
  for (int i = 0; i < kScanIntervals; ++i) {
    const double a = i * h, b = (i + 1) * h;
    const double fb = angular_residual(v, b);
    if (prev == 0.0) {
      angles.push_back(a);
    } else if ((prev < 0) != (fb < 0) && fb != 0.0) {
      angles.push_back(bisect(v, a, b));
    }
    prev = fb;
  }

  for (double theta : angles) {
    const Vec2 dir{std::cos(2 * theta), std::sin(2 * theta)};
    if (dot(v, dir) >= 0.0) continue;
    Vec2 xi = newton_polish(phase, Vec2{r * std::cos(theta), r * std::sin(theta)});
    const double rad = norm(xi);
    if (rad < kStationaryShellInner || rad > kStationaryShellOuter) continue;
    if (norm(phase.gradient(xi)) >= kGradTol) continue;
    bool duplicate = false;
    for (const Vec2& q : roots) duplicate = duplicate || norm(q - xi) < 1e-8 * rad;
    if (!duplicate) roots.push_back(xi);
  }
  return roots;
}

double hessian_det(Vec2 xi) {
  const double r2 = norm2(xi);
  if (r2 == 0.0) throw DomainError("hessian_det undefined at xi = 0");
  return -4.0 / (r2 * r2 * r2);
}

Mat2 finite_difference_hessian(const Phase1D& phase, Vec2 xi, double h) {
  const Vec2 e1{h, 0.0}, e2{0.0, h};
  const double f0 = phase.value(xi);
  Mat2 out{};
  out[0][0] = (phase.value(xi + e1) - 2 * f0 + phase.value(xi - e1)) / (h * h);
  out[1][1] = (phase.value(xi + e2) - 2 * f0 + phase.value(xi - e2)) / (h * h);
  out[0][1] = out[1][0] = (phase.value(xi + e1 + e2) - phase.value(xi + e1 - e2) -
                           phase.value(xi - e1 + e2) + phase.value(xi - e1 - e2)) /
                          (4 * h * h);
  return out;
}

}  // namespace bplab::propagator
