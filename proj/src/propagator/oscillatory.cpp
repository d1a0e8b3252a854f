#include "bplab/propagator/oscillatory.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bplab/errors.hpp"
#include "bplab/spectral/littlewood_paley.hpp"

namespace bplab::propagator {

namespace {

using Complex = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Rule {
  std::vector<double> x, w;
};

template <unsigned N>
Rule make_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  Rule r;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) {
      r.x.push_back(0.0);
      r.w.push_back(w[i]);
      continue;
    }
    r.x.push_back(a[i]);
    r.w.push_back(w[i]);
    r.x.push_back(-a[i]);
    r.w.push_back(w[i]);
  }
  return r;
}

const Rule& rule16() {
  static const Rule r = make_rule<16>();
  return r;
}
const Rule& rule12() {
  static const Rule r = make_rule<12>();
  return r;
}

struct Panel {
  double r0, r1, th0, th1;
};

class Integrator {
 public:
  Integrator(Vec2 x, double t, int j, const QuadratureOptions& opt)
      : x_(x), t_(t), j_(j), xnorm_(norm(x)), opt_(opt) {}

  void integrate(const Panel& p, double tol, int depth) {
    const Complex hi = apply(p, rule16());
    const Complex lo = apply(p, rule12());
    const double diff = std::abs(hi - lo);
    if (diff <= tol) {
      value_ += hi;
      error_ += diff;
      return;
    }
    if (depth >= opt_.max_depth) {
      std::ostringstream msg;
      msg << "oscillatory quadrature did not converge at x = (" << x_.x << ", " << x_.y << "), t = " << t_
          << ", j = " << j_ << "; panel estimate " << diff;
      throw QuadratureError(msg.str(), error_ + diff);
    }
    if (theta_cycles(p) >= radial_cycles(p)) {
      const double mid = 0.5 * (p.th0 + p.th1);
      integrate({p.r0, p.r1, p.th0, mid}, 0.5 * tol, depth + 1);
      integrate({p.r0, p.r1, mid, p.th1}, 0.5 * tol, depth + 1);
    } else {
      const double mid = 0.5 * (p.r0 + p.r1);
      integrate({p.r0, mid, p.th0, p.th1}, 0.5 * tol, depth + 1);
      integrate({mid, p.r1, p.th0, p.th1}, 0.5 * tol, depth + 1);
    }
  }

  double theta_cycles(const Panel& p) const {
    return (p.th1 - p.th0) * (p.r1 * xnorm_ + t_ / p.r0) / kTwoPi;
  }
  double radial_cycles(const Panel& p) const {
    return (p.r1 - p.r0) * (xnorm_ + t_ / (p.r0 * p.r0)) / kTwoPi;
  }

  QuadratureResult result() const { return {value_, error_, evaluations_}; }

 private:
  Complex apply(const Panel& p, const Rule& rule) {
    const double rm = 0.5 * (p.r0 + p.r1), rh = 0.5 * (p.r1 - p.r0);
    const double tm = 0.5 * (p.th0 + p.th1), th = 0.5 * (p.th1 - p.th0);
    const std::size_t m = rule.x.size();
    cos_.resize(m);
    sin_.resize(m);
    for (std::size_t b = 0; b < m; ++b) {
      const double theta = tm + th * rule.x[b];
      cos_[b] = std::cos(theta);
      sin_[b] = std::sin(theta);
    }
    Complex acc = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      const double r = rm + rh * rule.x[a];
      const double radial = rule.w[a] * r * spectral::lp_bump(r, j_);
      if (radial == 0.0) continue;
      Complex row = 0.0;
      for (std::size_t b = 0; b < m; ++b) {
        const double psi = r * (x_.x * cos_[b] + x_.y * sin_[b]) - t_ * cos_[b] / r;
        row += rule.w[b] * Complex(std::cos(psi), std::sin(psi));
      }
      acc += radial * row;
    }
    evaluations_ += static_cast<long>(m * m);
    return acc * (rh * th);
  }

  Vec2 x_;
  double t_;
  int j_;
  double xnorm_;
  QuadratureOptions opt_;
  Complex value_ = 0.0;
  double error_ = 0.0;
  long evaluations_ = 0;
  std::vector<double> cos_, sin_;
};

}  // namespace

QuadratureResult oscillatory_quadrature(Vec2 x, double t, int j, const QuadratureOptions& opt) {
  if (!(t >= 0.0)) throw DomainError("oscillatory_quadrature needs t >= 0");
  Integrator integ(x, t, j, opt);
  const double breaks[] = {std::ldexp(spectral::kBumpInner, j), std::ldexp(spectral::kBumpMiddle, j),
                           std::ldexp(spectral::kBumpOuter, j)};
  // Parameter-space area of the whole domain, used to share the tolerance.
  const double total_area = (breaks[2] - breaks[0]) * kTwoPi;
  for (int piece = 0; piece < 2; ++piece) {
    const double r0 = breaks[piece], r1 = breaks[piece + 1];
    const Panel whole{r0, r1, 0.0, kTwoPi};
    const int n_theta = std::max(4, static_cast<int>(std::ceil(integ.theta_cycles(whole))));
    const int n_r = std::max(1, static_cast<int>(std::ceil(integ.radial_cycles(whole))));
    const double dr = (r1 - r0) / n_r, dth = kTwoPi / n_theta;
    const double tol = opt.abs_tol * (dr * dth) / total_area;
    for (int a = 0; a < n_r; ++a) {
      for (int b = 0; b < n_theta; ++b) {
        const Panel p{r0 + a * dr, a + 1 == n_r ? r1 : r0 + (a + 1) * dr, b * dth,
                      b + 1 == n_theta ? kTwoPi : (b + 1) * dth};
        integ.integrate(p, tol, 0);
      }
    }
  }
  return integ.result();
}

double oscillatory_sup(const std::vector<Vec2>& xs, double t, int j, const QuadratureOptions& opt) {
  double m = 0.0;
  for (const Vec2& x : xs) m = std::max(m, std::abs(oscillatory_quadrature(x, t, j, opt).value));
  return m;
}

}  // namespace bplab::propagator
