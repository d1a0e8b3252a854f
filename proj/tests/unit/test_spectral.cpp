#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "bplab/errors.hpp"
#include "bplab/spectral/field.hpp"
#include "bplab/spectral/field_io.hpp"
#include "bplab/spectral/littlewood_paley.hpp"
#include "bplab/spectral/norms.hpp"
#include "bplab/spectral/transform.hpp"
#include "doctest.h"

using namespace bplab;
using namespace bplab::spectral;
using std::numbers::pi;

namespace {

RealField2D random_real(const Grid2D& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealField2D f(g);
  for (auto& v : f.samples) v = u(rng);
  return f;
}

SpectralField2D random_mean_zero(const Grid2D& g, unsigned seed) {
  auto s = transform_forward(random_real(g, seed));
  s.mode(0, 0) = 0.0;
  return s;
}

// Direct evaluation of c_xi = n^-2 sum_x g(x) exp(-i xi . x).
std::vector<Complex> naive_forward(const RealField2D& f) {
  const Grid2D& g = f.grid;
  const int n = g.n();
  std::vector<Complex> out(g.size());
  for (int k2 = 0; k2 < n; ++k2)
    for (int k1 = 0; k1 < n; ++k1) {
      const Vec2 xi = g.wavevector(k1, k2);
      Complex acc = 0.0;
      for (int i2 = 0; i2 < n; ++i2)
        for (int i1 = 0; i1 < n; ++i1) {
          const Vec2 x = g.point(i1, i2);
          acc += f.at(i1, i2) * std::polar(1.0, -dot(xi, x));
        }
      out[g.flat(k1, k2)] = acc / static_cast<double>(n * n);
    }
  return out;
}

std::vector<double> naive_inverse(const SpectralField2D& s) {
  const Grid2D& g = s.grid;
  const int n = g.n();
  std::vector<double> out(g.size());
  for (int i2 = 0; i2 < n; ++i2)
    for (int i1 = 0; i1 < n; ++i1) {
      const Vec2 x = g.point(i1, i2);
      Complex acc = 0.0;
      for (int k2 = 0; k2 < n; ++k2)
        for (int k1 = 0; k1 < n; ++k1) acc += s.at(k1, k2) * std::polar(1.0, dot(g.wavevector(k1, k2), x));
      out[g.flat(i1, i2)] = acc.real();
    }
  return out;
}

RealField2D cos_field(const Grid2D& g) {
  RealField2D f(g);
  for (int i2 = 0; i2 < g.n(); ++i2)
    for (int i1 = 0; i1 < g.n(); ++i1) f.at(i1, i2) = std::cos(2 * pi * g.coordinate(i1) / g.box_length());
  return f;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid2D(12, 1.0), ConfigError);
  CHECK_THROWS_AS(Grid2D(4, 1.0), ConfigError);
  CHECK_THROWS_AS(Grid2D(16, 0.0), ConfigError);
  Grid2D g(16, 4.0);
  CHECK(g.dk() == doctest::Approx(2 * pi / 4.0));
  CHECK(g.signed_index(8) == -8);
  CHECK(g.slot(-1) == 15);
}

TEST_CASE("transform_forward: zero field") {
  Grid2D g(16, 3.0);
  auto s = transform_forward(RealField2D(g));
  CHECK(max_abs_mode(s) == 0.0);
}

TEST_CASE("transform_forward: cosine has two modes") {
  Grid2D g(32, 7.0);
  auto s = transform_forward(cos_field(g));
  int nonzero = 0;
  for (int i2 = 0; i2 < 32; ++i2)
    for (int i1 = 0; i1 < 32; ++i1)
      if (std::abs(s.at(i1, i2)) > 1e-14) ++nonzero;
  CHECK(nonzero == 2);
  CHECK(std::abs(s.mode(1, 0) - 0.5) < 1e-15);
  CHECK(std::abs(s.mode(-1, 0) - 0.5) < 1e-15);
}

TEST_CASE("transform_forward matches direct summation on 8x8") {
  Grid2D g(8, 2.5);
  auto f = random_real(g, 11);
  auto s = transform_forward(f);
  auto oracle = naive_forward(f);
  double err = 0.0;
  for (std::size_t i = 0; i < oracle.size(); ++i) err = std::max(err, std::abs(oracle[i] - s.modes[i]));
  CHECK(err < 1e-14);
  auto back = naive_inverse(s);
  auto rt = transform_inverse(s);
  double rt_err = 0.0;
  for (std::size_t i = 0; i < back.size(); ++i) {
    rt_err = std::max(rt_err, std::abs(rt.samples[i] - f.samples[i]));
    rt_err = std::max(rt_err, std::abs(back[i] - f.samples[i]));
  }
  CHECK(rt_err < 1e-12);
  CHECK(hermitian_defect(s) < 1e-15);
}

TEST_CASE("Parseval and round trip") {
  Grid2D g(64, 9.0);
  auto f = random_real(g, 3);
  auto s = transform_forward(f);
  double phys = 0.0;
  for (double v : f.samples) phys += v * v;
  phys *= g.cell_area();
  double spec = 0.0;
  for (auto c : s.modes) spec += std::norm(c);
  spec *= g.box_length() * g.box_length();
  CHECK(std::abs(phys - spec) / phys < 1e-12);
  auto back = transform_inverse(s);
  double err = 0.0;
  for (std::size_t i = 0; i < f.samples.size(); ++i) err = std::max(err, std::abs(back.samples[i] - f.samples[i]));
  CHECK(err < 1e-12);
}

TEST_CASE("transform_inverse_pair agrees with two inverses") {
  Grid2D g(32, 5.0);
  auto a = transform_forward(random_real(g, 1));
  auto b = transform_forward(random_real(g, 2));
  auto [ra, rb] = transform_inverse_pair(a, b);
  auto ea = transform_inverse(a), eb = transform_inverse(b);
  for (std::size_t i = 0; i < g.size(); ++i) {
    REQUIRE(std::abs(ra.samples[i] - ea.samples[i]) < 1e-13);
    REQUIRE(std::abs(rb.samples[i] - eb.samples[i]) < 1e-13);
  }
}

TEST_CASE("LP bump: partition of unity and support") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-12.0, 12.0);
  for (int s = 0; s < 10000; ++s) {
    const double r = std::exp2(u(rng));
    double sum = 0.0;
    for (int j = -20; j <= 20; ++j) sum += lp_bump(r, j);
    REQUIRE(std::abs(sum - 1.0) < 1e-12);
  }
  for (int j = -3; j <= 3; ++j) {
    LPBump b{j};
    CHECK(b(0.999 * b.inner_radius()) == 0.0);
    CHECK(b(1.001 * b.outer_radius()) == 0.0);
    CHECK(b(b.inner_radius()) == 0.0);
    CHECK(b(b.outer_radius()) == 0.0);
    CHECK(b(std::exp2(j)) == 1.0);
  }
}

TEST_CASE("lp_project: single mode picks up the bump value") {
  Grid2D g(32, 2 * pi);  // unit lattice spacing
  SpectralField2D f(g);
  f.mode(3, 0) = Complex(0.7, 0.2);
  f.mode(-3, 0) = std::conj(f.mode(3, 0));
  // phi(3/4) = S(1/2) = (1/16)(35 - 42 + 17.5 - 2.5) = 1/2.
  auto p = lp_project(f, 2);
  CHECK(std::abs(p.mode(3, 0) - 0.5 * f.mode(3, 0)) < 1e-15);
  // phi(3/2) = 1 - S(1/2) = 1/2.
  auto q = lp_project(f, 1);
  CHECK(std::abs(q.mode(3, 0) - 0.5 * f.mode(3, 0)) < 1e-15);
}

TEST_CASE("lp_project: disjoint shells vanish and almost orthogonality is exact") {
  Grid2D g(64, 2 * pi);
  auto f = random_mean_zero(g, 9);
  auto range = lp_range(g);
  for (int j = range.j_min; j <= range.j_max; ++j) {
    auto pj = lp_project(f, j);
    for (int jp = range.j_min - 1; jp <= range.j_max + 1; ++jp) {
      if (std::abs(j - jp) < 2) continue;
      REQUIRE(max_abs_mode(lp_project(pj, jp)) == 0.0);
    }
  }
}

TEST_CASE("lp_project: reconstruction over the grid's shell range") {
  Grid2D g(64, 13.0);
  auto f = random_mean_zero(g, 21);
  auto range = lp_range(g);
  SpectralField2D sum(g);
  for (int j = range.j_min; j <= range.j_max; ++j) sum += lp_project(f, j);
  CHECK(max_mode_difference(sum, f) < 1e-10);
  CHECK(max_abs_mode(lp_project(f, range.j_min - 1)) == 0.0);
  CHECK(max_abs_mode(lp_project(f, range.j_max + 1)) == 0.0);
}

TEST_CASE("besov_norm") {
  Grid2D g(32, 2 * pi);
  CHECK(besov_norm(SpectralField2D(g), 3, 1, 1) == 0.0);

  // Shell data at j = 0: only P_-1, P_0, P_1 can see it.
  auto base = random_mean_zero(g, 4);
  auto f = lp_project(base, 0);
  double oracle = 0.0;
  for (int j = -1; j <= 1; ++j) {
    SpectralField2D pj(g);
    for (int i2 = 0; i2 < 32; ++i2)
      for (int i1 = 0; i1 < 32; ++i1) {
        const double r = norm(g.wavevector(i1, i2));
        pj.at(i1, i2) = lp_bump(r * std::exp2(-j)) * f.at(i1, i2);
      }
    const auto samples = naive_inverse(pj);
    double l1 = 0.0;
    for (double v : samples) l1 += std::abs(v);
    oracle += std::exp2(3.0 * j) * l1 * g.cell_area();
  }
  const auto detailed = besov_norm_detailed(f, 3, 1, 1);
  CHECK(std::abs(detailed.value - oracle) / oracle < 1e-12);
  CHECK(detailed.range.j_min <= 0);
  CHECK(detailed.range.j_max >= 1);
  CHECK(besov_norm(2.0 * f, 3, 1, 1) == doctest::Approx(2.0 * detailed.value).epsilon(1e-12));
}

TEST_CASE("sobolev_norm") {
  Grid2D g(16, 2 * pi);
  CHECK(sobolev_norm(SpectralField2D(g), 3) == 0.0);
  SpectralField2D f(g);
  // L^2 mass L^2 (|c|^2 + |c|^2) = 1 with |xi| = 1.
  const double c = 1.0 / (g.box_length() * std::sqrt(2.0));
  f.mode(1, 0) = c;
  f.mode(-1, 0) = c;
  CHECK(l2_norm(f) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sobolev_norm(f, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  Grid2D h(32, 4.0);
  auto r = random_mean_zero(h, 8);
  for (int k = 0; k <= 4; ++k) {
    double acc = 0.0;
    for (int k2 = -16; k2 < 16; ++k2)
      for (int k1 = -16; k1 < 16; ++k1) {
        const double xi2 = std::pow(2 * pi / 4.0, 2) * (k1 * k1 + k2 * k2);
        acc += std::pow(1.0 + xi2, k) * std::norm(r.mode(k1, k2));
      }
    const double oracle = 4.0 * std::sqrt(acc);
    CHECK(std::abs(sobolev_norm(r, k) - oracle) / oracle < 1e-12);
    if (k > 0) CHECK(sobolev_norm(r, k) >= sobolev_norm(r, k - 1));
  }
  CHECK(sobolev_norm(r, 0) == l2_norm(r));
}

TEST_CASE("linf_norm") {
  Grid2D g(32, 3.0);
  CHECK(linf_norm(SpectralField2D(g)) == 0.0);
  CHECK(linf_norm(transform_forward(cos_field(g))) == doctest::Approx(1.0).epsilon(1e-14));
  auto f = random_real(g, 17);
  double scan = 0.0;
  for (double v : f.samples) scan = std::max(scan, std::abs(v));
  CHECK(linf_norm(transform_forward(f)) == doctest::Approx(scan).epsilon(1e-13));
}

TEST_CASE("norms are absolutely homogeneous") {
  Grid2D g(32, 6.0);
  auto f = random_mean_zero(g, 33);
  const double c = -2.75;
  auto cf = c * f;
  CHECK(std::abs(l2_norm(cf) - std::abs(c) * l2_norm(f)) < 1e-12 * l2_norm(cf));
  CHECK(std::abs(sobolev_norm(cf, 3) - std::abs(c) * sobolev_norm(f, 3)) < 1e-12 * sobolev_norm(cf, 3));
  CHECK(std::abs(linf_norm(cf) - std::abs(c) * linf_norm(f)) < 1e-12 * linf_norm(cf));
  CHECK(std::abs(fhat_sup_weighted(cf) - std::abs(c) * fhat_sup_weighted(f)) < 1e-12 * fhat_sup_weighted(cf));
  const double w = weighted_profile_norm(f, 2).value;
  CHECK(std::abs(weighted_profile_norm(cf, 2).value - std::abs(c) * w) < 1e-12 * std::abs(c) * w);
}

namespace {

// Samples of f(x - a) where fhat = exp(-|xi|^2/2), i.e. f = 2 pi exp(-|x|^2/2).
SpectralField2D gaussian(const Grid2D& g, double a) {
  RealField2D f(g);
  for (int i2 = 0; i2 < g.n(); ++i2)
    for (int i1 = 0; i1 < g.n(); ++i1) {
      const Vec2 x = g.point(i1, i2);
      f.at(i1, i2) = 2 * pi * std::exp(-0.5 * ((x.x - a) * (x.x - a) + x.y * x.y));
    }
  return transform_forward(f);
}

// 2 pi int_0^inf r^(2l+3) exp(-r^2) dr by composite Simpson.
double radial_weighted_integral(int power) {
  const int m = 20000;
  const double R = 12.0, h = R / m;
  double acc = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double r = i * h;
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * std::pow(r, power) * std::exp(-r * r);
  }
  return 2 * pi * acc * h / 3.0;
}

}  // namespace

TEST_CASE("weighted_profile_norm: zero and Gaussian") {
  Grid2D g(256, 40.0);
  auto z = weighted_profile_norm(SpectralField2D(g), 2);
  CHECK(z.value == 0.0);
  CHECK_FALSE(z.boundary_warning);

  auto f = gaussian(g, 0.0);
  for (int l : {2, 3}) {
    const double oracle = std::sqrt(radial_weighted_integral(2 * l + 3));
    CHECK(std::abs(oracle * oracle - pi * std::tgamma(l + 2)) < 1e-8);
    auto w = weighted_profile_norm(Profile{f, 0.0}, l);
    CHECK(std::abs(w.value - oracle) / oracle < 0.01);
    CHECK_FALSE(w.boundary_warning);
  }
}

TEST_CASE("weighted_profile_norm: translation adds the modulation term") {
  Grid2D g(256, 40.0);
  const double a = 3.0;
  auto f0 = gaussian(g, 0.0);
  auto fa = gaussian(g, a);
  for (int l : {2, 3}) {
    const double n0 = weighted_profile_norm(f0, l).value;
    const double na = weighted_profile_norm(fa, l).value;
    // |grad(e^{-i a xi_1} fhat)|^2 = |grad fhat|^2 + a^2 |fhat|^2 for real fhat.
    const double extra = a * a * radial_weighted_integral(2 * l + 1);
    CHECK(std::abs(na * na - (n0 * n0 + extra)) / (n0 * n0 + extra) < 0.01);
    CHECK(na > n0);
  }
}

TEST_CASE("weighted_profile_norm: boundary warning") {
  Grid2D g(64, 10.0);
  auto w = weighted_profile_norm(random_mean_zero(g, 2), 2);
  CHECK(w.boundary_warning);
  CHECK(w.central_mass_fraction < 0.5);
}

TEST_CASE("fhat_sup_weighted: single mode at |xi| = 2") {
  Grid2D g(32, 2 * pi);
  SpectralField2D f(g);
  CHECK(fhat_sup_weighted(f) == 0.0);
  const double a = 0.3;
  f.mode(2, 0) = a;
  f.mode(-2, 0) = a;
  CHECK(fhat_sup_weighted(f) == doctest::Approx(4.0 * a * std::pow(g.box_length() / (2 * pi), 2)));
}

TEST_CASE("field file round trip") {
  Grid2D g(16, 3.5);
  auto f = random_real(g, 99);
  std::stringstream buf;
  write_field(buf, f);
  const std::string bytes = buf.str();
  CHECK(bytes.size() == 4 + 8 + 8 + 16 * 16 * 8);
  CHECK(bytes.substr(0, 4) == "BPF1");
  auto back = read_field(buf);
  CHECK(back.grid == g);
  CHECK(back.samples == f.samples);
  std::stringstream bad("XXXX");
  CHECK_THROWS_AS(read_field(bad), InputError);
}

TEST_CASE("NormReport CSV round trip") {
  NormReport r;
  r.t = 1.25;
  r.l2 = 0.1;
  r.hk = {0.1, 0.2, 0.30000000000000004};
  r.linf_omega = 1e-3;
  r.besov311 = 7.0;
  auto csv = norm_reports_to_csv({r, r}, {"seed=7"});
  CHECK(csv.rfind("# seed=7\nt,l2,hk,", 0) == 0);
  std::istringstream in(csv);
  auto back = norm_reports_from_csv(in);
  REQUIRE(back.size() == 2);
  CHECK(back[0].hk_top() == r.hk.back());
  CHECK(back[1].besov311 == 7.0);
}
