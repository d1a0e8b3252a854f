#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "bplab/errors.hpp"
#include "bplab/propagator/semigroup.hpp"
#include "bplab/solver/config.hpp"
#include "bplab/solver/dynamics.hpp"
#include "bplab/solver/scaling.hpp"
#include "bplab/solver/stepper.hpp"
#include "bplab/spectral/field_io.hpp"
#include "bplab/spectral/norms.hpp"
#include "bplab/spectral/transform.hpp"
#include "doctest.h"

using namespace bplab;
using namespace bplab::solver;
using spectral::Complex;
using std::numbers::pi;

namespace {

const Complex I{0.0, 1.0};

SpectralField2D random_vorticity(const Grid2D& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealField2D f(g);
  for (auto& v : f.samples) v = u(rng);
  auto s = spectral::transform_forward(f);
  s.mode(0, 0) = 0.0;
  return s;
}

SpectralField2D sine_x1(const Grid2D& g) {
  RealField2D f(g);
  for (int i2 = 0; i2 < g.n(); ++i2)
    for (int i1 = 0; i1 < g.n(); ++i1) f.at(i1, i2) = std::sin(2 * pi * g.coordinate(i1) / g.box_length());
  auto s = spectral::transform_forward(f);
  s.mode(0, 0) = 0.0;
  return s;
}

// Curl of a velocity spectrum, i xi_1 u2 - i xi_2 u1.
SpectralField2D curl(const SpectralField2D& u1, const SpectralField2D& u2) {
  SpectralField2D c(u1.grid);
  for (int i2 = 0; i2 < u1.grid.n(); ++i2)
    for (int i1 = 0; i1 < u1.grid.n(); ++i1) {
      const Vec2 xi = u1.grid.wavevector(i1, i2);
      c.at(i1, i2) = I * xi.x * u2.at(i1, i2) - I * xi.y * u1.at(i1, i2);
    }
  return c;
}

SimConfig small_config() {
  SimConfig c;
  c.n = 64;
  c.box_length = 30.0;
  c.beta = 1.0;
  c.dt = 0.05;
  c.t_end = 1.0;
  c.k_energy = 3;
  c.output_stride = 5;
  c.init.kind = InitKind::GaussianVortex;
  c.init.eps = 0.1;
  c.init.width = 2.0;
  c.light_reports = true;
  return c;
}

}  // namespace

TEST_CASE("biot_savart: zero and curl consistency") {
  Grid2D g(32, 10.0);
  auto [z1, z2] = biot_savart(SpectralField2D(g));
  CHECK(spectral::max_abs_mode(z1) == 0.0);
  CHECK(spectral::max_abs_mode(z2) == 0.0);

  auto w = sine_x1(g);
  auto [u1, u2] = biot_savart(w);
  CHECK(spectral::max_mode_difference(curl(u1, u2), w) < 1e-15);
  // u depends only on x1: every mode with k2 != 0 vanishes, and u1 = 0.
  CHECK(spectral::max_abs_mode(u1) < 1e-16);
  for (int k2 = -16; k2 < 16; ++k2)
    for (int k1 = -16; k1 < 16; ++k1)
      if (k2 != 0) REQUIRE(std::abs(u2.mode(k1, k2)) == 0.0);
  auto pu2 = spectral::transform_inverse(u2);
  for (int i2 = 1; i2 < 32; ++i2)
    for (int i1 = 0; i1 < 32; ++i1) REQUIRE(std::abs(pu2.at(i1, i2) - pu2.at(i1, 0)) < 1e-15);

  auto r = random_vorticity(g, 5);
  auto [v1, v2] = biot_savart(r);
  CHECK(spectral::max_mode_difference(curl(v1, v2), r) < 1e-14);
  CHECK(std::abs(biot_savart_sign()) == 1);
}

TEST_CASE("biot_savart: divergence free and mean check") {
  Grid2D g(32, 7.0);
  auto r = random_vorticity(g, 6);
  auto [u1, u2] = biot_savart(r);
  double worst = 0.0;
  for (int i2 = 0; i2 < 32; ++i2)
    for (int i1 = 0; i1 < 32; ++i1) {
      const Vec2 xi = g.wavevector(i1, i2);
      const Complex div = xi.x * u1.at(i1, i2) + xi.y * u2.at(i1, i2);
      const double scale = norm(xi) * std::hypot(std::abs(u1.at(i1, i2)), std::abs(u2.at(i1, i2)));
      if (scale > 0.0) worst = std::max(worst, std::abs(div) / scale);
    }
  CHECK(worst < 1e-15);
  r.mode(0, 0) = 0.3;
  CHECK_THROWS_AS(biot_savart(r), InputError);
}

TEST_CASE("nonlinear_term: sine and zero") {
  Grid2D g(64, 12.0);
  CHECK(spectral::max_abs_mode(nonlinear_term(SpectralField2D(g))) == 0.0);
  auto w = sine_x1(g);
  CHECK(spectral::max_abs_mode(nonlinear_term(w)) < 1e-15);
  // Pointwise check of u . grad omega in physical space.
  auto [u1, u2] = biot_savart(w);
  auto pu1 = spectral::transform_inverse(u1);
  for (double v : pu1.samples) REQUIRE(std::abs(v) < 1e-16);
}

TEST_CASE("nonlinear_term matches the convolution sum on 8x8") {
  Grid2D g(8, 5.0);
  auto w = dealias(random_vorticity(g, 44));

  // The Biot-Savart sign implied by the curl oracle on one mode.
  SpectralField2D probe(g);
  probe.mode(1, 2) = 1.0;
  probe.mode(-1, -2) = 1.0;
  auto [p1, p2] = biot_savart(probe);
  const Vec2 xi_p = g.wavevector(1, 2);
  const double sigma = (p2.mode(1, 2) / (I * xi_p.x / norm2(xi_p))).real();
  REQUIRE(std::abs(std::abs(sigma) - 1.0) < 1e-14);
  CHECK(spectral::max_mode_difference(curl(p1, p2), probe) < 1e-15);

  const auto n = nonlinear_term(w);
  double worst = 0.0, scale = 0.0;
  for (int a2 = -4; a2 < 4; ++a2)
    for (int a1 = -4; a1 < 4; ++a1) {
      Complex acc = 0.0;
      const bool kept = 3 * std::abs(a1) <= 8 && 3 * std::abs(a2) <= 8;
      if (kept) {
        const Vec2 xi{a1 * g.dk(), a2 * g.dk()};
        for (int b2 = -2; b2 <= 2; ++b2)
          for (int b1 = -2; b1 <= 2; ++b1) {
            const int c1 = a1 - b1, c2 = a2 - b2;
            if ((b1 == 0 && b2 == 0) || std::abs(c1) > 2 || std::abs(c2) > 2) continue;
            const Vec2 eta{b1 * g.dk(), b2 * g.dk()};
            const double m = dot(xi, perp(eta)) / norm2(eta);
            acc += sigma * m * w.mode(c1, c2) * w.mode(b1, b2);
          }
      }
      worst = std::max(worst, std::abs(acc - n.mode(a1, a2)));
      scale = std::max(scale, std::abs(acc));
    }
  CHECK(scale > 0.0);
  CHECK(worst < 1e-10 * scale);
}

TEST_CASE("nonlinear_term: orthogonality and single-line spectra") {
  Grid2D g(64, 20.0);
  auto w = dealias(random_vorticity(g, 8));
  auto n = nonlinear_term(w);
  const double pair = l2_pairing(n, w);
  CHECK(std::abs(pair) < 1e-10 * spectral::l2_norm(n) * spectral::l2_norm(w));

  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  for (auto [d1, d2] : {std::pair{1, 0}, std::pair{0, 1}, std::pair{1, 2}, std::pair{-3, 1}}) {
    SpectralField2D line(g);
    for (int s = 1; s * std::max(std::abs(d1), std::abs(d2)) <= 21; ++s) {
      const Complex c(nd(rng), nd(rng));
      line.mode(s * d1, s * d2) = c;
      line.mode(-s * d1, -s * d2) = std::conj(c);
    }
    CHECK(spectral::max_abs_mode(nonlinear_term(line)) < 1e-12 * spectral::max_abs_mode(line));
  }
}

TEST_CASE("linear forcing pairs to zero with omega") {
  Grid2D g(64, 20.0);
  auto w = random_vorticity(g, 12);
  auto f = linear_forcing(w, 1.0);
  CHECK(std::abs(l2_pairing(f, w)) < 1e-14 * spectral::l2_norm(f) * spectral::l2_norm(w));
}

TEST_CASE("ingestion rejects a nonzero mean") {
  Grid2D g(16, 4.0);
  RealField2D f(g);
  for (auto& v : f.samples) v = 1.0;
  CHECK_THROWS_AS(ingest_vorticity(f), InputError);
  f.samples[3] = std::nan("");
  CHECK_THROWS_AS(ingest_vorticity(f), InputError);
}

TEST_CASE("step: zero stays zero; linear-only keeps the profile") {
  auto cfg = small_config();
  cfg.init.eps = 0.0;
  SimState s = initial_state(cfg);
  Stepper st(cfg);
  for (int k = 0; k < 5; ++k) s = st.step(s);
  CHECK(spectral::max_abs_mode(s.profile.field) == 0.0);
  CHECK(s.step_count == 5);

  cfg = small_config();
  cfg.nonlinear = false;
  cfg.beta = 3.7;
  SimState a = initial_state(cfg);
  SimState b = step(a, cfg);
  CHECK(spectral::max_mode_difference(a.profile.field, b.profile.field) == 0.0);
  CHECK(b.t == doctest::Approx(cfg.dt));
}

TEST_CASE("step: beta = 0 is plain RK4 on the vorticity") {
  auto cfg = small_config();
  cfg.beta = 0.0;
  cfg.init.eps = 1.0;
  SimState s = initial_state(cfg);
  const auto& w = s.profile.field;
  const double dt = cfg.dt;
  auto k1 = nonlinear_term(w);
  auto k2 = nonlinear_term(w + (0.5 * dt) * k1);
  auto k3 = nonlinear_term(w + (0.5 * dt) * k2);
  auto k4 = nonlinear_term(w + dt * k3);
  auto expect = w + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  auto got = step(s, cfg);
  CHECK(spectral::max_mode_difference(got.profile.field, expect) < 1e-15 * spectral::max_abs_mode(expect));
}

TEST_CASE("step: stability bound rejects a large dt") {
  auto cfg = small_config();
  cfg.init.eps = 5.0;
  cfg.dt = 2.0;
  SimState s = initial_state(cfg);
  try {
    (void)step(s, cfg);
    FAIL("expected StepRejected");
  } catch (const StepRejected& e) {
    CHECK(e.suggested_dt > 0.0);
    CHECK(e.suggested_dt < cfg.dt);
    cfg.dt = e.suggested_dt;
    CHECK_NOTHROW((void)step(s, cfg));
  }
}

TEST_CASE("step: small Gaussian vortex conserves L2 over 1000 steps") {
  auto cfg = small_config();
  Stepper st(cfg);
  SimState s = initial_state(cfg);
  const double l0 = spectral::l2_norm(s.profile.field);
  for (int k = 0; k < 1000; ++k) s = st.step(s);
  const double l1 = spectral::l2_norm(vorticity_of(s.profile, cfg.beta));
  CHECK(std::abs(l1 - l0) / l0 < 1e-8);
  CHECK(spectral::hermitian_defect(s.profile.field) < 1e-15 * spectral::max_abs_mode(s.profile.field) + 1e-300);
  CHECK(s.profile.field.mode(0, 0) == Complex(0.0));
}

TEST_CASE("step: RK4 order") {
  auto base = small_config();
  base.n = 32;
  base.box_length = 30.0;
  base.init.eps = 2.0;
  base.init.width = 1.5;
  auto solve = [&](double dt) {
    auto cfg = base;
    cfg.dt = dt;
    Stepper st(cfg);
    SimState s = initial_state(cfg);
    const long n = std::lround(2.0 / dt);
    for (long k = 0; k < n; ++k) s = st.step(s);
    return s.profile.field;
  };
  const auto ref = solve(0.2 / 64);
  const double e1 = spectral::l2_norm(solve(0.2) - ref);
  const double e2 = spectral::l2_norm(solve(0.1) - ref);
  const double ratio = e1 / e2;
  MESSAGE("RK4 error ratio " << ratio);
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("run: zero data, conservation and report cadence") {
  auto cfg = small_config();
  cfg.init.eps = 0.0;
  auto res = run(cfg);
  REQUIRE_FALSE(res.aborted);
  CHECK(res.reports.size() == 5);
  for (const auto& r : res.reports) {
    CHECK(r.l2 == 0.0);
    CHECK(r.hk_top() == 0.0);
    CHECK(r.linf_omega == 0.0);
    CHECK(r.linf_u == 0.0);
    CHECK(r.linf_du == 0.0);
  }

  cfg = small_config();
  cfg.beta = 0.0;
  cfg.t_end = 10.0;
  cfg.dt = 0.05;
  cfg.output_stride = 20;
  res = run(cfg);
  REQUIRE_FALSE(res.aborted);
  CHECK(res.reports.size() == 11);
  CHECK(res.reports.back().t == doctest::Approx(10.0));
  const auto& r0 = res.reports.front();
  for (const auto& r : res.reports) {
    CHECK(std::abs(r.l2 - r0.l2) / r0.l2 < 1e-8);
    CHECK(std::abs(r.l2_u - r0.l2_u) / r0.l2_u < 1e-8);
    CHECK(r.l2 <= r.hk_at(1));
    CHECK(r.hk_at(0) == r.l2);
  }
}

TEST_CASE("run: blow-up guard and non-finite abort dump the state") {
  const auto dir = std::filesystem::temp_directory_path() / "bplab_solver_test";
  std::filesystem::remove_all(dir);
  auto cfg = small_config();
  cfg.dump_dir = dir;
  cfg.blowup_factor = 0.5;
  auto res = run(cfg);
  CHECK(res.aborted);
  CHECK(res.abort_reason.find("blow-up") != std::string::npos);
  CHECK(std::filesystem::exists(res.dump_path));

  cfg = small_config();
  cfg.dump_dir = dir;
  cfg.init.eps = 1e200;
  cfg.enforce_stability = false;
  cfg.light_reports = true;
  res = run(cfg);
  CHECK(res.aborted);
  CHECK(res.abort_reason.find("non-finite") != std::string::npos);
  REQUIRE(std::filesystem::exists(res.dump_path));
  auto dumped = spectral::load_field(res.dump_path);
  CHECK(dumped.grid.n() == cfg.n);
  std::filesystem::remove_all(dir);
}

TEST_CASE("run: checkpoints are written with an index") {
  const auto dir = std::filesystem::temp_directory_path() / "bplab_ckpt_test";
  std::filesystem::remove_all(dir);
  auto cfg = small_config();
  cfg.checkpoint_dir = dir;
  cfg.t_end = 0.5;
  auto res = run(cfg, {.keep_checkpoints = true});
  CHECK(res.checkpoints.size() == res.reports.size());
  CHECK(std::filesystem::exists(dir / "index.csv"));
  CHECK(std::filesystem::exists(dir / "ckpt_0.bpf"));
  CHECK(std::filesystem::exists(dir / "ckpt_10.bpf"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("config parsing") {
  auto cfg = parse_config("n=256\nL=100.0\nbeta=1.0\ndt=0.01\nt_end=50\nk_energy=4\ninit=gaussian\neps=0.1\n");
  CHECK(cfg.n == 256);
  CHECK(cfg.box_length == 100.0);
  CHECK(cfg.init.kind == InitKind::GaussianVortex);
  CHECK(cfg.init.eps == 0.1);
  auto round = parse_config(to_config_text(cfg));
  CHECK(round.dt == cfg.dt);
  CHECK(round.t_end == cfg.t_end);

  try {
    parse_config("n=64\n  dt = abc\n");
    FAIL("expected a parse error");
  } catch (const ConfigParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.column == 8);
  }
  try {
    parse_config("# comment\nfoo=1\n");
    FAIL("expected a parse error");
  } catch (const ConfigParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.column == 1);
  }
  CHECK_THROWS_AS(parse_config("n=100\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("dt=-1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("n 64\n"), ConfigParseError);
}

namespace {

RealField2D gaussian_samples(const Grid2D& g, double s) {
  RealField2D f(g);
  for (int i2 = 0; i2 < g.n(); ++i2)
    for (int i1 = 0; i1 < g.n(); ++i1) f.at(i1, i2) = std::exp(-norm2(g.point(i1, i2)) / (2 * s * s));
  return f;
}

double physical_l2(const RealField2D& f) {
  double acc = 0.0;
  for (double v : f.samples) acc += v * v;
  return std::sqrt(acc * f.grid.cell_area());
}

}  // namespace

TEST_CASE("scaling_transform") {
  Grid2D g(128, 20.0);
  auto f = gaussian_samples(g, 1.0);
  auto id = scaling_transform(f, 1.0);
  CHECK(id.samples == f.samples);

  for (double lambda : {2.0, 0.5}) {
    auto s = scaling_transform(f, lambda);
    // Pointwise against the closed form lambda^-1 exp(-|lambda x|^2 / (2 s^2)).
    double worst = 0.0;
    for (int i2 = 0; i2 < 128; ++i2)
      for (int i1 = 0; i1 < 128; ++i1) {
        const Vec2 x = g.point(i1, i2);
        const double expect = std::exp(-lambda * lambda * norm2(x) / 2.0) / lambda;
        worst = std::max(worst, std::abs(s.at(i1, i2) - expect));
      }
    CHECK(worst < 1e-9);
    CHECK(physical_l2(s) == doctest::Approx(physical_l2(f) / (lambda * lambda)).epsilon(1e-8));
  }
  CHECK_THROWS_AS(scaling_transform(f, 0.0), DomainError);
  CHECK_THROWS_AS(scaling_transform(gaussian_samples(g, 4.0), 0.2), DomainError);
  CHECK_THROWS_AS(scaling_transform(gaussian_samples(g, 0.4), 4.0), DomainError);
}
