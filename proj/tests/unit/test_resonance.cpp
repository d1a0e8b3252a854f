#include <cmath>
#include <numbers>

#include "bplab/errors.hpp"
#include "bplab/resonance/resonance.hpp"
#include "bplab/rng.hpp"
#include "doctest.h"

using namespace bplab;
using namespace bplab::resonance;

namespace {

Vec2 random_vec(Rng& rng) {
  const double r = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
  const double th = rng.uniform(0.0, 2 * std::numbers::pi);
  return {r * std::cos(th), r * std::sin(th)};
}

FreqPair random_pair(Rng& rng) {
  for (;;) {
    FreqPair p{random_vec(rng), random_vec(rng)};
    if (norm(p.zeta()) > 1e-6) return p;
  }
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("phase: closed values and symmetry") {
  CHECK(phase({{0, 2}, {0, 1}}) == 0.0);
  CHECK(phase({{1, 0}, {2, 0}}) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK_THROWS_AS(phase({{1, 0}, {0, 0}}), DomainError);
  CHECK_THROWS_AS(phase({{1, 0}, {1, 0}}), DomainError);
  CHECK_THROWS_AS(phase({{0, 0}, {1, 0}}), DomainError);

  Rng rng(11);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const auto p = random_pair(rng);
    // |p(v)| <= 1/|v|; rounding xi - (xi - eta) back to eta moves each term by ~ulp/|v|.
    const double scale = 1.0 / norm(p.xi) + 1.0 / norm(p.zeta()) + 1.0 / norm(p.eta);
    worst = std::max(worst, std::abs(phase(p) - phase({p.xi, p.zeta()})) / scale);
  }
  MESSAGE("phase symmetry, worst relative residual " << worst);
  CHECK(worst < 1e-13);
}

TEST_CASE("null_form: values, parallel pairs and the pointwise bound") {
  CHECK(null_form({{2, 0}, {1, 0}}).m == 0.0);
  CHECK(null_form({{0, 1}, {1, 0}}).m == 1.0);
  CHECK(null_form({{0.375, 0.875}, {1.125, 2.625}}).m == 0.0);
  CHECK(null_form({{3, 6}, {-1, -2}}).m == 0.0);
  Rng rng(12);
  double worst_bound = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const auto p = random_pair(rng);
    const auto nf = null_form(p);
    const FreqPair q{p.xi, p.zeta()};
    REQUIRE(std::abs(nf.mbar - null_form(q).m) <= 1e-13 * (std::abs(nf.mbar) + norm(p.xi) / norm(p.zeta())));
    const double cap = std::min(norm(p.xi), norm(p.xi - 2.0 * p.eta)) / norm(p.eta);
    worst_bound = std::max(worst_bound, std::abs(nf.m) / cap);
    const int e = static_cast<int>(rng.uniform(1, 4));
    const double s = std::ldexp(1.0, rng.uniform() < 0.5 ? e : -e);
    REQUIRE(null_form({s * p.eta, p.eta}).m == 0.0);
    REQUIRE(null_form({-s * p.eta, p.eta}).m == 0.0);
  }
  MESSAGE("largest |m| / (min(|xi|,|xi-2eta|)/|eta|): " << worst_bound);
  CHECK(worst_bound <= 1.0 + 1e-12);
}

TEST_CASE("grad_phase: space resonance and magnitude identities") {
  Rng rng(13);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 eta = random_vec(rng);
    const auto g = grad_phase({2.0 * eta, eta});
    REQUIRE(g.d_eta.x == 0.0);
    REQUIRE(g.d_eta.y == 0.0);
  }
  const auto st = grad_phase({{0, 2}, {0, 1}});
  CHECK(norm(st.d_eta) == 0.0);

  double worst_eta = 0.0, worst_xi = 0.0, worst_fd = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const auto p = random_pair(rng);
    const auto g = grad_phase(p);
    worst_eta = std::max(worst_eta, rel(norm(g.d_eta), grad_eta_magnitude(p)));
    worst_xi = std::max(worst_xi, rel(norm(g.d_xi), grad_xi_magnitude(p)));
    if (i < 2000) {
      const double h = 1e-6 * std::min({norm(p.xi), norm(p.eta), norm(p.zeta())});
      auto fd = [&](Vec2 dx, Vec2 de) {
        return (phase({p.xi + dx, p.eta + de}) - phase({p.xi - dx, p.eta - de})) / (2 * h);
      };
      const double s = norm(g.d_xi) + norm(g.d_eta);
      worst_fd = std::max({worst_fd, std::abs(fd({h, 0}, {}) - g.d_xi.x) / s, std::abs(fd({0, h}, {}) - g.d_xi.y) / s,
                           std::abs(fd({}, {h, 0}) - g.d_eta.x) / s, std::abs(fd({}, {0, h}) - g.d_eta.y) / s});
    }
  }
  CHECK(worst_eta < 1e-12);
  CHECK(worst_xi < 1e-12);
  CHECK(worst_fd < 1e-6);
}

TEST_CASE("second_derivs: harmonicity, mixed antisymmetry, finite differences") {
  Rng rng(14);
  for (int i = 0; i < 100000; ++i) {
    const auto d = second_derivs(random_pair(rng));
    REQUIRE(d.eta_eta[0][0] + d.eta_eta[1][1] == 0.0);
    REQUIRE(d.xi_eta[0][0] + d.xi_eta[1][1] == 0.0);
    REQUIRE(d.xi_xi[0][0] + d.xi_xi[1][1] == 0.0);
  }
  auto fd_check = [](const FreqPair& p) {
    const double h = 1e-5 * std::min({norm(p.xi), norm(p.eta), norm(p.zeta())});
    const auto d = second_derivs(p);
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < 2; ++i) {
      const Vec2 e = i == 0 ? Vec2{h, 0} : Vec2{0, h};
      const auto ep = grad_phase({p.xi, p.eta + e}), em = grad_phase({p.xi, p.eta - e});
      const auto xp = grad_phase({p.xi + e, p.eta}), xm = grad_phase({p.xi - e, p.eta});
      for (int j = 0; j < 2; ++j) {
        const double ee = ((j == 0 ? ep.d_eta.x - em.d_eta.x : ep.d_eta.y - em.d_eta.y)) / (2 * h);
        const double xx = ((j == 0 ? xp.d_xi.x - xm.d_xi.x : xp.d_xi.y - xm.d_xi.y)) / (2 * h);
        const double xe = ((j == 0 ? xp.d_eta.x - xm.d_eta.x : xp.d_eta.y - xm.d_eta.y)) / (2 * h);
        worst = std::max({worst, std::abs(ee - d.eta_eta[i][j]), std::abs(xx - d.xi_xi[i][j]),
                          std::abs(xe - d.xi_eta[i][j])});
        scale = std::max({scale, std::abs(d.eta_eta[i][j]), std::abs(d.xi_xi[i][j]), std::abs(d.xi_eta[i][j])});
      }
    }
    return worst / scale;
  };
  CHECK(fd_check({{3, 0}, {1, 0}}) < 1e-5);
  for (int i = 0; i < 500; ++i) REQUIRE(fd_check(random_pair(rng)) < 1e-5);
}

TEST_CASE("null_form_derivs") {
  const auto d = null_form_derivs({{1, 0}, {0, 1}});
  CHECK(d.m_xi.x == -1.0);
  CHECK(d.m_xi.y == 0.0);
  CHECK(null_form_derivs({{3, -2}, {0.4, 0.7}}).m_xi == null_form_derivs({{-1, 5}, {0.4, 0.7}}).m_xi);

  Rng rng(15);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const auto p = random_pair(rng);
    const auto g = null_form_derivs(p);
    const double h = 1e-6 * std::min({norm(p.xi), norm(p.eta), norm(p.zeta())});
    const double s = norm(g.m_xi) + norm(g.m_eta) + norm(g.mbar_xi) + norm(g.mbar_eta);
    for (int a = 0; a < 2; ++a) {
      const Vec2 e = a == 0 ? Vec2{h, 0} : Vec2{0, h};
      const auto xp = null_form({p.xi + e, p.eta}), xm = null_form({p.xi - e, p.eta});
      const auto ep = null_form({p.xi, p.eta + e}), em = null_form({p.xi, p.eta - e});
      const auto pick = [a](Vec2 v) { return a == 0 ? v.x : v.y; };
      worst = std::max({worst, std::abs((xp.m - xm.m) / (2 * h) - pick(g.m_xi)) / s,
                        std::abs((ep.m - em.m) / (2 * h) - pick(g.m_eta)) / s,
                        std::abs((xp.mbar - xm.mbar) / (2 * h) - pick(g.mbar_xi)) / s,
                        std::abs((ep.mbar - em.mbar) / (2 * h) - pick(g.mbar_eta)) / s});
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("classify_region") {
  CHECK(classify_region({{0, 2}, {0, 1}}).region == Region::R1_Case2A);
  const auto r2 = classify_region({{1, 0}, {200, 0}});
  CHECK(r2.region == Region::R2);
  CHECK(r2.swapped);
  CHECK(classify_region({{200, 0}, {1, 0}}).region == Region::R3);
  CHECK(classify_region({{1, 0}, {0, 1}}).region == Region::R1_Case1);
  CHECK(classify_region({{1e-6, 2}, {4e-4, 1}}).region == Region::R1_Case2B);
  CHECK(classify_region({{0.02, 2}, {0.01, 1}}).region == Region::R1_Case2A);
  // Boundary |xi - 2 eta| = |eta|/1000 exactly goes to case 1.
  CHECK(classify_region({{2.0 + 0.001, 0.0}, {1.0, 0.0}}).margins.case1 == doctest::Approx(0.0).epsilon(1e-12));

  Rng rng(16);
  for (int i = 0; i < 10000; ++i) {
    const auto p = random_pair(rng);
    const auto a = classify_region(p);
    const auto b = classify_region(p);
    REQUIRE(a.region == b.region);
    REQUIRE(norm(a.normalized.eta) <= norm(a.normalized.zeta()));
  }
}

TEST_CASE("evaluate_inequality guards its region and is scale invariant") {
  const FreqPair b_pair{{1e-6, 2.0}, {4e-4, 1.0}};
  REQUIRE(classify_region(b_pair).region == Region::R1_Case2B);
  CHECK_THROWS_AS(evaluate_inequality('b', b_pair), InputError);
  CHECK_THROWS_AS(evaluate_inequality('z', b_pair), DomainError);
  const auto m1 = evaluate_inequality('d', b_pair);
  for (double s : {0.1, 3.0, 47.0}) {
    const auto ms = evaluate_inequality('d', {s * b_pair.xi, s * b_pair.eta});
    CHECK(ms.margin == doctest::Approx(m1.margin).epsilon(1e-12));
  }
}

TEST_CASE("certify_bound: every registered inequality") {
  for (char id : inequality_ids()) {
    const auto r = certify_bound(id, 100000, 7);
    MESSAGE(id << ": violations " << r.violations << " worst " << r.worst_margin << " const " << r.constant_min
               << " .. " << r.constant_max << " attempts " << r.attempts);
    CHECK(r.samples == 100000);
    CHECK(r.violations == 0);
    CHECK(r.worst_margin >= 0.0);
    if (id == 'd') {
      CHECK(r.constant_min >= 0.5);
      CHECK(r.constant_max <= 4.0);
    }
  }
  CHECK_THROWS_AS(certify_bound('a', 100, 7), DomainError);
  CHECK_THROWS_AS(certify_bound('q', 100000, 7), DomainError);
}

TEST_CASE("certify_bound: deterministic per seed") {
  const auto a = certify_bound('b', 10000, 99);
  const auto b = certify_bound('b', 10000, 99);
  CHECK(reports_to_csv({a}) == reports_to_csv({b}));
  CHECK(reports_to_csv({a}).rfind("id,samples,violations,worst_margin,empirical_constant\n", 0) == 0);
}

TEST_CASE("certify_bound: plain annulus sampling starves on subcase B") {
  CHECK_THROWS_AS(certify_bound('c', 10000, 3, Sampler::AnnulusProduct), SamplerError);
}

TEST_CASE("resonance_probe") {
  const auto rep = resonance_probe({1.0, -3.5, 0.01, 250.0}, 20000, 5);
  CHECK(rep.ok);
  for (const auto& r : rep.rows) CHECK(r.ok);
  CHECK(rep.forward_failures == 0);
  CHECK(rep.converse_checked > 10000);
  CHECK_THROWS_AS(resonance_probe({0.0}), DomainError);

  Rng rng(17);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 eta = random_vec(rng);
    const double th = rng.uniform(0, 2 * std::numbers::pi);
    const Vec2 xi = 2.0 * eta + norm(eta) * Vec2{std::cos(th), std::sin(th)};
    if (norm(xi - eta) < 1e-6 || norm(xi) < 1e-6) continue;
    const FreqPair p{xi, eta};
    const double expect = norm(eta) * norm(xi) / (norm2(p.zeta()) * norm2(eta));
    REQUIRE(norm(grad_phase(p).d_eta) > 0.0);
    REQUIRE(rel(norm(grad_phase(p).d_eta), expect) < 1e-12);
  }
}
