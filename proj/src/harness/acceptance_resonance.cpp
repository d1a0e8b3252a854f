#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "bplab/harness/acceptance.hpp"
#include "bplab/resonance/resonance.hpp"
#include "bplab/rng.hpp"

namespace bplab::harness {

namespace {

using namespace bplab::resonance;

Vec2 log_annulus(Rng& rng) {
  const double r = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
  const double th = rng.uniform(0.0, 2 * std::numbers::pi);
  return {r * std::cos(th), r * std::sin(th)};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

CriterionResult identities(std::uint64_t seed) {
  constexpr long long kPairs = 1000000;
  Rng rng(seed, "acceptance/6");
  double symmetry = 0, harmonic = 0, mag_eta = 0, mag_xi = 0, spacetime = 0;
  for (long long i = 0; i < kPairs; ++i) {
    FreqPair p{log_annulus(rng), log_annulus(rng)};
    if (norm(p.zeta()) < 1e-6) continue;
    // Rounding of xi - (xi - eta) moves each term of Phi by ~ulp/|v|.
    const double scale = 1.0 / norm(p.xi) + 1.0 / norm(p.zeta()) + 1.0 / norm(p.eta);
    symmetry = std::max(symmetry, std::abs(phase(p) - phase({p.xi, p.zeta()})) / scale);

    const auto d = second_derivs(p);
    const auto& h = d.eta_eta;
    const double hn = std::hypot(h[0][0], h[0][1], h[1][1]);
    harmonic = std::max(harmonic, std::abs(h[0][0] + h[1][1]) / hn);

    const auto g = grad_phase(p);
    mag_eta = std::max(mag_eta, rel(norm(g.d_eta), grad_eta_magnitude(p)));
    mag_xi = std::max(mag_xi, rel(norm(g.d_xi), grad_xi_magnitude(p)));

    const double lam = std::exp(rng.uniform(std::log(1e-2), std::log(1e2)));
    const FreqPair st{{0.0, 2 * lam}, {0.0, lam}};
    spacetime = std::max({spacetime, std::abs(phase(st)) * lam, norm(grad_phase(st).d_eta) * lam * lam});
  }
  CriterionResult r;
  const double worst = std::max({symmetry, harmonic, mag_eta, mag_xi, spacetime});
  r.pass = worst < 1e-12;
  r.detail = "pairs=" + std::to_string(kPairs) + " symmetry=" + fmt(symmetry, 3) + " harmonicity=" + fmt(harmonic, 3) +
             " |grad_eta|=" + fmt(mag_eta, 3) + " |grad_xi|=" + fmt(mag_xi, 3) + " spacetime=" + fmt(spacetime, 3);
  return r;
}

CriterionResult certification(std::uint64_t seed) {
  constexpr long long kSamples = 1000000;
  CriterionResult r;
  r.pass = true;
  for (char id : inequality_ids()) {
    const std::string name(1, id);
    const auto rep = certify_bound(id, kSamples, stream_seed(seed, "acceptance/7/" + name));
    if (rep.violations != 0) r.pass = false;
    r.detail += name + ": violations=" + std::to_string(rep.violations) + " worst_margin=" + fmt(rep.worst_margin, 3) +
                " constant=[" + fmt(rep.constant_min, 4) + "," + fmt(rep.constant_max, 4) + "]; ";
    if (id == 'd' && !(rep.constant_min >= 0.5 && rep.constant_max <= 4.0)) r.pass = false;
  }
  r.detail += "samples per id=" + std::to_string(kSamples);
  return r;
}

}  // namespace

CriterionResult run_resonance_criterion(int id, std::uint64_t seed) {
  const auto& info = criterion_info(id);
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    if (id == 6) r = identities(seed);
    else if (id == 7) r = certification(seed);
    else throw std::out_of_range("criterion " + std::to_string(id) + " is not a resonance criterion");
  } catch (const std::out_of_range&) {
    throw;
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.id = id;
  r.name = info.name;
  r.module = info.module;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace bplab::harness
