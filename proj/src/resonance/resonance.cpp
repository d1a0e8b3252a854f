#include "bplab/resonance/resonance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "bplab/errors.hpp"
#include "bplab/parallel.hpp"
#include "bplab/rng.hpp"

namespace bplab::resonance {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRadiusMin = 0.1;
constexpr double kRadiusMax = 10.0;
constexpr long long kBlock = 1 << 16;

double margin_of(double greater, double lesser) {
  const double d = std::abs(greater) + std::abs(lesser);
  return d == 0.0 ? 0.0 : (greater - lesser) / d;
}

// a . b_perp = a2 b1 - a1 b2, with the products differenced exactly so parallel vectors give 0.
double dot_perp(Vec2 a, Vec2 b) {
  const double w = a.x * b.y;
  const double e = std::fma(-a.x, b.y, w);
  const double f = std::fma(a.y, b.x, -w);
  return f + e;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

void validate(const FreqPair& p) {
  const double scale = std::max(norm(p.xi), norm(p.eta));
  const double tol = 1e-12 * scale;
  if (!(scale > 0.0) || norm(p.xi) <= tol) throw DomainError("frequency pair needs xi != 0");
  if (norm(p.eta) <= tol) throw DomainError("frequency pair needs eta != 0");
  if (norm(p.zeta()) <= tol) throw DomainError("frequency pair needs xi != eta");
}

double dispersion(Vec2 v) { return v.x / norm2(v); }

Vec2 dispersion_gradient(Vec2 v) {
  const double r4 = norm2(v) * norm2(v);
  return {(v.y * v.y - v.x * v.x) / r4, -2.0 * v.x * v.y / r4};
}

Mat2 dispersion_hessian(Vec2 v) {
  const double x = v.x, y = v.y;
  const double r2 = norm2(v);
  const double r6 = r2 * r2 * r2;
  const double a = (2 * x * x * x - 6 * x * y * y) / r6;
  const double b = (6 * x * x * y - 2 * y * y * y) / r6;
  return {{{a, b}, {b, -a}}};
}

double phase(const FreqPair& p) {
  validate(p);
  return dispersion(p.xi) - dispersion(p.zeta()) - dispersion(p.eta);
}

NullForms null_form(const FreqPair& p) {
  validate(p);
  const double c = dot_perp(p.xi, p.eta);
  return {c / norm2(p.eta), -c / norm2(p.zeta())};
}

PhaseGradient grad_phase(const FreqPair& p) {
  validate(p);
  const Vec2 gz = dispersion_gradient(p.zeta());
  return {dispersion_gradient(p.xi) - gz, gz - dispersion_gradient(p.eta)};
}

double grad_eta_magnitude(const FreqPair& p) {
  validate(p);
  return norm(p.xi - 2.0 * p.eta) * norm(p.xi) / (norm2(p.zeta()) * norm2(p.eta));
}

double grad_xi_magnitude(const FreqPair& p) {
  validate(p);
  return norm(p.eta - 2.0 * p.xi) * norm(p.eta) / (norm2(p.zeta()) * norm2(p.xi));
}

SecondDerivs second_derivs(const FreqPair& p) {
  validate(p);
  const Mat2 hx = dispersion_hessian(p.xi);
  const Mat2 hz = dispersion_hessian(p.zeta());
  const Mat2 he = dispersion_hessian(p.eta);
  SecondDerivs d;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      d.xi_xi[i][j] = hx[i][j] - hz[i][j];
      d.eta_eta[i][j] = -hz[i][j] - he[i][j];
      d.xi_eta[i][j] = hz[i][j];
    }
  return d;
}

NullFormDerivs null_form_derivs(const FreqPair& p) {
  validate(p);
  const Vec2 z = p.zeta();
  const double e2 = norm2(p.eta), z2 = norm2(z);
  const auto [m, mbar] = null_form(p);
  NullFormDerivs d;
  d.m_xi = perp(p.eta) / e2;
  d.m_eta = -perp(p.xi) / e2 - (2.0 * m / e2) * p.eta;
  d.mbar_xi = -perp(p.eta) / z2 - (2.0 * mbar / z2) * z;
  d.mbar_eta = perp(p.xi) / z2 + (2.0 * mbar / z2) * z;
  return d;
}

std::string to_string(Region r) {
  switch (r) {
    case Region::R1_Case1: return "R1_Case1";
    case Region::R1_Case2A: return "R1_Case2A";
    case Region::R1_Case2B: return "R1_Case2B";
    case Region::R2: return "R2";
    case Region::R3: return "R3";
    case Region::Unclassified: return "Unclassified";
  }
  return "Unclassified";
}

RegionLabel classify_region(const FreqPair& p) {
  validate(p);
  RegionLabel out;
  out.normalized = p;
  if (norm(p.eta) > norm(p.zeta())) {
    out.normalized = {p.xi, p.zeta()};
    out.swapped = true;
  }
  const Vec2 xi = out.normalized.xi, eta = out.normalized.eta, z = out.normalized.zeta();
  const double nx = norm(xi), ne = norm(eta), nz = norm(z);
  auto& m = out.margins;
  m.g11_lower = nx - ne / 100.0;
  m.g11_upper = 100.0 * ne - nx;
  m.g12_lower = nz - ne / 10000.0;
  m.g12_upper = 10000.0 * ne - nz;
  m.r2 = ne / 100.0 - nx;
  m.r3 = nx - 100.0 * ne;
  m.case1 = norm(xi - 2.0 * eta) - ne / 1000.0;
  m.subcase_a = std::abs(xi.x) - std::abs(eta.x) / 100.0;

  if (m.g11_lower >= 0 && m.g11_upper >= 0 && m.g12_lower >= 0 && m.g12_upper >= 0) {
    if (m.case1 >= 0) out.region = Region::R1_Case1;
    else out.region = m.subcase_a >= 0 ? Region::R1_Case2A : Region::R1_Case2B;
  } else if (m.r2 >= 0) {
    out.region = Region::R2;
  } else if (m.r3 >= 0) {
    out.region = Region::R3;
  }
  return out;
}

const std::vector<char>& inequality_ids() {
  static const std::vector<char> ids{'a', 'b', 'c', 'd', 'e', 'f'};
  return ids;
}

bool in_inequality_region(char id, Region r) {
  const bool case2 = r == Region::R1_Case2A || r == Region::R1_Case2B;
  switch (id) {
    case 'a':
    case 'f': return case2;
    case 'b': return r == Region::R1_Case2A;
    case 'c':
    case 'd': return r == Region::R1_Case2B;
    case 'e': return r == Region::R1_Case1;
    default: throw DomainError(std::string("unknown inequality id '") + id + "'");
  }
}

std::string inequality_text(char id) {
  switch (id) {
    case 'a': return "|Phi| >= (0.6|xi_1| - 0.002|eta_1|)/|eta|^2 on R1 case 2";
    case 'b': return "|Phi| >= |xi_1|/(2|eta|^2) on R1_Case2A";
    case 'c': return "|d_eta2 Phi| >= |eta_1||eta|/(4|xi-eta|^4) on R1_Case2B";
    case 'd': return "|eta_1||eta|/2 <= |xi.eta_perp| <= 4|eta_1||eta| on R1_Case2B";
    case 'e': return "|grad_xi Phi|/|grad_eta Phi| = |eta-2xi||eta|^3/(|xi-2eta||xi|^3) bounded on R1_Case1";
    case 'f': return "1.999|eta| <= |xi| <= 2.001|eta|, 0.999|eta| <= |xi-eta| <= 1.001|eta| on R1 case 2";
    default: throw DomainError(std::string("unknown inequality id '") + id + "'");
  }
}

InequalityEval evaluate_inequality(char id, const FreqPair& raw) {
  const auto label = classify_region(raw);
  if (!in_inequality_region(id, label.region)) {
    throw InputError(std::string("inequality (") + id + ") does not apply in region " + to_string(label.region));
  }
  const FreqPair& p = label.normalized;
  const Vec2 xi = p.xi, eta = p.eta, z = p.zeta();
  const double ne = norm(eta), ne2 = norm2(eta), nz = norm(z);
  InequalityEval r;
  switch (id) {
    case 'a': {
      const double lhs = std::abs(phase(p));
      const double rhs = (0.6 * std::abs(xi.x) - 0.002 * std::abs(eta.x)) / ne2;
      r.margin = margin_of(lhs, rhs);
      r.constant = rhs > 0.0 ? lhs / rhs : kInf;
      break;
    }
    case 'b': {
      const double lhs = std::abs(phase(p));
      const double rhs = std::abs(xi.x) / (2.0 * ne2);
      r.margin = margin_of(lhs, rhs);
      r.constant = std::abs(xi.x) > 0.0 ? lhs * ne2 / std::abs(xi.x) : kInf;
      break;
    }
    case 'c': {
      const double lhs = std::abs(grad_phase(p).d_eta.y);
      const double base = std::abs(eta.x) * ne;
      const double z4 = nz * nz * nz * nz;
      r.margin = margin_of(lhs, base / (4.0 * z4));
      r.constant = base > 0.0 ? lhs * z4 / base : kInf;
      break;
    }
    case 'd': {
      const double c = std::abs(dot_perp(xi, eta));
      const double base = std::abs(eta.x) * ne;
      r.margin = std::min(margin_of(c, 0.5 * base), margin_of(4.0 * base, c));
      r.constant = base > 0.0 ? c / base : kInf;
      break;
    }
    case 'e': {
      const auto g = grad_phase(p);
      const double q = norm(g.d_xi) / norm(g.d_eta);
      const double nx = norm(xi);
      const double closed = norm(eta - 2.0 * xi) * ne * ne2 / (norm(xi - 2.0 * eta) * nx * nx * nx);
      // Explicit ceiling from the case constants: |xi-2eta| >= |eta|/1000, |xi| >= |eta|/100.
      constexpr double ceiling = 1000.0 * (2.0 * 1e4 + 1e6);
      const double rel = std::abs(q - closed) / closed;
      r.margin = std::min(margin_of(ceiling, q), margin_of(1e-10, rel));
      r.constant = q;
      break;
    }
    case 'f': {
      const double nx = norm(xi);
      r.margin = std::min({margin_of(nx, 1.999 * ne), margin_of(2.001 * ne, nx), margin_of(nz, 0.999 * ne),
                           margin_of(1.001 * ne, nz)});
      r.constant = 1000.0 * std::max(std::abs(nx / ne - 2.0), std::abs(nz / ne - 1.0));
      break;
    }
    default: throw DomainError(std::string("unknown inequality id '") + id + "'");
  }
  r.constant_hi = r.constant;
  return r;
}

namespace {

Vec2 polar(double r, double theta) { return {r * std::cos(theta), r * std::sin(theta)}; }

// Uniform on the annulus kRadiusMin <= |v| <= kRadiusMax.
Vec2 annulus_point(Rng& rng) {
  const double a = kRadiusMin * kRadiusMin, b = kRadiusMax * kRadiusMax;
  return polar(std::sqrt(a + (b - a) * rng.uniform()), 2.0 * std::numbers::pi * rng.uniform());
}

// Largest |eta| for which some case-2 xi (|xi| >= 1.999|eta|) stays inside the annulus.
constexpr double kCase2EtaMax = kRadiusMax / 1.999;

// Radius with density proportional to r^3 on [kRadiusMin, kCase2EtaMax].
double cubic_radius(Rng& rng) {
  const double a = std::pow(kRadiusMin, 4), b = std::pow(kCase2EtaMax, 4);
  return std::pow(a + (b - a) * rng.uniform(), 0.25);
}

// Case 2 proposal: eta with density ~ |eta|^2 (the area of its disc), xi uniform in the disc
// |xi - 2 eta| <= |eta|/1000. After rejection this is exactly uniform on the product of
// annuli restricted to the region; normalized case-2 pairs satisfy the raw disc condition too.
std::optional<FreqPair> disc_sample(Rng& rng) {
  const Vec2 eta = polar(cubic_radius(rng), 2.0 * std::numbers::pi * rng.uniform());
  const double rho = norm(eta) / 1000.0 * std::sqrt(rng.uniform());
  return FreqPair{2.0 * eta + polar(rho, 2.0 * std::numbers::pi * rng.uniform()), eta};
}

// Subcase B proposal. Pairs in subcase B (after normalization) have |eta_1| < |eta|/1000 and
// |xi_1| < |eta_1|/50, so xi is drawn uniformly from the rectangle
// [-w, w] x [2 eta_2 - r, 2 eta_2 + r] with w = |eta_1|/50, r = |eta|/1000, and eta with density
// ~ w r (the rectangle area): the angle through acceptance |eta_1|/|eta| * 1000, the radius as r^3.
std::optional<FreqPair> band_sample(Rng& rng) {
  const double half = std::asin(1e-3);
  double theta = std::numbers::pi / 2 + half * (2.0 * rng.uniform() - 1.0);
  if (rng.uniform() < 0.5) theta += std::numbers::pi;
  if (rng.uniform() * 1e-3 >= std::abs(std::cos(theta))) return std::nullopt;
  const Vec2 eta = polar(cubic_radius(rng), theta);
  const double w = std::abs(eta.x) / 50.0, r = norm(eta) / 1000.0;
  const Vec2 xi{w * (2.0 * rng.uniform() - 1.0), 2.0 * eta.y + r * (2.0 * rng.uniform() - 1.0)};
  if (norm(xi - 2.0 * eta) > r) return std::nullopt;
  return FreqPair{xi, eta};
}

bool in_annulus(Vec2 v) {
  const double r = norm(v);
  return r >= kRadiusMin && r <= kRadiusMax;
}

struct BlockResult {
  long long samples = 0;
  long long violations = 0;
  long long attempts = 0;
  double worst_margin = kInf;
  double cmin = kInf;
  double cmax = -kInf;
};

}  // namespace

BoundCheckReport certify_bound(char id, long long n, std::uint64_t seed, Sampler sampler) {
  (void)in_inequality_region(id, Region::Unclassified);  // rejects unknown ids
  if (n < 10000) throw DomainError("certify_bound needs at least 10^4 samples");
  const long long blocks = (n + kBlock - 1) / kBlock;
  std::vector<BlockResult> results(static_cast<std::size_t>(blocks));

  parallel_for(results.size(), [&](std::size_t b) {
    Rng rng(seed, std::string("resonance/") + id + "/" + std::to_string(b));
    const long long want = std::min<long long>(kBlock, n - static_cast<long long>(b) * kBlock);
    BlockResult& out = results[b];
    while (out.samples < want) {
      ++out.attempts;
      if (out.attempts > 1'000'000 && static_cast<double>(out.samples) < 1e-6 * static_cast<double>(out.attempts)) {
        throw SamplerError(std::string("region sampling for (") + id + ") starved: " + std::to_string(out.samples) +
                               " of " + std::to_string(out.attempts) + " draws accepted",
                           out.attempts, out.samples);
      }
      std::optional<FreqPair> proposal;
      if (sampler == Sampler::AnnulusProduct || id == 'e') {
        proposal = FreqPair{annulus_point(rng), annulus_point(rng)};
      } else if (id == 'c' || id == 'd') {
        proposal = band_sample(rng);
      } else {
        proposal = disc_sample(rng);
      }
      if (!proposal) continue;
      const FreqPair& p = *proposal;
      if (!in_annulus(p.xi) || !in_annulus(p.eta)) continue;
      if (!in_inequality_region(id, classify_region(p).region)) continue;
      const auto e = evaluate_inequality(id, p);
      ++out.samples;
      if (e.margin < 0.0) ++out.violations;
      out.worst_margin = std::min(out.worst_margin, e.margin);
      out.cmin = std::min(out.cmin, e.constant);
      out.cmax = std::max(out.cmax, e.constant_hi);
    }
  });

  BlockResult total;
  for (const auto& r : results) {
    total.samples += r.samples;
    total.violations += r.violations;
    total.attempts += r.attempts;
    total.worst_margin = std::min(total.worst_margin, r.worst_margin);
    total.cmin = std::min(total.cmin, r.cmin);
    total.cmax = std::max(total.cmax, r.cmax);
  }
  BoundCheckReport rep;
  rep.id = std::string(1, id);
  rep.samples = total.samples;
  rep.violations = total.violations;
  rep.attempts = total.attempts;
  rep.worst_margin = total.worst_margin;
  rep.constant_min = total.cmin;
  rep.constant_max = total.cmax;
  // Lower-bound claims report the smallest ratio seen, ceilings the largest.
  rep.empirical_constant = (id == 'e' || id == 'f') ? total.cmax : total.cmin;
  return rep;
}

std::string reports_to_csv(const std::vector<BoundCheckReport>& reports, const std::vector<std::string>& comments) {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  out += "id,samples,violations,worst_margin,empirical_constant\n";
  for (const auto& r : reports) {
    out += r.id + "," + std::to_string(r.samples) + "," + std::to_string(r.violations) + "," + fmt(r.worst_margin) +
           "," + fmt(r.empirical_constant) + "\n";
  }
  return out;
}

ProbeReport resonance_probe(const std::vector<double>& lambdas, long long n_random, std::uint64_t seed) {
  ProbeReport rep;
  bool ok = true;
  for (double l : lambdas) {
    if (l == 0.0) throw DomainError("resonance_probe needs lambda != 0");
    const FreqPair p{{0.0, 2.0 * l}, {0.0, l}};
    ProbeRow row;
    row.lambda = l;
    row.phase = std::abs(phase(p));
    row.grad_eta = norm(grad_phase(p).d_eta);
    row.ok = row.phase < 1e-14 && row.grad_eta < 1e-14;
    ok = ok && row.ok;
    rep.rows.push_back(row);
  }
  Rng rng(seed, "resonance/probe");
  for (long long i = 0; i < n_random; ++i) {
    const Vec2 eta = annulus_point(rng);
    const FreqPair on{2.0 * eta, eta};
    ++rep.forward_checked;
    if (norm(grad_phase(on).d_eta) != 0.0) ++rep.forward_failures;

    const FreqPair off{annulus_point(rng), annulus_point(rng)};
    if (norm(off.zeta()) <= 1e-12 * norm(off.eta)) continue;
    if (norm(off.xi - 2.0 * off.eta) > 1e-6 * norm(off.eta)) {
      ++rep.converse_checked;
      if (!(norm(grad_phase(off).d_eta) > 0.0)) ++rep.converse_failures;
    }
  }
  rep.ok = ok && rep.forward_failures == 0 && rep.converse_failures == 0;
  return rep;
}

}  // namespace bplab::resonance
