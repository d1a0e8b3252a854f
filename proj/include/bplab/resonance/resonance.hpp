#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bplab/vec2.hpp"

namespace bplab::resonance {

using Mat2 = std::array<std::array<double, 2>, 2>;

/// A frequency pair (xi, eta). zeta = xi - eta throughout.
struct FreqPair {
  Vec2 xi;
  Vec2 eta;
  Vec2 zeta() const { return xi - eta; }
};

/// Throws DomainError when xi, eta or xi - eta is zero (relative margin 1e-12).
void validate(const FreqPair& p);

/// p(v) = v_1 / |v|^2 and its derivatives.
double dispersion(Vec2 v);
Vec2 dispersion_gradient(Vec2 v);
Mat2 dispersion_hessian(Vec2 v);

/// Phi = p(xi) - p(xi - eta) - p(eta).
double phase(const FreqPair& p);

struct NullForms {
  /// xi . eta_perp / |eta|^2
  double m = 0.0;
  /// m(xi, xi - eta) = -xi . eta_perp / |xi - eta|^2
  double mbar = 0.0;
};
NullForms null_form(const FreqPair& p);

struct PhaseGradient {
  Vec2 d_xi;
  Vec2 d_eta;
};
PhaseGradient grad_phase(const FreqPair& p);

/// |xi - 2 eta| |xi| / (|xi - eta|^2 |eta|^2)
double grad_eta_magnitude(const FreqPair& p);
/// |eta - 2 xi| |eta| / (|xi - eta|^2 |xi|^2)
double grad_xi_magnitude(const FreqPair& p);

struct SecondDerivs {
  Mat2 xi_xi;
  Mat2 eta_eta;
  /// xi_eta[i][j] = d_{xi_i} d_{eta_j} Phi
  Mat2 xi_eta;
};
SecondDerivs second_derivs(const FreqPair& p);

struct NullFormDerivs {
  Vec2 m_xi;
  Vec2 m_eta;
  Vec2 mbar_xi;
  Vec2 mbar_eta;
};
NullFormDerivs null_form_derivs(const FreqPair& p);

enum class Region { R1_Case1, R1_Case2A, R1_Case2B, R2, R3, Unclassified };
std::string to_string(Region r);

/// Signed slacks of the defining inequalities, positive when the inequality holds.
struct RegionMargins {
  double g11_lower = 0.0;  // |xi| - |eta|/100
  double g11_upper = 0.0;  // 100|eta| - |xi|
  double g12_lower = 0.0;  // |xi-eta| - |eta|/10000
  double g12_upper = 0.0;  // 10000|eta| - |xi-eta|
  double r2 = 0.0;         // |eta|/100 - |xi|
  double r3 = 0.0;         // |xi| - 100|eta|
  double case1 = 0.0;      // |xi-2eta| - |eta|/1000
  double subcase_a = 0.0;  // |xi_1| - |eta_1|/100
};

struct RegionLabel {
  Region region = Region::Unclassified;
  /// The pair after eta <-> xi - eta so that |eta| <= |xi - eta|.
  FreqPair normalized;
  bool swapped = false;
  RegionMargins margins;
};

RegionLabel classify_region(const FreqPair& p);

/// Sampler could not find enough pairs in the target region.
class SamplerError : public std::runtime_error {
 public:
  SamplerError(const std::string& what, long long attempts, long long accepted)
      : std::runtime_error(what), attempts(attempts), accepted(accepted) {}
  long long attempts;
  long long accepted;
};

struct InequalityEval {
  /// (greater - lesser)/(|greater| + |lesser|), minimum over the parts of a double inequality.
  double margin = 0.0;
  /// Observed constant for this pair (id-specific ratio).
  double constant = 0.0;
  /// Second ratio for two-sided claims, otherwise equal to constant.
  double constant_hi = 0.0;
};

/// Registered ids: 'a'..'f'.
const std::vector<char>& inequality_ids();
/// Whether label r is inside the region where inequality id is claimed.
bool in_inequality_region(char id, Region r);
std::string inequality_text(char id);

/// Evaluates inequality id on a pair already in its region (after normalization). Throws
/// InputError when the pair is in the wrong region and DomainError for an unknown id.
InequalityEval evaluate_inequality(char id, const FreqPair& p);

struct BoundCheckReport {
  std::string id;
  long long samples = 0;
  long long violations = 0;
  double worst_margin = 0.0;
  /// Extreme of the observed ratio in the conservative direction.
  double empirical_constant = 0.0;
  double constant_min = 0.0;
  double constant_max = 0.0;
  long long attempts = 0;
};

enum class Sampler {
  /// Region-adapted proposals (a disc around 2 eta, a band of near-vertical eta for subcase B)
  /// that are still exactly uniform on the product of annuli restricted to the region.
  Adapted,
  /// Plain product of annuli with rejection.
  AnnulusProduct,
};

/// Monte-Carlo certification on n pairs from the id's region, both |xi| and |eta| in [0.1, 10].
/// Throws SamplerError when fewer than 1e-6 of the draws land in the region.
BoundCheckReport certify_bound(char id, long long n, std::uint64_t seed, Sampler sampler = Sampler::Adapted);

/// CSV with columns id, samples, violations, worst_margin, empirical_constant.
std::string reports_to_csv(const std::vector<BoundCheckReport>& reports, const std::vector<std::string>& comments = {});

struct ProbeRow {
  double lambda = 0.0;
  double phase = 0.0;
  double grad_eta = 0.0;
  bool ok = false;
};

struct ProbeReport {
  std::vector<ProbeRow> rows;
  long long forward_checked = 0;
  long long forward_failures = 0;
  long long converse_checked = 0;
  long long converse_failures = 0;
  bool ok = false;
};

/// Spacetime resonance checks at ((0, 2 lambda), (0, lambda)) plus a random probe of
/// grad_eta Phi = 0 <=> xi = 2 eta.
ProbeReport resonance_probe(const std::vector<double>& lambdas, long long n_random = 10000, std::uint64_t seed = 1);

}  // namespace bplab::resonance
