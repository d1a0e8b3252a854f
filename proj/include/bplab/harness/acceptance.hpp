#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bplab::harness {

struct CriterionInfo {
  int id = 0;
  std::string name;
  /// Module tag used by --only: propagator, solver, diagnostics or resonance.
  std::string module;
  double budget_seconds = 0.0;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  std::string module;
  bool pass = false;
  /// Deterministic summary of the measured numbers (no timings).
  std::string detail;
  double seconds = 0.0;
};

const std::vector<CriterionInfo>& criterion_table();
const CriterionInfo& criterion_info(int id);

/// Runs one criterion. Random draws come from substreams of seed named after the criterion.
CriterionResult run_criterion(int id, std::uint64_t seed);

/// Criteria 6 and 7. They only depend on the resonance module.
CriterionResult run_resonance_criterion(int id, std::uint64_t seed);

/// "PASS 7 region-bound certification: ..." without the timing.
std::string verdict_line(const CriterionResult& r);

/// CSV with columns criterion, name, module, verdict, detail.
std::string results_to_csv(const std::vector<CriterionResult>& results, const std::vector<std::string>& comments = {});

struct StphaseSurvey {
  long long samples = 0;
  long long roots = 0;
  int max_roots = 0;
  double max_grad = 0.0;
  /// det of the closed-form Hessian against -4/|xi|^6.
  double max_det_rel = 0.0;
  /// det of the finite-difference Hessian against hessian_det.
  double max_fd_rel = 0.0;
  long long failures = 0;
};

/// Random x/t with log-uniform |x/t| in [1e-2, 1e2]; checks every root found.
StphaseSurvey stphase_survey(long long samples, std::uint64_t seed);

/// printf-style %.*g formatting, locale independent for the values we print.
std::string fmt(double v, int digits = 6);

}  // namespace bplab::harness
