#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bplab/solver/config.hpp"
#include "bplab/solver/dynamics.hpp"
#include "bplab/spectral/norms.hpp"

namespace bplab::solver {

using spectral::NormReport;
using spectral::Profile;

struct SimState {
  double t = 0.0;
  Profile profile;
  long step_count = 0;
};

/// dt exceeds 0.5 h / max|u|.
class StepRejected : public std::runtime_error {
 public:
  StepRejected(const std::string& what, double suggested) : std::runtime_error(what), suggested_dt(suggested) {}
  double suggested_dt;
};

/// omega(t) = exp(-i t beta xi_1/|xi|^2) fhat(t).
SpectralField2D vorticity_of(const Profile& f, double beta);
Profile profile_of(const SpectralField2D& omega, double t, double beta);

/// Classical RK4 on the profile with the linear flow as integrating factor. Reuses the phase
/// factors across stages and steps, so one Stepper should drive one run.
class Stepper {
 public:
  explicit Stepper(SimConfig cfg);
  ~Stepper();
  Stepper(Stepper&&) noexcept;
  Stepper& operator=(Stepper&&) noexcept;

  /// Throws StepRejected (state untouched) when the stability bound fails.
  SimState step(const SimState& state);
  const SimConfig& config() const { return cfg_; }
  /// max |u| seen at the first stage of the last accepted step.
  double last_max_speed() const { return last_speed_; }

 private:
  struct Impl;
  SimConfig cfg_;
  std::unique_ptr<Impl> impl_;
  double last_speed_ = 0.0;
};

/// One step with a fresh Stepper.
SimState step(const SimState& state, const SimConfig& cfg);

/// Initial vorticity spectrum for cfg.init, mean-zero and truncated to the two-thirds band.
SpectralField2D initial_vorticity(const SimConfig& cfg);
SimState initial_state(const SimConfig& cfg);

/// All norms of one output time. The Besov and weighted entries are skipped when light is set.
NormReport make_report(const SimState& state, const SimConfig& cfg);

struct Checkpoint {
  long step = 0;
  double t = 0.0;
  Profile profile;
};

struct RunResult {
  std::vector<NormReport> reports;
  /// Profiles at report times, when requested.
  std::vector<Checkpoint> checkpoints;
  SimState final_state;
  bool aborted = false;
  std::string abort_reason;
  std::filesystem::path dump_path;
};

struct RunOptions {
  bool keep_checkpoints = false;
  /// Called after every accepted step; returning false stops the run early without error.
  std::function<bool(const SimState&, const Stepper&)> on_step;
};

/// Integrates to cfg.t_end, reporting every output_stride steps and at the final time. Aborts
/// with aborted = true on blow-up of |omega|_inf, a non-finite state or a rejected step (the last
/// good state is dumped to a BPF1 file).
RunResult run(const SimConfig& cfg, const RunOptions& options = {});

}  // namespace bplab::solver
