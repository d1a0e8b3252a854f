#include "bplab/solver/stepper.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "bplab/propagator/semigroup.hpp"
#include "bplab/spectral/field_io.hpp"
#include "bplab/spectral/transform.hpp"

namespace bplab::solver {

using spectral::Complex;

namespace {

void multiply(SpectralField2D& f, const std::vector<Complex>& factor, bool conjugate) {
  for (std::size_t i = 0; i < f.modes.size(); ++i) {
    f.modes[i] *= conjugate ? std::conj(factor[i]) : factor[i];
  }
}

bool all_finite(const SpectralField2D& f) {
  for (const auto& c : f.modes)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

}  // namespace

SpectralField2D vorticity_of(const Profile& f, double beta) {
  return propagator::apply_semigroup(f.field, beta * f.t);
}

Profile profile_of(const SpectralField2D& omega, double t, double beta) {
  return Profile{propagator::apply_semigroup(omega, -beta * t), t};
}

struct Stepper::Impl {
  std::vector<double> symbol;
  // exp(-i beta t p) for the few most recent stage times.
  std::map<double, std::vector<Complex>> phases;

  const std::vector<Complex>& phase(double t, double beta) {
    auto it = phases.find(t);
    if (it != phases.end()) return it->second;
    while (phases.size() >= 4) phases.erase(phases.begin());
    std::vector<Complex> ph(symbol.size());
    for (std::size_t i = 0; i < ph.size(); ++i) ph[i] = std::polar(1.0, -beta * t * symbol[i]);
    return phases.emplace(t, std::move(ph)).first->second;
  }
};

Stepper::Stepper(SimConfig cfg) : cfg_(std::move(cfg)), impl_(std::make_unique<Impl>()) {
  validate(cfg_);
  const Grid2D g(cfg_.n, cfg_.box_length);
  impl_->symbol.resize(g.size());
  for (int i2 = 0; i2 < g.n(); ++i2)
    for (int i1 = 0; i1 < g.n(); ++i1) impl_->symbol[g.flat(i1, i2)] = propagator::dispersion(g.wavevector(i1, i2));
}

Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;
Stepper& Stepper::operator=(Stepper&&) noexcept = default;

SimState Stepper::step(const SimState& state) {
  const double dt = cfg_.dt;
  const double beta = cfg_.beta;
  const double t0 = state.t;
  const double th = t0 + 0.5 * dt;
  const double t1 = t0 + dt;
  SimState next{t1, Profile{state.profile.field, t1}, state.step_count + 1};
  if (!cfg_.nonlinear) return next;

  const bool rotate = beta != 0.0;
  double speed = 0.0;
  // d fhat/dt = exp(+i beta t p) N(exp(-i beta t p) fhat).
  auto rhs = [&](const SpectralField2D& f, double t, bool first) {
    SpectralField2D omega = f;
    if (rotate) multiply(omega, impl_->phase(t, beta), false);
    auto nl = nonlinear_term_with_speed(omega);
    if (first) speed = nl.max_speed;
    if (rotate) multiply(nl.term, impl_->phase(t, beta), true);
    return std::move(nl.term);
  };

  const SpectralField2D& f0 = state.profile.field;
  SpectralField2D k1 = rhs(f0, t0, true);
  const double h = state.profile.field.grid.spacing();
  if (cfg_.enforce_stability && speed > 0.0 && dt > 0.5 * h / speed) {
    std::ostringstream msg;
    msg << "time step " << dt << " exceeds the advective bound " << 0.5 * h / speed << " at t = " << t0;
    throw StepRejected(msg.str(), 0.9 * 0.5 * h / speed);
  }
  SpectralField2D k2 = rhs(f0 + (0.5 * dt) * k1, th, false);
  SpectralField2D k3 = rhs(f0 + (0.5 * dt) * k2, th, false);
  SpectralField2D k4 = rhs(f0 + dt * k3, t1, false);

  auto& out = next.profile.field.modes;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] += (dt / 6.0) * (k1.modes[i] + 2.0 * k2.modes[i] + 2.0 * k3.modes[i] + k4.modes[i]);
  }
  last_speed_ = speed;
  return next;
}

SimState step(const SimState& state, const SimConfig& cfg) {
  Stepper s(cfg);
  return s.step(state);
}

NormReport make_report(const SimState& state, const SimConfig& cfg) {
  using namespace spectral;
  NormReport r;
  r.t = state.t;
  const SpectralField2D omega = vorticity_of(state.profile, cfg.beta);
  r.l2 = l2_norm(omega);
  for (int k = 0; k <= cfg.k_energy; ++k) r.hk.push_back(sobolev_norm(omega, k));
  r.linf_omega = linf_norm(omega);

  const auto sup = sup_norms(omega);
  r.linf_u = sup.u;
  r.linf_du = sup.du;
  r.l2_u = sup.l2_u;

  r.linf_forcing = linf_norm(linear_forcing(omega, cfg.beta));
  r.fhat_sup2 = fhat_sup_weighted(state.profile.field);
  if (!cfg.light_reports) {
    r.besov311 = besov_norm(omega, 3.0, 1.0, 1.0);
    const auto w2 = weighted_profile_norm(state.profile, 2);
    const auto w3 = weighted_profile_norm(state.profile, 3);
    r.weighted2 = w2.value;
    r.weighted3 = w3.value;
    r.boundary_warning = w2.boundary_warning || w3.boundary_warning;
  }
  return r;
}

namespace {

std::filesystem::path dump_state(const SimState& s, const SimConfig& cfg) {
  const auto dir = cfg.dump_dir.empty() ? std::filesystem::current_path() : cfg.dump_dir;
  std::filesystem::create_directories(dir);
  std::ostringstream name;
  name << "abort_step" << s.step_count << ".bpf";
  const auto path = dir / name.str();
  spectral::save_field(path, spectral::transform_inverse(vorticity_of(s.profile, cfg.beta)));
  return path;
}

class CheckpointWriter {
 public:
  explicit CheckpointWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) {
      std::filesystem::create_directories(dir_);
      index_ = "step,t,file\n";
    }
  }
  void write(const SimState& s, double beta) {
    if (dir_.empty()) return;
    std::ostringstream name;
    name << "ckpt_" << s.step_count << ".bpf";
    spectral::save_field(dir_ / name.str(), spectral::transform_inverse(vorticity_of(s.profile, beta)));
    index_ += std::to_string(s.step_count) + "," + spectral::format_double(s.t) + "," + name.str() + "\n";
    spectral::write_file_atomic(dir_ / "index.csv", index_);
  }

 private:
  std::filesystem::path dir_;
  std::string index_;
};

}  // namespace

RunResult run(const SimConfig& cfg, const RunOptions& options) {
  validate(cfg);
  Stepper stepper(cfg);
  SimState state = initial_state(cfg);
  RunResult result{.final_state = state};
  CheckpointWriter writer(cfg.checkpoint_dir);

  auto record = [&](const SimState& s) {
    result.reports.push_back(make_report(s, cfg));
    if (options.keep_checkpoints) result.checkpoints.push_back({s.step_count, s.t, s.profile});
    writer.write(s, cfg.beta);
  };
  record(state);
  const double linf0 = result.reports.front().linf_omega;

  const long n_steps = std::max(0L, std::lround(std::ceil(cfg.t_end / cfg.dt - 1e-9)));
  for (long k = 0; k < n_steps; ++k) {
    std::optional<SimState> stepped;
    try {
      stepped = stepper.step(state);
    } catch (const StepRejected& e) {
      result.aborted = true;
      result.abort_reason = std::string(e.what()) + " (suggested dt " + spectral::format_double(e.suggested_dt) + ")";
      result.dump_path = dump_state(state, cfg);
      break;
    }
    SimState next = std::move(*stepped);
    if (!all_finite(next.profile.field)) {
      result.aborted = true;
      result.abort_reason = "non-finite state at step " + std::to_string(next.step_count);
      result.dump_path = dump_state(state, cfg);
      break;
    }
    const double linf = spectral::linf_norm(vorticity_of(next.profile, cfg.beta));
    if (linf0 > 0.0 && linf > cfg.blowup_factor * linf0) {
      result.aborted = true;
      result.abort_reason = "blow-up guard: |omega|_inf grew past the configured factor at t = " +
                            spectral::format_double(next.t);
      result.dump_path = dump_state(next, cfg);
      state = std::move(next);
      record(state);
      break;
    }
    state = std::move(next);
    const bool last = k + 1 == n_steps;
    if (state.step_count % cfg.output_stride == 0 || last) record(state);
    if (options.on_step && !options.on_step(state, stepper)) {
      if (state.step_count % cfg.output_stride != 0 && !last) record(state);
      break;
    }
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace bplab::solver
