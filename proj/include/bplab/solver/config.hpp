#pragma once

#include <filesystem>
#include <string>

#include "bplab/errors.hpp"

namespace bplab::solver {

enum class InitKind { GaussianVortex, ShellBump, VortexPair, File };

/// Initial-data descriptor.
///
/// GaussianVortex: eps (1 - r^2/(2 s^2)) exp(-r^2/(2 s^2)), a shielded vortex with zero mean.
/// ShellBump: continuous transform eps phi(|xi|), the unit Littlewood-Paley shell.
/// VortexPair: eps (G(x - a) - G(x + a)) with G = exp(-r^2/(2 s^2)) and a = (separation/2, 0).
/// File: a BPF1 vorticity file on the configured grid.
struct InitSpec {
  InitKind kind = InitKind::GaussianVortex;
  double eps = 0.1;
  double width = 1.0;
  double separation = 4.0;
  std::filesystem::path file;
};

struct SimConfig {
  int n = 256;
  double box_length = 100.0;
  double beta = 1.0;
  double dt = 0.01;
  double t_end = 50.0;
  int k_energy = 4;
  int output_stride = 10;
  InitSpec init;
  bool nonlinear = true;
  /// Skip the Besov and weighted norms in reports (they cost extra transforms).
  bool light_reports = false;
  /// Abort when |omega|_inf exceeds this multiple of its initial value.
  double blowup_factor = 1e3;
  /// Reject steps that violate dt <= 0.5 h / max|u|. Only tests turn this off.
  bool enforce_stability = true;
  /// Where the last good state goes on a NaN abort; empty means the working directory.
  std::filesystem::path dump_dir;
  /// When set, every report also writes the vorticity as a BPF1 checkpoint plus index.csv.
  std::filesystem::path checkpoint_dir;
};

/// A config file line that failed to parse.
class ConfigParseError : public ConfigError {
 public:
  ConfigParseError(const std::string& msg, int line, int column);
  int line;
  int column;
};

/// Flat key=value text; '#' starts a comment. Unknown keys and malformed values are errors.
SimConfig parse_config(const std::string& text);
SimConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError when a field is out of range.
void validate(const SimConfig& cfg);

std::string to_string(InitKind kind);
std::string to_config_text(const SimConfig& cfg);

}  // namespace bplab::solver
