#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "bplab/harness/acceptance.hpp"

namespace bplab::harness {

/// Exit statuses shared by run_experiment, reproduce_all and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitAbort = 3;

/// Version written into every output header.
std::string tool_version();

struct ExperimentManifest {
  std::string name = "experiment";
  std::filesystem::path config;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = ".";
  /// Subset of simulate, decay, stphase, diagnose, resonance, bootstrap; run in order.
  std::vector<std::string> targets;
  std::string version = tool_version();

  std::string resonance_ids = "abcdef";
  long long resonance_n = 1000000;
  int diagnose_k = 4;
  double bootstrap_M = 1.0;
  std::vector<double> decay_times = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  long long stphase_samples = 100000;
};

/// Flat key=value text like the run config. Keys: name, config, seed, out, targets (comma list,
/// may be empty), resonance_ids, resonance_n, diagnose_k, bootstrap_M, decay_times,
/// stphase_samples. Relative paths are resolved against base_dir. Throws
/// solver::ConfigParseError with line and column.
ExperimentManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentManifest load_manifest(const std::filesystem::path& path);

/// Runs the targets in order, writing <target>.csv into output_dir atomically. One summary line
/// per target goes to log. Returns 0, 1 on any certification violation, 2 for configuration
/// problems (unparsable config, unwritable output dir) and 3 on a solver abort, after printing
/// the dump path.
int run_experiment(const ExperimentManifest& manifest, std::ostream& log);

/// Runs the acceptance criteria (all, or those whose module is in only), prints a verdict line
/// each plus the wall time against the budget, and writes acceptance.csv into out_dir. Nonzero
/// when a criterion fails.
int reproduce_all(std::uint64_t seed, const std::filesystem::path& out_dir, const std::vector<std::string>& only,
                  std::ostream& log);

}  // namespace bplab::harness
