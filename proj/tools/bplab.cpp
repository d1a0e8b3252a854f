#include <algorithm>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bplab/diagnostics/diagnostics.hpp"
#include "bplab/errors.hpp"
#include "bplab/harness/experiment.hpp"
#include "bplab/resonance/resonance.hpp"
#include "bplab/spectral/field_io.hpp"

using namespace bplab;
using harness::ExperimentManifest;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string out = ".";
  std::string config;
};

ExperimentManifest manifest_for(const Globals& g, const std::string& target) {
  ExperimentManifest m;
  m.name = target;
  m.seed = g.seed;
  m.output_dir = g.out;
  m.config = g.config;
  m.targets = {target};
  return m;
}

int classify(const std::vector<double>& xi, const std::vector<double>& eta) {
  const resonance::FreqPair p{{xi[0], xi[1]}, {eta[0], eta[1]}};
  const auto label = resonance::classify_region(p);
  const auto& q = label.normalized;
  const auto& mg = label.margins;
  using spectral::format_double;
  std::cout << "region,swapped,xi1,xi2,eta1,eta2,g11_lower,g11_upper,g12_lower,g12_upper,r2,r3,case1,subcase_a\n"
            << resonance::to_string(label.region) << "," << (label.swapped ? 1 : 0) << "," << format_double(q.xi.x)
            << "," << format_double(q.xi.y) << "," << format_double(q.eta.x) << "," << format_double(q.eta.y) << ","
            << format_double(mg.g11_lower) << "," << format_double(mg.g11_upper) << ","
            << format_double(mg.g12_lower) << "," << format_double(mg.g12_upper) << "," << format_double(mg.r2)
            << "," << format_double(mg.r3) << "," << format_double(mg.case1) << "," << format_double(mg.subcase_a)
            << "\n";
  return harness::kExitOk;
}

int bootstrap_point(double M, double k, double eps, double mu) {
  diagnostics::BootstrapParams p;
  p.M = M;
  p.k = k;
  p.eps = eps;
  p.mu = mu;
  const auto r = diagnostics::bootstrap_feasibility(p);
  std::cout << "condition,satisfied,margin\n";
  for (const auto& c : r.conditions)
    std::cout << c.name << "," << (c.satisfied ? 1 : 0) << "," << spectral::format_double(c.margin) << "\n";
  if (r.shortcut_applicable)
    std::cout << "shortcut," << (r.shortcut_satisfied ? 1 : 0) << "," << spectral::format_double(r.shortcut_margin)
              << "\n";
  std::cout << "feasible," << (r.feasible ? 1 : 0) << ",\n";
  return r.feasible ? harness::kExitOk : harness::kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bplab: pseudo-spectral beta-plane vorticity toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Root seed for every random stream");
  app.add_option("--out", g.out, "Output directory for CSV files");
  app.add_option("--config", g.config, "Run configuration (key=value)");
  app.set_version_flag("--version", harness::tool_version());

  auto* simulate = app.add_subcommand("simulate", "Integrate the configured run and write simulate.csv");

  std::vector<double> times;
  auto* decay = app.add_subcommand("decay", "Linear decay curve of unit-shell data, decay.csv");
  decay->add_option("--times", times, "Comma-separated times")->delimiter(',');

  long long samples = 100000;
  auto* stphase = app.add_subcommand("stphase", "Stationary-point survey over random x/t, stphase.csv");
  stphase->add_option("--samples", samples)->check(CLI::PositiveNumber);

  int k = 4;
  auto* diagnose = app.add_subcommand("diagnose", "Run the config and write energy/transport/weighted diagnostics");
  diagnose->add_option("--k", k, "Sobolev index for the energy certificate")->check(CLI::NonNegativeNumber);

  auto* reson = app.add_subcommand("resonance", "Phase-function checks");
  reson->require_subcommand(1);
  std::vector<std::string> ids;
  long long n_samples = 1000000;
  auto* verify = reson->add_subcommand("verify", "Monte-Carlo certification, resonance.csv");
  verify->add_option("--id", ids, "Inequality ids a-f (repeatable, default all)");
  verify->add_option("--n", n_samples, "Samples per inequality");
  std::vector<double> xi, eta;
  auto* classify_cmd = reson->add_subcommand("classify", "Region label of one pair");
  classify_cmd->add_option("--xi", xi)->expected(2)->required();
  classify_cmd->add_option("--eta", eta)->expected(2)->required();

  double M = 1.0, bk = 0.0, beps = 0.0, bmu = 0.0;
  auto* boot = app.add_subcommand("bootstrap", "Bootstrap feasibility search (or one point with --k --eps --mu)");
  boot->add_option("--M", M);
  auto* ok_k = boot->add_option("--k", bk);
  auto* ok_eps = boot->add_option("--eps", beps);
  auto* ok_mu = boot->add_option("--mu", bmu);
  ok_k->needs(ok_eps)->needs(ok_mu);

  std::vector<std::string> only;
  auto* repro = app.add_subcommand("reproduce-all", "Run the acceptance criteria, acceptance.csv");
  repro->add_option("--only", only, "Restrict to modules: propagator, solver, diagnostics, resonance");

  std::string manifest_path;
  auto* run = app.add_subcommand("run", "Run an experiment manifest");
  run->add_option("--manifest", manifest_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return harness::kExitConfig;
  }

  try {
    if (*simulate) return harness::run_experiment(manifest_for(g, "simulate"), std::cout);
    if (*decay) {
      auto m = manifest_for(g, "decay");
      if (!times.empty()) m.decay_times = times;
      return harness::run_experiment(m, std::cout);
    }
    if (*stphase) {
      auto m = manifest_for(g, "stphase");
      m.stphase_samples = samples;
      return harness::run_experiment(m, std::cout);
    }
    if (*diagnose) {
      auto m = manifest_for(g, "diagnose");
      m.diagnose_k = k;
      return harness::run_experiment(m, std::cout);
    }
    if (*verify) {
      auto m = manifest_for(g, "resonance");
      m.resonance_n = n_samples;
      if (!ids.empty()) {
        m.resonance_ids.clear();
        const auto& known = resonance::inequality_ids();
        for (const auto& id : ids) {
          if (id.size() != 1 || std::find(known.begin(), known.end(), id[0]) == known.end()) {
            std::cerr << "error: unknown inequality id '" << id << "'\n";
            return harness::kExitConfig;
          }
          m.resonance_ids += id;
        }
      }
      return harness::run_experiment(m, std::cout);
    }
    if (*classify_cmd) return classify(xi, eta);
    if (*boot) {
      if (*ok_k) return bootstrap_point(M, bk, beps, bmu);
      auto m = manifest_for(g, "bootstrap");
      m.bootstrap_M = M;
      return harness::run_experiment(m, std::cout);
    }
    if (*repro) return harness::reproduce_all(g.seed, g.out, only, std::cout);
    if (*run) {
      auto m = harness::load_manifest(manifest_path);
      return harness::run_experiment(m, std::cout);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return harness::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return harness::kExitViolation;
  }
  return harness::kExitOk;
}
