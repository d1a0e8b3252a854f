#include "bplab/harness/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include "bplab/diagnostics/diagnostics.hpp"
#include "bplab/errors.hpp"
#include "bplab/propagator/decay.hpp"
#include "bplab/resonance/resonance.hpp"
#include "bplab/rng.hpp"
#include "bplab/solver/config.hpp"
#include "bplab/solver/stepper.hpp"
#include "bplab/spectral/field_io.hpp"
#include "bplab/spectral/littlewood_paley.hpp"

#ifndef BPLAB_VERSION
#define BPLAB_VERSION "dev"
#endif

namespace bplab::harness {

namespace fs = std::filesystem;
using solver::ConfigParseError;
using spectral::format_double;

std::string tool_version() { return BPLAB_VERSION; }

namespace {

const std::vector<std::string> kTargets = {"simulate", "decay", "stphase", "diagnose", "resonance", "bootstrap"};
const std::vector<std::string> kModules = {"propagator", "solver", "diagnostics", "resonance"};

std::string trim(const std::string& s, std::size_t& offset) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  offset = a;
  return s.substr(a, b - a);
}

template <class T>
T parse_number(const std::string& v, int line, int col) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigParseError("expected a number, got '" + v + "'", line, col);
  return out;
}

// Comma-separated items with the column where each starts.
std::vector<std::pair<std::string, int>> split_list(const std::string& v, int col) {
  std::vector<std::pair<std::string, int>> items;
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto comma = std::min(v.find(',', start), v.size());
    std::size_t off = 0;
    const auto item = trim(v.substr(start, comma - start), off);
    if (!item.empty()) items.emplace_back(item, col + static_cast<int>(start + off));
    start = comma + 1;
  }
  return items;
}

struct Header {
  const ExperimentManifest& m;
  std::vector<std::string> lines(const std::string& target) const {
    return {"experiment: " + m.name, "target: " + target, "seed: " + std::to_string(m.seed),
            "version: " + m.version, "config: " + (m.config.empty() ? std::string("none") : m.config.string())};
  }
};

std::string with_comments(const std::vector<std::string>& comments, const std::string& body) {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  return out + body;
}

bool writable(const fs::path& dir, std::string& why) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    why = "cannot create output directory " + dir.string() + ": " + ec.message();
    return false;
  }
  const auto probe = dir / ".bplab_write_probe";
  {
    std::ofstream out(probe);
    if (!out || !(out << "x")) {
      why = "output directory " + dir.string() + " is not writable";
      return false;
    }
  }
  fs::remove(probe, ec);
  return true;
}

solver::SimConfig require_config(const ExperimentManifest& m, const std::string& target) {
  if (m.config.empty()) throw ConfigError("target " + target + " needs a config file");
  return solver::load_config(m.config);
}

int do_simulate(const ExperimentManifest& m, const Header& h, std::ostream& log) {
  auto cfg = require_config(m, "simulate");
  if (cfg.dump_dir.empty()) cfg.dump_dir = m.output_dir;
  const auto res = solver::run(cfg);
  auto comments = h.lines("simulate");
  if (res.aborted) comments.push_back("aborted: " + res.abort_reason);
  spectral::write_file_atomic(m.output_dir / "simulate.csv", spectral::norm_reports_to_csv(res.reports, comments));
  if (res.aborted) {
    log << "simulate: ABORT " << res.abort_reason << "; dump: " << res.dump_path.string() << "\n";
    return kExitAbort;
  }
  const auto& last = res.reports.back();
  log << "simulate: ok outputs=" << res.reports.size() << " t=" << format_double(last.t)
      << " |omega|_inf=" << format_double(last.linf_omega) << "\n";
  return kExitOk;
}

int do_decay(const ExperimentManifest& m, const Header& h, std::ostream& log) {
  int n = 256;
  double box = 200.0;
  if (!m.config.empty()) {
    const auto cfg = solver::load_config(m.config);
    n = cfg.n;
    box = cfg.box_length;
  }
  spectral::Grid2D g(n, box);
  spectral::SpectralField2D shell(g);
  for (int i2 = 0; i2 < n; ++i2)
    for (int i1 = 0; i1 < n; ++i1)
      shell.at(i1, i2) = spectral::lp_bump(norm(g.wavevector(i1, i2))) / shell.continuum_scale();
  const auto fit = propagator::decay_curve(shell, m.decay_times);
  auto comments = h.lines("decay");
  comments.push_back("grid: n=" + std::to_string(n) + " L=" + format_double(box));
  comments.push_back("exponent: " + format_double(fit.exponent));
  comments.push_back("c_emp: " + format_double(fit.c_emp));
  comments.push_back("besov311: " + format_double(fit.besov311));
  std::string body = "t,sup_omega,t_sup_over_besov\n";
  for (std::size_t i = 0; i < fit.times.size(); ++i)
    body += format_double(fit.times[i]) + "," + format_double(fit.sup_norms[i]) + "," +
            format_double(fit.times[i] * fit.sup_norms[i] / fit.besov311) + "\n";
  spectral::write_file_atomic(m.output_dir / "decay.csv", with_comments(comments, body));
  log << "decay: exponent=" << fmt(fit.exponent, 4) << " c_emp=" << fmt(fit.c_emp, 5) << "\n";
  return kExitOk;
}

int do_stphase(const ExperimentManifest& m, const Header& h, std::ostream& log) {
  const auto s = stphase_survey(m.stphase_samples, stream_seed(m.seed, "stphase"));
  const std::string body = "samples,roots,max_roots,max_grad,max_det_rel,max_fd_rel,failures\n" +
                           std::to_string(s.samples) + "," + std::to_string(s.roots) + "," +
                           std::to_string(s.max_roots) + "," + format_double(s.max_grad) + "," +
                           format_double(s.max_det_rel) + "," + format_double(s.max_fd_rel) + "," +
                           std::to_string(s.failures) + "\n";
  spectral::write_file_atomic(m.output_dir / "stphase.csv", with_comments(h.lines("stphase"), body));
  log << "stphase: samples=" << s.samples << " max_roots=" << s.max_roots << " failures=" << s.failures << "\n";
  return s.failures == 0 ? kExitOk : kExitViolation;
}

int do_diagnose(const ExperimentManifest& m, const Header& h, std::ostream& log) {
  auto cfg = require_config(m, "diagnose");
  cfg.k_energy = std::max(cfg.k_energy, m.diagnose_k);
  cfg.light_reports = false;
  if (cfg.dump_dir.empty()) cfg.dump_dir = m.output_dir;
  const auto res = solver::run(cfg);
  const auto cert = diagnostics::energy_certificate(res.reports, m.diagnose_k);
  const auto tr = diagnostics::linfty_transport_check(res.reports);

  auto comments = h.lines("diagnose");
  comments.push_back("k: " + std::to_string(m.diagnose_k));
  comments.push_back("energy c: " + format_double(cert.c) + (cert.valid ? " valid" : " invalid: " + cert.failure));
  comments.push_back("transport violations: " + std::to_string(tr.violations));
  comments.push_back("T_double: " + format_double(diagnostics::doubling_time(res.reports, m.diagnose_k)));
  if (res.aborted) comments.push_back("aborted: " + res.abort_reason);
  std::string body =
      "t,hk,envelope,integral,linf_omega,transport_rhs,slack,weighted2,weighted3,ratio2,ratio3,fhat_sup2,"
      "boundary_warning\n";
  const auto& r0 = res.reports.front();
  for (std::size_t i = 0; i < res.reports.size(); ++i) {
    const auto& r = res.reports[i];
    const double env = i < cert.rhs_envelope.size() ? cert.rhs_envelope[i] : 0.0;
    body += format_double(r.t) + "," + format_double(cert.hk_measured[i]) + "," + format_double(env) + "," +
            format_double(cert.cumulative[i]) + "," + format_double(r.linf_omega) + "," + format_double(tr.rhs[i]) +
            "," + format_double(tr.slack[i]) + "," + format_double(r.weighted2) + "," + format_double(r.weighted3) +
            "," + format_double(r0.weighted2 > 0 ? r.weighted2 / r0.weighted2 : 0.0) + "," +
            format_double(r0.weighted3 > 0 ? r.weighted3 / r0.weighted3 : 0.0) + "," + format_double(r.fhat_sup2) +
            "," + (r.boundary_warning ? "1" : "0") + "\n";
  }
  spectral::write_file_atomic(m.output_dir / "diagnose.csv", with_comments(comments, body));
  if (res.aborted) {
    log << "diagnose: ABORT " << res.abort_reason << "; dump: " << res.dump_path.string() << "\n";
    return kExitAbort;
  }
  const bool ok = cert.valid && tr.ok;
  log << "diagnose: energy c(" << m.diagnose_k << ")=" << fmt(cert.c, 4) << (cert.valid ? " valid" : " INVALID")
      << " transport violations=" << tr.violations << "\n";
  return ok ? kExitOk : kExitViolation;
}

int do_resonance(const ExperimentManifest& m, const Header& h, std::ostream& log) {
  std::vector<resonance::BoundCheckReport> reports;
  long long violations = 0;
  for (char id : m.resonance_ids) {
    reports.push_back(resonance::certify_bound(id, m.resonance_n, stream_seed(m.seed, "resonance")));
    const auto& r = reports.back();
    violations += r.violations;
    log << "resonance " << id << ": samples=" << r.samples << " violations=" << r.violations
        << " worst_margin=" << fmt(r.worst_margin, 4) << " constant=" << fmt(r.empirical_constant, 5) << "\n";
  }
  spectral::write_file_atomic(m.output_dir / "resonance.csv", resonance::reports_to_csv(reports, h.lines("resonance")));
  return violations == 0 ? kExitOk : kExitViolation;
}

int do_bootstrap(const ExperimentManifest& m, const Header& h, std::ostream& log) {
  const auto found = diagnostics::bootstrap_search(m.bootstrap_M);
  std::string body =
      "M,k,eps,log2_eps,mu,inverse_p,A,ck,margin_energy,margin_weighted2,margin_weighted3,margin_dispersive,"
      "feasible\n";
  if (found) {
    const auto& p = found->params;
    body += format_double(p.M) + "," + format_double(p.k) + "," + format_double(p.eps) + "," +
            format_double(std::log2(p.eps)) + "," + format_double(p.mu) + "," + format_double(found->inverse_p) + "," +
            format_double(found->A) + "," + format_double(found->ck);
    for (const auto& c : found->conditions) body += "," + format_double(c.margin);
    body += std::string(",") + (found->feasible ? "1" : "0") + "\n";
    log << "bootstrap: M=" << fmt(p.M) << " feasible at k=" << fmt(p.k) << " eps=2^" << fmt(std::log2(p.eps))
        << " mu=" << fmt(p.mu) << "\n";
  } else {
    log << "bootstrap: M=" << fmt(m.bootstrap_M) << " no feasible triple in the search box\n";
  }
  spectral::write_file_atomic(m.output_dir / "bootstrap.csv", with_comments(h.lines("bootstrap"), body));
  return found ? kExitOk : kExitViolation;
}

}  // namespace

ExperimentManifest parse_manifest(const std::string& text, const fs::path& base_dir) {
  ExperimentManifest m;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  auto resolve = [&](const std::string& v) {
    fs::path p(v);
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::size_t off = 0;
    const std::string line = trim(raw, off);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigParseError("expected key=value", line_no, static_cast<int>(off) + 1);
    std::size_t koff = 0, voff = 0;
    const std::string key = trim(line.substr(0, eq), koff);
    const std::string value = trim(line.substr(eq + 1), voff);
    const int kcol = static_cast<int>(off + koff) + 1;
    const int vcol = static_cast<int>(off + eq + 1 + voff) + 1;
    if (key.empty()) throw ConfigParseError("missing key", line_no, kcol);

    if (key == "targets") {
      m.targets.clear();
      for (const auto& [t, col] : split_list(value, vcol)) {
        if (std::find(kTargets.begin(), kTargets.end(), t) == kTargets.end())
          throw ConfigParseError("unknown target '" + t + "'", line_no, col);
        m.targets.push_back(t);
      }
      continue;
    }
    if (value.empty()) throw ConfigParseError("missing value for '" + key + "'", line_no, vcol);
    if (key == "name") m.name = value;
    else if (key == "config") m.config = resolve(value);
    else if (key == "out") m.output_dir = resolve(value);
    else if (key == "seed") m.seed = parse_number<std::uint64_t>(value, line_no, vcol);
    else if (key == "resonance_ids") {
      m.resonance_ids.clear();
      for (const auto& [id, col] : split_list(value, vcol)) {
        const auto& ids = resonance::inequality_ids();
        if (id.size() != 1 || std::find(ids.begin(), ids.end(), id[0]) == ids.end())
          throw ConfigParseError("unknown inequality id '" + id + "'", line_no, col);
        m.resonance_ids += id;
      }
    } else if (key == "resonance_n") m.resonance_n = parse_number<long long>(value, line_no, vcol);
    else if (key == "diagnose_k") m.diagnose_k = parse_number<int>(value, line_no, vcol);
    else if (key == "bootstrap_M") m.bootstrap_M = parse_number<double>(value, line_no, vcol);
    else if (key == "stphase_samples") m.stphase_samples = parse_number<long long>(value, line_no, vcol);
    else if (key == "decay_times") {
      m.decay_times.clear();
      for (const auto& [t, col] : split_list(value, vcol)) m.decay_times.push_back(parse_number<double>(t, line_no, col));
    } else throw ConfigParseError("unknown key '" + key + "'", line_no, kcol);
  }
  return m;
}

ExperimentManifest load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read manifest " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str(), path.parent_path());
}

int run_experiment(const ExperimentManifest& m, std::ostream& log) {
  std::string why;
  if (!writable(m.output_dir, why)) {
    log << "error: " << why << "\n";
    return kExitConfig;
  }
  const Header h{m};
  int status = kExitOk;
  for (const auto& t : m.targets) {
    int s = kExitOk;
    try {
      if (t == "simulate") s = do_simulate(m, h, log);
      else if (t == "decay") s = do_decay(m, h, log);
      else if (t == "stphase") s = do_stphase(m, h, log);
      else if (t == "diagnose") s = do_diagnose(m, h, log);
      else if (t == "resonance") s = do_resonance(m, h, log);
      else if (t == "bootstrap") s = do_bootstrap(m, h, log);
      else {
        log << "error: unknown target " << t << "\n";
        return kExitConfig;
      }
    } catch (const ConfigError& e) {
      log << "error: " << t << ": " << e.what() << "\n";
      return kExitConfig;
    } catch (const std::exception& e) {
      log << "error: " << t << ": " << e.what() << "\n";
      return kExitViolation;
    }
    if (s == kExitAbort) return s;
    status = std::max(status, s);
  }
  return status;
}

int reproduce_all(std::uint64_t seed, const fs::path& out_dir, const std::vector<std::string>& only, std::ostream& log) {
  for (const auto& o : only) {
    if (std::find(kModules.begin(), kModules.end(), o) == kModules.end()) {
      log << "error: unknown module '" << o << "' (propagator, solver, diagnostics, resonance)\n";
      return kExitConfig;
    }
  }
  std::string why;
  if (!writable(out_dir, why)) {
    log << "error: " << why << "\n";
    return kExitConfig;
  }
  std::vector<CriterionResult> results;
  double budget = 0.0, wall = 0.0;
  for (const auto& info : criterion_table()) {
    if (!only.empty() && std::find(only.begin(), only.end(), info.module) == only.end()) continue;
    auto r = info.module == "resonance" ? run_resonance_criterion(info.id, seed) : run_criterion(info.id, seed);
    budget += info.budget_seconds;
    wall += r.seconds;
    log << verdict_line(r) << " (" << fmt(r.seconds, 3) << " s)\n" << std::flush;
    results.push_back(std::move(r));
  }
  std::string modules;
  for (const auto& o : only) modules += (modules.empty() ? "" : ",") + o;
  const std::vector<std::string> comments = {"seed: " + std::to_string(seed), "version: " + tool_version(),
                                             "modules: " + (modules.empty() ? std::string("all") : modules)};
  spectral::write_file_atomic(out_dir / "acceptance.csv", results_to_csv(results, comments));
  log << "total wall time " << fmt(wall, 4) << " s (budget " << fmt(budget, 4) << " s)\n";
  std::string failed;
  for (const auto& r : results)
    if (!r.pass) failed += (failed.empty() ? "" : ", ") + std::to_string(r.id);
  if (!failed.empty()) {
    log << "failed criteria: " << failed << "\n";
    return kExitViolation;
  }
  log << "all " << results.size() << " criteria passed\n";
  return kExitOk;
}

}  // namespace bplab::harness
