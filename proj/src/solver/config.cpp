#include "bplab/solver/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "bplab/spectral/field.hpp"
#include "bplab/spectral/field_io.hpp"

namespace bplab::solver {

ConfigParseError::ConfigParseError(const std::string& msg, int l, int c)
    : ConfigError("config line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg),
      line(l),
      column(c) {}

namespace {

std::string trim(const std::string& s, std::size_t& offset) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  offset = a;
  return s.substr(a, b - a);
}

struct Field {
  std::string value;
  int line;
  int column;
};

double as_double(const Field& f) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(f.value.data(), f.value.data() + f.value.size(), v);
  if (ec != std::errc{} || ptr != f.value.data() + f.value.size()) {
    throw ConfigParseError("expected a number, got '" + f.value + "'", f.line, f.column);
  }
  return v;
}

int as_int(const Field& f) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(f.value.data(), f.value.data() + f.value.size(), v);
  if (ec != std::errc{} || ptr != f.value.data() + f.value.size()) {
    throw ConfigParseError("expected an integer, got '" + f.value + "'", f.line, f.column);
  }
  return v;
}

bool as_bool(const Field& f) {
  if (f.value == "true" || f.value == "1" || f.value == "on") return true;
  if (f.value == "false" || f.value == "0" || f.value == "off") return false;
  throw ConfigParseError("expected true or false, got '" + f.value + "'", f.line, f.column);
}

InitKind as_init(const Field& f) {
  if (f.value == "gaussian" || f.value == "gaussian-vortex") return InitKind::GaussianVortex;
  if (f.value == "shell" || f.value == "shell-bump") return InitKind::ShellBump;
  if (f.value == "pair" || f.value == "vortex-pair") return InitKind::VortexPair;
  if (f.value == "file") return InitKind::File;
  throw ConfigParseError("unknown init '" + f.value + "'", f.line, f.column);
}

}  // namespace

SimConfig parse_config(const std::string& text) {
  SimConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
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
    const int key_col = static_cast<int>(off + koff) + 1;
    const Field f{value, line_no, static_cast<int>(off + eq + 1 + voff) + 1};
    if (key.empty()) throw ConfigParseError("missing key", line_no, key_col);
    if (value.empty()) throw ConfigParseError("missing value for '" + key + "'", line_no, f.column);

    if (key == "n") cfg.n = as_int(f);
    else if (key == "L" || key == "box_length") cfg.box_length = as_double(f);
    else if (key == "beta") cfg.beta = as_double(f);
    else if (key == "dt") cfg.dt = as_double(f);
    else if (key == "t_end") cfg.t_end = as_double(f);
    else if (key == "k_energy") cfg.k_energy = as_int(f);
    else if (key == "output_stride") cfg.output_stride = as_int(f);
    else if (key == "init") cfg.init.kind = as_init(f);
    else if (key == "eps") cfg.init.eps = as_double(f);
    else if (key == "width" || key == "sigma") cfg.init.width = as_double(f);
    else if (key == "separation") cfg.init.separation = as_double(f);
    else if (key == "init_file") cfg.init.file = value;
    else if (key == "nonlinear") cfg.nonlinear = as_bool(f);
    else if (key == "light_reports") cfg.light_reports = as_bool(f);
    else if (key == "blowup_factor") cfg.blowup_factor = as_double(f);
    else if (key == "enforce_stability") cfg.enforce_stability = as_bool(f);
    else if (key == "dump_dir") cfg.dump_dir = value;
    else if (key == "checkpoint_dir") cfg.checkpoint_dir = value;
    else throw ConfigParseError("unknown key '" + key + "'", line_no, key_col);
  }
  validate(cfg);
  return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const SimConfig& cfg) {
  spectral::Grid2D check(cfg.n, cfg.box_length);
  (void)check;
  if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(cfg.t_end >= 0.0)) throw ConfigError("t_end must be nonnegative");
  if (cfg.k_energy < 0) throw ConfigError("k_energy must be nonnegative");
  if (cfg.output_stride < 1) throw ConfigError("output_stride must be >= 1");
  if (!(cfg.init.width > 0.0)) throw ConfigError("init width must be positive");
  if (!(cfg.blowup_factor > 0.0)) throw ConfigError("blowup_factor must be positive");
  if (cfg.init.kind == InitKind::File && cfg.init.file.empty()) throw ConfigError("init=file needs init_file");
}

std::string to_string(InitKind kind) {
  switch (kind) {
    case InitKind::GaussianVortex: return "gaussian";
    case InitKind::ShellBump: return "shell";
    case InitKind::VortexPair: return "pair";
    case InitKind::File: return "file";
  }
  return "gaussian";
}

std::string to_config_text(const SimConfig& cfg) {
  using spectral::format_double;
  std::ostringstream o;
  o << "n=" << cfg.n << "\nL=" << format_double(cfg.box_length) << "\nbeta=" << format_double(cfg.beta)
    << "\ndt=" << format_double(cfg.dt) << "\nt_end=" << format_double(cfg.t_end) << "\nk_energy=" << cfg.k_energy
    << "\noutput_stride=" << cfg.output_stride << "\ninit=" << to_string(cfg.init.kind)
    << "\neps=" << format_double(cfg.init.eps) << "\nwidth=" << format_double(cfg.init.width)
    << "\nseparation=" << format_double(cfg.init.separation) << "\nnonlinear=" << (cfg.nonlinear ? "true" : "false")
    << "\n";
  if (!cfg.init.file.empty()) o << "init_file=" << cfg.init.file.string() << "\n";
  return o.str();
}

}  // namespace bplab::solver
