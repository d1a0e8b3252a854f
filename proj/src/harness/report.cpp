#include <cstdio>
#include <stdexcept>

#include "bplab/harness/acceptance.hpp"

namespace bplab::harness {

const std::vector<CriterionInfo>& criterion_table() {
  static const std::vector<CriterionInfo> table = {
      {1, "linear dispersive decay", "propagator", 120},
      {2, "stationary phase", "propagator", 60},
      {3, "conservation", "solver", 300},
      {4, "energy certificate", "diagnostics", 300},
      {5, "small-data longevity trend", "diagnostics", 900},
      {6, "resonance identities", "resonance", 60},
      {7, "region-bound certification", "resonance", 180},
      {8, "null structure", "solver", 60},
      {9, "scaling symmetry", "solver", 300},
      {10, "transport bound", "diagnostics", 300},
      {11, "bootstrap arithmetic", "diagnostics", 10},
  };
  return table;
}

const CriterionInfo& criterion_info(int id) {
  for (const auto& c : criterion_table())
    if (c.id == id) return c;
  throw std::out_of_range("no acceptance criterion " + std::to_string(id));
}

std::string fmt(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string verdict_line(const CriterionResult& r) {
  return std::string(r.pass ? "PASS" : "FAIL") + " " + std::to_string(r.id) + " " + r.name + ": " + r.detail;
}

std::string results_to_csv(const std::vector<CriterionResult>& results, const std::vector<std::string>& comments) {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  out += "criterion,name,module,verdict,detail\n";
  for (const auto& r : results) {
    std::string detail = r.detail;
    for (auto& ch : detail)
      if (ch == '"') ch = '\'';
    out += std::to_string(r.id) + "," + r.name + "," + r.module + "," + (r.pass ? "PASS" : "FAIL") + ",\"" + detail +
           "\"\n";
  }
  return out;
}

}  // namespace bplab::harness
