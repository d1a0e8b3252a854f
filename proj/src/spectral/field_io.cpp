#include "bplab/spectral/field_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "bplab/errors.hpp"

namespace bplab::spectral {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw InputError("truncated field file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && *first == ' ') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{}) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw InputError("bad number in CSV: '" + s + "'");
  }
  return v;
}

}  // namespace

void write_field(std::ostream& out, const RealField2D& field) {
  out.write(kFieldMagic, 4);
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(field.grid.n()));
  put_le<double>(out, field.grid.box_length());
  for (double v : field.samples) put_le<double>(out, v);
  if (!out) throw InputError("failed to write field");
}

RealField2D read_field(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kFieldMagic, 4) != 0) {
    throw InputError("not a BPF1 field file");
  }
  const auto n = get_le<std::uint64_t>(in);
  const auto box = get_le<double>(in);
  if (n > (1u << 16)) throw InputError("field file grid size too large");
  Grid2D grid(static_cast<int>(n), box);
  RealField2D field(grid);
  for (auto& v : field.samples) v = get_le<double>(in);
  return field;
}

void save_field(const std::filesystem::path& path, const RealField2D& field) {
  std::ostringstream buf(std::ios::binary);
  write_field(buf, field);
  write_file_atomic(path, buf.str());
}

RealField2D load_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open field file " + path.string());
  return read_field(in);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw ConfigError("short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw ConfigError("cannot rename onto " + path.string());
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string norm_reports_to_csv(const std::vector<NormReport>& reports,
                                const std::vector<std::string>& comments) {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  out += kNormReportHeader;
  out += '\n';
  for (const auto& r : reports) {
    const double row[] = {r.t,      r.l2,        r.hk_top(),  r.linf_omega, r.linf_u,
                          r.linf_du, r.besov311, r.weighted2, r.weighted3,  r.fhat_sup2};
    for (std::size_t i = 0; i < std::size(row); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<NormReport> norm_reports_from_csv(std::istream& in) {
  std::vector<NormReport> out;
  std::string line;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kNormReportHeader) throw InputError("unexpected CSV header at line " + std::to_string(line_no));
      header_seen = true;
      continue;
    }
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(parse_double(cell));
    if (v.size() != 10) throw InputError("expected 10 columns at line " + std::to_string(line_no));
    NormReport r;
    r.t = v[0];
    r.l2 = v[1];
    r.hk = {v[2]};
    r.linf_omega = v[3];
    r.linf_u = v[4];
    r.linf_du = v[5];
    r.besov311 = v[6];
    r.weighted2 = v[7];
    r.weighted3 = v[8];
    r.fhat_sup2 = v[9];
    out.push_back(r);
  }
  return out;
}

}  // namespace bplab::spectral
