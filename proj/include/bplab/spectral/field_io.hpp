#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "bplab/spectral/field.hpp"
#include "bplab/spectral/norms.hpp"

namespace bplab::spectral {

/// Field file layout: "BPF1", n (uint64 LE), L (float64 LE), then n^2 float64 LE samples in the
/// RealField2D storage order (x1 fastest).
inline constexpr char kFieldMagic[4] = {'B', 'P', 'F', '1'};

void write_field(std::ostream& out, const RealField2D& field);
RealField2D read_field(std::istream& in);

void save_field(const std::filesystem::path& path, const RealField2D& field);
RealField2D load_field(const std::filesystem::path& path);

/// Writes content to a sibling temporary and renames it over path.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

inline constexpr const char* kNormReportHeader =
    "t,l2,hk,linf_omega,linf_u,linf_du,besov311,weighted2,weighted3,fhat_sup2";

/// CSV with the fixed column order above; comment lines start with '#'.
std::string norm_reports_to_csv(const std::vector<NormReport>& reports,
                                const std::vector<std::string>& comments = {});

/// Parses the CSV produced by norm_reports_to_csv. The hk column becomes a one-element hk vector.
std::vector<NormReport> norm_reports_from_csv(std::istream& in);

/// Round-trip formatting of a double.
std::string format_double(double v);

}  // namespace bplab::spectral
