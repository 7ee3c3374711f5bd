#pragma once

// Persistence for experiment reports.
//
//   report.json         full report, sorted keys, shortest round-trip doubles
//   norms_n<n>.csv      t,hs_gap,h1_err_u,h1_err_v,hr_err_u,min_u,max_u,sup_ux
//   summary.csv         n,initial_gap,inf_gap,slope_h1_u,slope_h1_v,verdict
//
// CSV floats use 17 significant digits, '.' as decimal separator and '\n'
// line endings. Missing values are empty fields.

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pmelab/experiment.hpp"

namespace pmelab {

inline constexpr const char* kReportFile = "report.json";
inline constexpr const char* kSummaryFile = "summary.csv";
inline constexpr const char* kNormsHeader = "t,hs_gap,h1_err_u,h1_err_v,hr_err_u,min_u,max_u,sup_ux";
inline constexpr const char* kSummaryHeader = "n,initial_gap,inf_gap,slope_h1_u,slope_h1_v,verdict";

/// `%.17g`-style rendering, independent of the global locale.
std::string format_double(double x);

std::string norms_file_name(int n);
std::string render_norms_csv(const NRecord& record, const ExperimentConfig& config);
std::string render_summary_csv(const ExperimentReport& report);

/// Writes one norms file per n plus the summary. Returns the paths written.
std::vector<std::filesystem::path> emit_csv(const ExperimentReport& report,
                                            const std::filesystem::path& dir);

using CsvCell = std::variant<std::monostate, double, std::string>;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<CsvCell>> rows;
};

/// Numeric fields become doubles, empty fields monostate, anything else text.
CsvTable parse_csv(std::string_view text);
std::string render_csv(const CsvTable& table);

std::string serialize_report(const ExperimentReport& report);
ExperimentReport deserialize_report(std::string_view text);

std::filesystem::path write_report(const ExperimentReport& report, const std::filesystem::path& dir);
ExperimentReport read_report(const std::filesystem::path& file);

/// Writes `contents` to `dir / name`; `name` must be a plain file name.
std::filesystem::path write_text_file(const std::filesystem::path& dir, const std::string& name,
                                      std::string_view contents);

}  // namespace pmelab
