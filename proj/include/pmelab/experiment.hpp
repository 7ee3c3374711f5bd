#pragma once

// End-to-end experiments on the U/V families:
//
//   residuals      closed-form defects against spectrally computed ones
//   error-scaling  ‖U_n - u_n(t)‖ and ‖V_n(t) - v_n(t)‖ versus n
//   nonuniform     vanishing initial H^s gap, persistent later gap
//   heat-baseline  the same initial pairs under the heat flow

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmelab/construction.hpp"

namespace pmelab {

enum class ExperimentKind { kResiduals, kErrorScaling, kNonuniform, kHeatBaseline };

std::string to_string(ExperimentKind kind);
/// Accepts "residuals", "error-scaling", "nonuniform", "heat-baseline".
ExperimentKind parse_experiment_kind(std::string_view name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kNonuniform;
  std::vector<int> n_list{8, 16, 32, 64};
  double s = 4.0;
  /// Empty means {s+1, s+2}.
  std::vector<double> r_list;
  double T = 1.0;
  double delta = 0.25;
  int grid_multiplier = 8;
  int max_grid_points = 8192;
  double dt_safety = 0.5;
  bool dealias = true;
  /// Uniform samples in [0, T] and again in [delta, T].
  int time_samples = 64;
  /// Extra samples at T·2^{-j}, j = 1..early_samples, to resolve O(1/n) transients.
  int early_samples = 12;
  double gap_fraction = 0.85;
  double initial_gap_threshold = 0.05;
  int random_pairs = 100;
  std::string output_dir = "pmelab-out";
  std::uint64_t seed = 20240901;
  int threads = 1;

  /// Throws ConfigError naming the violated constraint.
  void validate() const;
  std::vector<double> effective_r_list() const;
  int grid_points(int n) const { return grid_multiplier * n; }
  std::vector<double> sample_times() const;
};

/// Per-sample-time diagnostics of one pair run. Column vectors align with `t`.
struct NormSeries {
  std::vector<double> t;
  std::map<std::string, std::vector<double>> columns;

  void append(double time, const std::map<std::string, double>& row);
  const std::vector<double>& column(const std::string& name) const;
  bool has(const std::string& name) const { return columns.count(name) != 0; }
  double max_of(const std::string& name) const;
};

/// Name of the per-r column, e.g. "hr_err_u[r=5]".
std::string hr_column(std::string_view family, double r);

struct NRecord {
  int n = 0;
  int grid_points = 0;
  std::map<std::string, double> values;
  std::vector<BoundReport> checks;
  NormSeries series;
  /// Set when a solver or resolution error stopped this n.
  std::optional<std::string> abort;

  bool passed() const;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<NRecord> records;          ///< ordered by n
  std::map<std::string, double> fits;    ///< fitted slopes and cross-n statistics
  std::vector<BoundReport> checks;       ///< cross-n verdicts
  std::vector<std::string> notes;        ///< observations without a verdict
  /// Not serialised: the persisted report must be reproducible byte for byte.
  double wall_seconds = 0.0;

  bool passed() const;
  bool aborted() const;
};

ExperimentReport run_residual_validation(const ExperimentConfig& cfg);
ExperimentReport run_error_scaling(const ExperimentConfig& cfg);
ExperimentReport run_nonuniform_experiment(const ExperimentConfig& cfg);
ExperimentReport run_heat_baseline(const ExperimentConfig& cfg);
/// Dispatch on cfg.kind.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace pmelab
