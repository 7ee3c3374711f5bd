#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pmelab/experiment.hpp"

namespace pmelab {

/// Environment variable that overrides `output_dir` from the config file.
inline constexpr const char* kOutputDirEnv = "PMELAB_OUTPUT_DIR";

/// Parses a YAML experiment config. Missing keys take their defaults; unknown
/// keys are rejected by name. `overrides` are `dotted.key=value` strings
/// applied after the file, e.g. `solver.dt_safety=0.25` or `n_list=[8,16]`.
///
/// Recognised keys:
///   experiment, n_list, s, r_list, T, delta, seed, output_dir, threads,
///   grid.multiplier, grid.max_points,
///   solver.dt_safety, solver.dealias,
///   sampling.time_samples, sampling.early_samples,
///   verdict.gap_fraction, verdict.initial_gap_threshold, verdict.random_pairs
ExperimentConfig parse_config_text(std::string_view yaml,
                                   const std::vector<std::string>& overrides = {});
ExperimentConfig parse_config(const std::filesystem::path& path,
                              const std::vector<std::string>& overrides = {});

}  // namespace pmelab
