#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pmelab/fourier.hpp"

namespace pmelab {

/// lhs / rhs of one inequality instance (0/0 is reported as 0).
struct RatioSample {
  std::string inputs;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// Least-squares line through (log n, log y).
struct PowerLawFit {
  std::vector<std::pair<double, double>> points;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< max |log y - (slope log n + intercept)|
};

/// ‖[Λ^r, f] g‖_{L2} against ‖f_x‖_∞ ‖Λ^{r-1} g‖_{L2} + ‖Λ^r f‖_{L2} ‖g‖_∞.
/// The commutator is formed on a grid of 2N points so that the products are
/// alias-free whenever f and g are band-limited to |k| < N/2. Requires r > 3/2.
RatioSample commutator_ratio(const SpectralField& f, const SpectralField& g, SobolevIndex r);

/// ‖u‖_{H^s} against ‖u‖_{H^1}^{(r-s)/(r-1)} ‖u‖_{H^r}^{(s-1)/(r-1)}. Requires 1 < s < r.
RatioSample interpolation_ratio(const SpectralField& u, SobolevIndex s, SobolevIndex r);

/// Requires at least three points, y > 0 and strictly increasing n.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points);

/// Real trigonometric polynomial with modes 0..max_mode, cosine and sine
/// coefficients uniform in [-1, 1]. The generator is seeded from (seed, index)
/// so sample i is the same regardless of evaluation order.
SpectralField random_trig_polynomial(const Grid& grid, int max_mode, std::uint64_t seed,
                                     std::uint64_t index);

struct SweepSummary {
  std::uint64_t seed = 0;
  int count = 0;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  std::vector<RatioSample> samples;
};

/// Commutator ratios over `count` random pairs (f from index 2i, g from 2i+1).
SweepSummary commutator_sweep(const Grid& grid, SobolevIndex r, int count, std::uint64_t seed,
                              int max_mode = 16, int threads = 1);

/// Interpolation ratios over `count` random fields.
SweepSummary interpolation_sweep(const Grid& grid, SobolevIndex s, SobolevIndex r, int count,
                                 std::uint64_t seed, int max_mode = 16, int threads = 1);

}  // namespace pmelab
