#include "pmelab/construction.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pmelab {
namespace {

// Pointwise bounds are exact inequalities; allow only round-off.
constexpr double kPointwiseRelTol = 1e-12;

SpectralField cosine_mode(const Grid& grid, double amplitude, int mode, double offset = 0.0) {
  std::vector<Complex> coeffs(static_cast<size_t>(grid.nyquist() + 1));
  coeffs[0] = offset;
  if (mode > 0) coeffs[static_cast<size_t>(mode)] += 0.5 * amplitude;
  return SpectralField::from_half_spectrum(grid, std::move(coeffs));
}

BoundReport at_most(std::string name, double bound, double measured) {
  return {std::move(name), bound, measured, measured <= bound * (1.0 + kPointwiseRelTol)};
}

BoundReport at_least(std::string name, double bound, double measured) {
  return {std::move(name), bound, measured, measured >= bound * (1.0 - kPointwiseRelTol)};
}

}  // namespace

SequenceParams::SequenceParams(int n, double s) : n_(n), s_(s) {
  if (n < 2) throw ArgumentError("mode number n must be >= 2, got " + std::to_string(n));
  if (!(s > 3.5) || !std::isfinite(s)) throw ArgumentError("s must exceed 7/2");
}

double SequenceParams::amplitude() const noexcept { return std::pow(n_, -s_); }

void require_resolution(const SequenceParams& p, const Grid& grid) {
  if (grid.size() < 8 * p.n()) {
    throw ResolutionError("grid of " + std::to_string(grid.size()) +
                          " points does not resolve mode " + std::to_string(p.n()) +
                          " (need N >= 8n)");
  }
}

SpectralField sample_U(const SequenceParams& p, const Grid& grid) {
  require_resolution(p, grid);
  return cosine_mode(grid, p.amplitude(), p.n(), std::pow(p.n(), -3.0));
}

SpectralField sample_V(const SequenceParams& p, double t, const Grid& grid) {
  require_resolution(p, grid);
  return cosine_mode(grid, std::exp(-p.n() * t) * p.amplitude(), p.n(), 1.0 / p.n());
}

SpectralField time_derivative_U(const SequenceParams& p, const Grid& grid) {
  require_resolution(p, grid);
  return SpectralField::zero(grid);
}

SpectralField time_derivative_V(const SequenceParams& p, double t, const Grid& grid) {
  require_resolution(p, grid);
  return cosine_mode(grid, -p.n() * std::exp(-p.n() * t) * p.amplitude(), p.n());
}

SpectralField residual_U_closed(const SequenceParams& p, const Grid& grid) {
  require_resolution(p, grid);
  const double n = p.n();
  return cosine_mode(grid, std::pow(n, -p.s() - 1.0), p.n()) +
         cosine_mode(grid, std::pow(n, -2.0 * p.s() + 2.0), 2 * p.n());
}

SpectralField residual_V_closed(const SequenceParams& p, double t, const Grid& grid) {
  require_resolution(p, grid);
  const double n = p.n();
  return cosine_mode(grid, std::pow(n, -2.0 * p.s() + 2.0) * std::exp(-2.0 * n * t), 2 * p.n());
}

SpectralField numeric_residual(const SpectralField& field, const SpectralField& time_derivative) {
  const auto flux = product(field, derivative(field), ProductRule::kThreeHalves);
  return time_derivative - derivative(flux);
}

double initial_gap(const SequenceParams& p) {
  const double n = p.n();
  return std::sqrt(2.0 * std::numbers::pi) * (1.0 / n - std::pow(n, -3.0));
}

namespace {
double oscillation_part(const SequenceParams& p, double t) {
  const double n = p.n();
  return std::sqrt(std::numbers::pi) * (1.0 - std::exp(-n * t)) *
         std::pow((1.0 + n * n) / (n * n), 0.5 * p.s());
}
}  // namespace

double gap_lower_bound(const SequenceParams& p, double t) {
  if (t < 0.0) throw ArgumentError("time must be nonnegative");
  return oscillation_part(p, t) - initial_gap(p);
}

double gap_upper_bound(const SequenceParams& p, double t) {
  if (t < 0.0) throw ArgumentError("time must be nonnegative");
  return std::sqrt(2.0 * std::numbers::pi) / p.n() + oscillation_part(p, t);
}

std::vector<BoundReport> check_pointwise_bounds_U(const SequenceParams& p, const Grid& grid) {
  const auto u = sample_U(p, grid);
  const double base = std::pow(p.n(), -3.0);
  const double slope = std::pow(p.n(), -p.s() + 1.0);
  return {at_least("U_n >= n^-3/4", base / 4.0, min_value(u)),
          at_most("U_n <= 2n^-3", 2.0 * base, max_value(u)),
          at_most("|dU_n/dx| <= n^(1-s)", slope, sup_norm(derivative(u)))};
}

std::vector<BoundReport> check_pointwise_bounds_V(const SequenceParams& p, double t,
                                                  const Grid& grid) {
  const auto v = sample_V(p, t, grid);
  const double base = 1.0 / p.n();
  const double slope = std::pow(p.n(), -p.s() + 1.0);
  return {at_least("V_n >= n^-1/4", base / 4.0, min_value(v)),
          at_most("V_n <= 2n^-1", 2.0 * base, max_value(v)),
          at_most("|dV_n/dx| <= n^(1-s)", slope, sup_norm(derivative(v)))};
}

}  // namespace pmelab
