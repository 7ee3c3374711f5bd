#include "pmelab/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"

namespace pmelab {
namespace {

int padded_size(int n, ProductRule rule) {
  switch (rule) {
    case ProductRule::kAliased:
      return n;
    case ProductRule::kThreeHalves: {
      const int m = (3 * n + 1) / 2;
      return m + (m % 2);
    }
    case ProductRule::kDouble:
      return 2 * n;
  }
  return n;
}

// Multiplier (1+k²)^{r/2} for mode k.
double bessel_weight(int k, double r) {
  return std::pow(1.0 + static_cast<double>(k) * k, 0.5 * r);
}

}  // namespace

Grid::Grid(int num_points) : num_points_(num_points) {
  if (num_points < 8 || num_points % 2 != 0) {
    throw ArgumentError("grid size must be an even integer >= 8, got " +
                        std::to_string(num_points));
  }
}

double Grid::node(int j) const noexcept {
  return 2.0 * std::numbers::pi * j / num_points_;
}

std::vector<double> Grid::nodes() const {
  std::vector<double> x(static_cast<size_t>(num_points_));
  for (int j = 0; j < num_points_; ++j) x[static_cast<size_t>(j)] = node(j);
  return x;
}

SobolevIndex::SobolevIndex(double r) : r_(r) {
  if (!std::isfinite(r) || r < kMin || r > kMax) {
    throw ArgumentError("Sobolev index must lie in [-2, 16], got " + std::to_string(r));
  }
}

SpectralField SpectralField::from_samples(const Grid& grid, std::span<const double> values) {
  if (static_cast<int>(values.size()) != grid.size()) {
    throw ArgumentError("sample count " + std::to_string(values.size()) +
                        " does not match grid size " + std::to_string(grid.size()));
  }
  std::vector<Complex> coeffs(static_cast<size_t>(grid.nyquist() + 1));
  detail::FftPlan::get(grid.size()).forward(values, coeffs);
  return from_half_spectrum(grid, std::move(coeffs));
}

SpectralField SpectralField::from_half_spectrum(const Grid& grid, std::vector<Complex> coeffs) {
  if (static_cast<int>(coeffs.size()) != grid.nyquist() + 1) {
    throw ArgumentError("half spectrum must hold N/2+1 coefficients");
  }
  coeffs.front().imag(0.0);
  coeffs.back() = 0.0;
  std::vector<double> values(static_cast<size_t>(grid.size()));
  detail::FftPlan::get(grid.size()).inverse(coeffs, values);
  return SpectralField(grid, std::move(values), std::move(coeffs));
}

SpectralField SpectralField::from_function(const Grid& grid,
                                           const std::function<double(double)>& f) {
  std::vector<double> values(static_cast<size_t>(grid.size()));
  for (int j = 0; j < grid.size(); ++j) values[static_cast<size_t>(j)] = f(grid.node(j));
  return from_samples(grid, values);
}

SpectralField SpectralField::constant(const Grid& grid, double value) {
  std::vector<Complex> coeffs(static_cast<size_t>(grid.nyquist() + 1));
  coeffs[0] = value;
  return SpectralField(grid, std::vector<double>(static_cast<size_t>(grid.size()), value),
                       std::move(coeffs));
}

Complex SpectralField::coeff(int k) const {
  const int nyq = grid_.nyquist();
  if (k <= -nyq || k > nyq) return 0.0;
  if (k >= 0) return coeffs_[static_cast<size_t>(k)];
  return std::conj(coeffs_[static_cast<size_t>(-k)]);
}

SpectralField SpectralField::operator-() const { return -1.0 * *this; }

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid_ == b.grid_)) throw ArgumentError("fields live on different grids");
  auto values = a.values_;
  auto coeffs = a.coeffs_;
  for (size_t j = 0; j < values.size(); ++j) values[j] += b.values_[j];
  for (size_t k = 0; k < coeffs.size(); ++k) coeffs[k] += b.coeffs_[k];
  return SpectralField(a.grid_, std::move(values), std::move(coeffs));
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid_ == b.grid_)) throw ArgumentError("fields live on different grids");
  auto values = a.values_;
  auto coeffs = a.coeffs_;
  for (size_t j = 0; j < values.size(); ++j) values[j] -= b.values_[j];
  for (size_t k = 0; k < coeffs.size(); ++k) coeffs[k] -= b.coeffs_[k];
  return SpectralField(a.grid_, std::move(values), std::move(coeffs));
}

SpectralField operator*(double scale, const SpectralField& a) {
  auto values = a.values_;
  auto coeffs = a.coeffs_;
  for (auto& v : values) v *= scale;
  for (auto& c : coeffs) c *= scale;
  return SpectralField(a.grid_, std::move(values), std::move(coeffs));
}

SpectralField make_field_from_samples(const Grid& grid, std::span<const double> values) {
  return SpectralField::from_samples(grid, values);
}

SpectralField apply_lambda(const SpectralField& field, SobolevIndex r) {
  std::vector<Complex> coeffs(field.half_spectrum().begin(), field.half_spectrum().end());
  for (size_t k = 0; k < coeffs.size(); ++k) {
    coeffs[k] *= bessel_weight(static_cast<int>(k), r.value());
  }
  return SpectralField::from_half_spectrum(field.grid(), std::move(coeffs));
}

double sobolev_norm(const SpectralField& field, SobolevIndex r) {
  const auto coeffs = field.half_spectrum();
  double sum = std::norm(coeffs[0]);
  // Modes 1..N/2-1 stand for ±k; the Nyquist entry is zero.
  for (size_t k = 1; k < coeffs.size(); ++k) {
    sum += 2.0 * std::norm(bessel_weight(static_cast<int>(k), r.value()) * coeffs[k]);
  }
  return std::sqrt(2.0 * std::numbers::pi * sum);
}

double sup_norm(const SpectralField& field) {
  double m = 0.0;
  for (double v : field.values()) m = std::max(m, std::abs(v));
  return m;
}

double min_value(const SpectralField& field) {
  return *std::min_element(field.values().begin(), field.values().end());
}

double max_value(const SpectralField& field) {
  return *std::max_element(field.values().begin(), field.values().end());
}

double mean(const SpectralField& field) { return field.half_spectrum()[0].real(); }

SpectralField derivative(const SpectralField& field) {
  std::vector<Complex> coeffs(field.half_spectrum().begin(), field.half_spectrum().end());
  for (size_t k = 0; k < coeffs.size(); ++k) {
    coeffs[k] *= Complex(0.0, static_cast<double>(k));
  }
  return SpectralField::from_half_spectrum(field.grid(), std::move(coeffs));
}

SpectralField second_derivative(const SpectralField& field) {
  std::vector<Complex> coeffs(field.half_spectrum().begin(), field.half_spectrum().end());
  for (size_t k = 0; k < coeffs.size(); ++k) {
    coeffs[k] *= -static_cast<double>(k) * static_cast<double>(k);
  }
  return SpectralField::from_half_spectrum(field.grid(), std::move(coeffs));
}

double max_sine_coefficient(const SpectralField& field) {
  double m = 0.0;
  for (const auto& c : field.half_spectrum()) m = std::max(m, std::abs(c.imag()));
  return m;
}

SpectralField resample(const SpectralField& field, const Grid& target) {
  std::vector<Complex> coeffs(static_cast<size_t>(target.nyquist() + 1));
  const int keep = std::min(field.grid().nyquist(), target.nyquist());
  const auto src = field.half_spectrum();
  std::copy(src.begin(), src.begin() + keep, coeffs.begin());
  return SpectralField::from_half_spectrum(target, std::move(coeffs));
}

std::vector<double> synthesize_on(const SpectralField& field, const Grid& target) {
  const auto fine = resample(field, target);
  return {fine.values().begin(), fine.values().end()};
}

SpectralField product(const SpectralField& a, const SpectralField& b, ProductRule rule) {
  if (!(a.grid() == b.grid())) throw ArgumentError("fields live on different grids");
  const Grid fine(padded_size(a.grid().size(), rule));
  const auto av = synthesize_on(a, fine);
  const auto bv = synthesize_on(b, fine);
  std::vector<double> prod(av.size());
  for (size_t j = 0; j < prod.size(); ++j) prod[j] = av[j] * bv[j];
  const auto on_fine = SpectralField::from_samples(fine, prod);
  if (fine == a.grid()) return on_fine;
  return resample(on_fine, a.grid());
}

}  // namespace pmelab
