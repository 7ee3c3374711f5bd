#pragma once

// Spectral representation of real 2π-periodic functions and the Sobolev
// calculus built on it.
//
// Fourier coefficients are normalised as c_k = (1/2π) ∫ u e^{-ikx} dx, so the
// H^r norm is ‖u‖_r² = 2π Σ_k (1+k²)^r |c_k|². With this convention
// ‖cos(nx)‖_r = √π (1+n²)^{r/2} and ‖1‖_r = √(2π) hold exactly.

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "pmelab/errors.hpp"

namespace pmelab {

using Complex = std::complex<double>;

/// Uniform grid x_j = 2πj/N on [0, 2π). N is even and at least 8.
class Grid {
 public:
  explicit Grid(int num_points);

  int size() const noexcept { return num_points_; }
  /// Nyquist index N/2. Modes |k| < N/2 are representable.
  int nyquist() const noexcept { return num_points_ / 2; }
  double node(int j) const noexcept;
  std::vector<double> nodes() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int num_points_;
};

/// Sobolev exponent r, restricted to [-2, 16].
class SobolevIndex {
 public:
  static constexpr double kMin = -2.0;
  static constexpr double kMax = 16.0;

  explicit SobolevIndex(double r);
  double value() const noexcept { return r_; }

 private:
  double r_;
};

/// A real periodic function held as grid samples and half-spectrum
/// coefficients c_0..c_{N/2} in tandem (c_{-k} = conj(c_k)).
///
/// Both representations are kept consistent: every factory either transforms
/// or synthesises the missing half. The Nyquist coefficient is always zero and
/// c_0 is real. Instances are immutable.
class SpectralField {
 public:
  static SpectralField from_samples(const Grid& grid, std::span<const double> values);
  /// `coeffs` holds c_0..c_{N/2}; imaginary part of c_0 and the Nyquist entry are dropped.
  static SpectralField from_half_spectrum(const Grid& grid, std::vector<Complex> coeffs);
  static SpectralField from_function(const Grid& grid, const std::function<double(double)>& f);
  static SpectralField constant(const Grid& grid, double value);
  static SpectralField zero(const Grid& grid) { return constant(grid, 0.0); }

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const Complex> half_spectrum() const noexcept { return coeffs_; }
  /// Coefficient for any k in (-N/2, N/2]; zero outside the stored band.
  Complex coeff(int k) const;

  SpectralField operator-() const;
  friend SpectralField operator+(const SpectralField& a, const SpectralField& b);
  friend SpectralField operator-(const SpectralField& a, const SpectralField& b);
  friend SpectralField operator*(double scale, const SpectralField& a);
  friend SpectralField operator*(const SpectralField& a, double scale) { return scale * a; }

 private:
  SpectralField(Grid grid, std::vector<double> values, std::vector<Complex> coeffs)
      : grid_(grid), values_(std::move(values)), coeffs_(std::move(coeffs)) {}

  Grid grid_;
  std::vector<double> values_;
  std::vector<Complex> coeffs_;
};

/// How a quadratic product is evaluated on the physical grid.
enum class ProductRule {
  kAliased,       ///< pointwise product on the native grid
  kThreeHalves,   ///< zero-padded to 3N/2 points, then truncated
  kDouble,        ///< zero-padded to 2N points, then truncated
};

SpectralField make_field_from_samples(const Grid& grid, std::span<const double> values);

/// Fourier multiplier (1+k²)^{r/2}.
SpectralField apply_lambda(const SpectralField& field, SobolevIndex r);
double sobolev_norm(const SpectralField& field, SobolevIndex r);

double sup_norm(const SpectralField& field);
double min_value(const SpectralField& field);
double max_value(const SpectralField& field);
double mean(const SpectralField& field);
SpectralField derivative(const SpectralField& field);
SpectralField second_derivative(const SpectralField& field);

/// Largest |Im c_k|, i.e. the size of the odd (sine) part.
double max_sine_coefficient(const SpectralField& field);

SpectralField product(const SpectralField& a, const SpectralField& b,
                      ProductRule rule = ProductRule::kThreeHalves);

/// Spectral interpolation onto another grid. Modes the target cannot hold are dropped.
SpectralField resample(const SpectralField& field, const Grid& target);

/// Grid values of the field evaluated on `target` (zero-padded synthesis).
std::vector<double> synthesize_on(const SpectralField& field, const Grid& target);

}  // namespace pmelab
