#pragma once

// Closed-form approximate solutions of u_t = (u u_x)_x and their defects:
//
//   U_n(x)   = n^{-3} + n^{-s} cos(nx)            (time independent)
//   V_n(t,x) = n^{-1} + e^{-nt} n^{-s} cos(nx)
//
// Both approach the degenerate boundary {min u = 0} as n grows while their
// initial H^s distance vanishes.

#include <string>
#include <vector>

#include "pmelab/fourier.hpp"

namespace pmelab {

/// Member of the U/V families: mode number n >= 2 and regularity s > 7/2.
class SequenceParams {
 public:
  SequenceParams(int n, double s);

  int n() const noexcept { return n_; }
  double s() const noexcept { return s_; }
  /// n^{-s}, the cosine amplitude at t = 0.
  double amplitude() const noexcept;

 private:
  int n_;
  double s_;
};

/// One measured-versus-theoretical comparison.
struct BoundReport {
  std::string name;
  double theoretical = 0.0;
  double measured = 0.0;
  bool satisfied = false;
};

/// Throws ResolutionError unless N >= 8n.
void require_resolution(const SequenceParams& p, const Grid& grid);

SpectralField sample_U(const SequenceParams& p, const Grid& grid);
SpectralField sample_V(const SequenceParams& p, double t, const Grid& grid);

/// ∂_t U_n analytically (zero).
SpectralField time_derivative_U(const SequenceParams& p, const Grid& grid);
/// ∂_t V_n = -n e^{-nt} n^{-s} cos(nx).
SpectralField time_derivative_V(const SequenceParams& p, double t, const Grid& grid);

/// E_U = n^{-s-1} cos(nx) + n^{-2s+2} cos(2nx).
SpectralField residual_U_closed(const SequenceParams& p, const Grid& grid);
/// E_V(t) = n^{-2s+2} e^{-2nt} cos(2nx); the mode-n terms cancel.
SpectralField residual_V_closed(const SequenceParams& p, double t, const Grid& grid);

/// ∂_t W - ∂_x(W ∂_x W) with the spatial part evaluated spectrally
/// (product in physical space, then differentiation).
SpectralField numeric_residual(const SpectralField& field, const SpectralField& time_derivative);

/// √(2π)(n^{-1} - n^{-3}) = ‖U_n - V_n(0)‖_{H^s} for every s.
double initial_gap(const SequenceParams& p);
/// √π(1-e^{-nt})((1+n²)/n²)^{s/2} - √(2π)(n^{-1} - n^{-3}).
double gap_lower_bound(const SequenceParams& p, double t);
/// √(2π) n^{-1} + √π(1-e^{-nt})((1+n²)/n²)^{s/2}.
double gap_upper_bound(const SequenceParams& p, double t);

/// Value and derivative bounds for U_n on the grid:
/// n^{-3}/4 <= U_n <= 2n^{-3}, |∂_x U_n| <= n^{-s+1}.
std::vector<BoundReport> check_pointwise_bounds_U(const SequenceParams& p, const Grid& grid);
/// Same for V_n(t): n^{-1}/4 <= V_n <= 2n^{-1}, |∂_x V_n| <= n^{-s+1}.
std::vector<BoundReport> check_pointwise_bounds_V(const SequenceParams& p, double t,
                                                  const Grid& grid);

}  // namespace pmelab
