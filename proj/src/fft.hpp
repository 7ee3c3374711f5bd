#pragma once

#include <complex>
#include <span>

namespace pmelab::detail {

/// Real-to-half-complex transform pair of length N backed by FFTW.
///
/// Plans are created once per size and shared; execution uses the new-array
/// interface, which FFTW guarantees to be thread-safe.
class FftPlan {
 public:
  /// Cached plan for size `n`. Thread-safe.
  static const FftPlan& get(int n);

  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  int size() const noexcept { return n_; }

  /// coeffs[k] = (1/N) Σ_j values[j] e^{-2πijk/N}, k = 0..N/2.
  void forward(std::span<const double> values, std::span<std::complex<double>> coeffs) const;
  /// values[j] = Σ_{k=-N/2+1}^{N/2} c_k e^{2πijk/N} using c_{-k} = conj(c_k).
  void inverse(std::span<const std::complex<double>> coeffs, std::span<double> values) const;

 private:
  explicit FftPlan(int n);

  int n_;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

}  // namespace pmelab::detail
