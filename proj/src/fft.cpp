#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "pmelab/errors.hpp"

namespace pmelab::detail {
namespace {

// FFTW's planner is not reentrant; every planner call goes through this lock.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

const FftPlan& FftPlan::get(int n) {
  // The mutex must outlive the cache: plan destructors lock it at exit.
  std::mutex& mutex = planner_mutex();
  static std::map<int, std::unique_ptr<FftPlan>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, std::unique_ptr<FftPlan>(new FftPlan(n))).first;
  }
  return *it->second;
}

FftPlan::FftPlan(int n) : n_(n) {
  if (n < 2) throw ArgumentError("FFT size must be at least 2");
  double* real = fftw_alloc_real(static_cast<size_t>(n));
  fftw_complex* cplx = fftw_alloc_complex(static_cast<size_t>(n / 2 + 1));
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_dft_r2c_1d(n, real, cplx, flags);
  inverse_plan_ = fftw_plan_dft_c2r_1d(n, cplx, real, flags);
  fftw_free(real);
  fftw_free(cplx);
  if (!forward_plan_ || !inverse_plan_) throw ArgumentError("FFTW planning failed");
}

FftPlan::~FftPlan() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void FftPlan::forward(std::span<const double> values,
                      std::span<std::complex<double>> coeffs) const {
  if (static_cast<int>(values.size()) != n_ || static_cast<int>(coeffs.size()) != n_ / 2 + 1) {
    throw ArgumentError("FFT buffer size mismatch");
  }
  // r2c does not modify its input, but the interface is non-const.
  std::vector<double> in(values.begin(), values.end());
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), in.data(),
                       reinterpret_cast<fftw_complex*>(coeffs.data()));
  const double scale = 1.0 / n_;
  for (auto& c : coeffs) c *= scale;
}

void FftPlan::inverse(std::span<const std::complex<double>> coeffs,
                      std::span<double> values) const {
  if (static_cast<int>(values.size()) != n_ || static_cast<int>(coeffs.size()) != n_ / 2 + 1) {
    throw ArgumentError("FFT buffer size mismatch");
  }
  // c2r destroys its input.
  std::vector<std::complex<double>> in(coeffs.begin(), coeffs.end());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(in.data()), values.data());
}

}  // namespace pmelab::detail
