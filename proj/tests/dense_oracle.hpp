#pragma once
#include <cmath>
#include <numbers>
#include <vector>

#include "pmelab/fourier.hpp"

namespace pmelab::testing {

// Dense oracle on the full coefficient vector c_{-M..M}: multiplication by f is
// the Toeplitz matrix (f_{k-j}) and Λ^r the diagonal (1+k²)^{r/2}. The product
// space is taken wide enough that nothing is truncated.
inline double dense_commutator_norm(const SpectralField& f, const SpectralField& g, double r) {
  const int band = f.grid().nyquist() - 1;
  const int m = 2 * band;
  const int dim = 2 * m + 1;
  auto idx = [m](int k) { return static_cast<size_t>(k + m); };
  std::vector<Complex> fc(static_cast<size_t>(dim)), gc(static_cast<size_t>(dim));
  for (int k = -band; k <= band; ++k) {
    fc[idx(k)] = f.coeff(k);
    gc[idx(k)] = g.coeff(k);
  }
  std::vector<std::vector<Complex>> mult(static_cast<size_t>(dim), std::vector<Complex>(static_cast<size_t>(dim)));
  for (int k = -m; k <= m; ++k) {
    for (int j = -m; j <= m; ++j) {
      const int d = k - j;
      if (d >= -band && d <= band) mult[idx(k)][idx(j)] = fc[idx(d)];
    }
  }
  std::vector<double> lambda(static_cast<size_t>(dim));
  for (int k = -m; k <= m; ++k) lambda[idx(k)] = std::pow(1.0 + double(k) * k, r / 2.0);

  double sum = 0.0;
  for (int k = -m; k <= m; ++k) {
    Complex acc{};
    for (int j = -m; j <= m; ++j) {
      // ([Λ, M] g)_k = λ_k M_kj g_j - M_kj λ_j g_j
      acc += (lambda[idx(k)] - lambda[idx(j)]) * mult[idx(k)][idx(j)] * gc[idx(j)];
    }
    sum += std::norm(acc);
  }
  return std::sqrt(2.0 * std::numbers::pi * sum);
}

}  // namespace pmelab::testing
