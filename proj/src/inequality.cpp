#include "pmelab/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

namespace pmelab {
namespace {

RatioSample make_ratio(std::string inputs, double lhs, double rhs) {
  RatioSample s{std::move(inputs), lhs, rhs, 0.0};
  if (rhs > 0.0) {
    s.ratio = lhs / rhs;
  } else if (lhs > 0.0) {
    s.ratio = std::numeric_limits<double>::infinity();
  }
  return s;
}

SpectralField pointwise_product(const SpectralField& a, const SpectralField& b) {
  std::vector<double> v(a.values().size());
  for (size_t j = 0; j < v.size(); ++j) v[j] = a.values()[j] * b.values()[j];
  return SpectralField::from_samples(a.grid(), v);
}

template <typename Fn>
SweepSummary run_sweep(int count, std::uint64_t seed, int threads, Fn&& sample) {
  if (count < 1) throw ArgumentError("sweep needs at least one sample");
  SweepSummary summary;
  summary.seed = seed;
  summary.count = count;
  summary.samples.resize(static_cast<size_t>(count));
  const int workers = std::clamp(threads, 1, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) summary.samples[static_cast<size_t>(i)] = sample(i);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int i = w; i < count; i += workers) summary.samples[static_cast<size_t>(i)] = sample(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  summary.max_ratio = summary.samples.front().ratio;
  summary.min_ratio = summary.samples.front().ratio;
  for (const auto& s : summary.samples) {
    summary.max_ratio = std::max(summary.max_ratio, s.ratio);
    summary.min_ratio = std::min(summary.min_ratio, s.ratio);
  }
  return summary;
}

}  // namespace

RatioSample commutator_ratio(const SpectralField& f, const SpectralField& g, SobolevIndex r) {
  if (!(r.value() > 1.5)) throw ArgumentError("commutator estimate requires r > 3/2");
  if (!(f.grid() == g.grid())) throw ArgumentError("fields live on different grids");

  const Grid fine(2 * f.grid().size());
  const auto f_fine = resample(f, fine);
  const auto g_fine = resample(g, fine);
  const auto commutator = apply_lambda(pointwise_product(f_fine, g_fine), r) -
                          pointwise_product(f_fine, apply_lambda(g_fine, r));
  const double lhs = sobolev_norm(commutator, SobolevIndex{0.0});

  const double rhs = sup_norm(derivative(f_fine)) * sobolev_norm(g, SobolevIndex{r.value() - 1.0}) +
                     sobolev_norm(f, r) * sup_norm(g_fine);
  std::ostringstream desc;
  desc << "commutator r=" << r.value() << " N=" << f.grid().size();
  return make_ratio(desc.str(), lhs, rhs);
}

RatioSample interpolation_ratio(const SpectralField& u, SobolevIndex s, SobolevIndex r) {
  if (!(1.0 < s.value() && s.value() < r.value())) {
    throw ArgumentError("interpolation requires 1 < s < r");
  }
  const double hs = sobolev_norm(u, s);
  const double h1 = sobolev_norm(u, SobolevIndex{1.0});
  const double hr = sobolev_norm(u, r);
  const double theta = (r.value() - s.value()) / (r.value() - 1.0);
  const double rhs = std::pow(h1, theta) * std::pow(hr, 1.0 - theta);
  std::ostringstream desc;
  desc << "interpolation s=" << s.value() << " r=" << r.value();
  return make_ratio(desc.str(), hs, rhs);
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw ArgumentError("power-law fit needs at least 3 points");
  PowerLawFit fit;
  for (size_t i = 0; i < points.size(); ++i) {
    const auto [n, y] = points[i];
    if (!(n > 0.0) || !(y > 0.0) || !std::isfinite(y)) {
      throw ArgumentError("power-law fit needs positive finite n and y");
    }
    if (i > 0 && !(n > points[i - 1].first)) throw ArgumentError("n must be strictly increasing");
    fit.points.emplace_back(std::log(n), std::log(y));
  }
  const double m = static_cast<double>(fit.points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : fit.points) sx += x, sy += y;
  const double xbar = sx / m, ybar = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : fit.points) {
    sxx += (x - xbar) * (x - xbar);
    sxy += (x - xbar) * (y - ybar);
  }
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  for (const auto& [x, y] : fit.points) {
    fit.residual = std::max(fit.residual, std::abs(y - (fit.slope * x + fit.intercept)));
  }
  return fit;
}

SpectralField random_trig_polynomial(const Grid& grid, int max_mode, std::uint64_t seed,
                                     std::uint64_t index) {
  if (max_mode < 0 || max_mode >= grid.nyquist()) {
    throw ArgumentError("max_mode must lie below the grid's Nyquist index");
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);

  std::vector<Complex> coeffs(static_cast<size_t>(grid.nyquist() + 1));
  coeffs[0] = coef(rng);
  for (int k = 1; k <= max_mode; ++k) {
    const double a = coef(rng);
    const double b = coef(rng);
    coeffs[static_cast<size_t>(k)] = Complex(0.5 * a, -0.5 * b);
  }
  return SpectralField::from_half_spectrum(grid, std::move(coeffs));
}

SweepSummary commutator_sweep(const Grid& grid, SobolevIndex r, int count, std::uint64_t seed,
                              int max_mode, int threads) {
  return run_sweep(count, seed, threads, [&](int i) {
    const auto f = random_trig_polynomial(grid, max_mode, seed, 2 * static_cast<std::uint64_t>(i));
    const auto g = random_trig_polynomial(grid, max_mode, seed, 2 * static_cast<std::uint64_t>(i) + 1);
    return commutator_ratio(f, g, r);
  });
}

SweepSummary interpolation_sweep(const Grid& grid, SobolevIndex s, SobolevIndex r, int count,
                                 std::uint64_t seed, int max_mode, int threads) {
  return run_sweep(count, seed, threads, [&](int i) {
    return interpolation_ratio(random_trig_polynomial(grid, max_mode, seed, static_cast<std::uint64_t>(i)),
                               s, r);
  });
}

}  // namespace pmelab
