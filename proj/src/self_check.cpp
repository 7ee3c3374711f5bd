#include "pmelab/self_check.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pmelab/evolution.hpp"
#include "pmelab/inequality.hpp"

namespace pmelab {
namespace {

BoundReport at_most(std::string name, double bound, double measured) {
  return {std::move(name), bound, measured, measured <= bound};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

std::vector<BoundReport> run_self_checks(std::uint64_t seed) {
  std::vector<BoundReport> out;
  const Grid grid(64);

  double worst = 0.0;
  for (int n = 1; n <= grid.size() / 4; ++n) {
    const auto c = SpectralField::from_function(grid, [n](double x) { return std::cos(n * x); });
    for (double r : {0.0, 1.0, 2.0, 3.5, 4.0, 6.0}) {
      worst = std::max(worst, rel(sobolev_norm(c, SobolevIndex{r}),
                                  std::sqrt(std::numbers::pi) * std::pow(1.0 + n * n, r / 2.0)));
    }
  }
  out.push_back(at_most("norm identity |cos(nx)|_r (rel)", 1e-12, worst));

  worst = 0.0;
  double parseval = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto u = random_trig_polynomial(grid, 16, seed, i);
    for (double r : {-1.0, 1.0, 2.5, 4.0}) {
      worst = std::max(worst, rel(sobolev_norm(apply_lambda(u, SobolevIndex{r}), SobolevIndex{0.0}),
                                  sobolev_norm(u, SobolevIndex{r})));
    }
    double trap = 0.0;
    for (double v : u.values()) trap += v * v;
    trap *= 2.0 * std::numbers::pi / grid.size();
    parseval = std::max(parseval, rel(std::pow(sobolev_norm(u, SobolevIndex{0.0}), 2), trap));
  }
  out.push_back(at_most("Lambda^r isometry (rel)", 1e-13, worst));
  out.push_back(at_most("Parseval vs trapezoid (rel)", 1e-10, parseval));

  worst = 0.0;
  bool bounds_ok = true;
  for (int n : {2, 4, 8, 16}) {
    const SequenceParams p(n, 4.0);
    const Grid g(8 * n);
    const auto U = sample_U(p, g);
    worst = std::max(worst, sup_norm(numeric_residual(U, time_derivative_U(p, g)) - residual_U_closed(p, g)));
    for (const auto& b : check_pointwise_bounds_U(p, g)) bounds_ok = bounds_ok && b.satisfied;
    for (double t : {0.0, 0.1, 1.0}) {
      const auto V = sample_V(p, t, g);
      worst = std::max(worst, sup_norm(numeric_residual(V, time_derivative_V(p, t, g)) -
                                       residual_V_closed(p, t, g)));
      for (const auto& b : check_pointwise_bounds_V(p, t, g)) bounds_ok = bounds_ok && b.satisfied;
    }
  }
  out.push_back(at_most("residual closed forms (sup error)", 1e-10, worst));
  out.push_back({"pointwise bounds of U_n, V_n", 1.0, bounds_ok ? 1.0 : 0.0, bounds_ok});

  double slack = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto u0 = random_trig_polynomial(grid, 16, seed + 1, 2 * i);
    const auto v0 = random_trig_polynomial(grid, 16, seed + 1, 2 * i + 1);
    const double g0 = sobolev_norm(u0 - v0, SobolevIndex{4.0});
    for (double t : {0.0, 1e-4, 1e-3, 1e-2, 0.1, 1.0}) {
      slack = std::min(slack, g0 - sobolev_norm(heat_evolve(u0, t) - heat_evolve(v0, t), SobolevIndex{4.0}));
    }
  }
  out.push_back({"heat contraction slack", -1e-12, slack, slack >= -1e-12});

  const auto interp = interpolation_sweep(grid, SobolevIndex{4.0}, SobolevIndex{6.0}, 500, seed + 2);
  out.push_back(at_most("interpolation ratio over 500 fields", 1.0 + 1e-10, interp.max_ratio));

  worst = 0.0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const auto f = random_trig_polynomial(grid, 16, seed + 3, 2 * i);
    const auto g = random_trig_polynomial(grid, 16, seed + 3, 2 * i + 1);
    const auto shifted = f + SpectralField::constant(grid, 3.0);
    const double base = commutator_ratio(f, g, SobolevIndex{2.0}).lhs;
    worst = std::max(worst, rel(commutator_ratio(shifted, g, SobolevIndex{2.0}).lhs, base));
  }
  out.push_back(at_most("commutator invariant under f+c (rel)", 1e-10, worst));

  const SequenceParams p(8, 4.0);
  SolverConfig cfg;
  cfg.t_end = 0.25;
  const auto traj = pme_evolve(sample_U(p, Grid(64)), cfg, "self-check");
  const auto verdict = check_monitors(traj, MonitorBounds::for_U(p));
  out.push_back({"PME monitors for u_8 on [0, 0.25]", 1.0, verdict.passed() ? 1.0 : 0.0, verdict.passed()});
  return out;
}

}  // namespace pmelab
