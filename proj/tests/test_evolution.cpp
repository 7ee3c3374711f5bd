#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "pmelab/evolution.hpp"
#include "pmelab/inequality.hpp"

using namespace pmelab;

namespace {

SpectralField cosine(const Grid& g, int n) {
  return SpectralField::from_function(g, [n](double x) { return std::cos(n * x); });
}

SpectralField perturbed(const Grid& g, double c, double eps) {
  return SpectralField::from_function(g, [c, eps](double x) { return c + eps * std::cos(x); });
}

SolverConfig config(double t_end, double safety = 0.5) {
  SolverConfig cfg;
  cfg.t_end = t_end;
  cfg.dt_safety = safety;
  return cfg;
}

}  // namespace

TEST_CASE("pme_rhs on simple data") {
  const Grid g(32);
  CHECK(sup_norm(pme_rhs(SpectralField::constant(g, 3.0))) < 1e-14);
  for (double eps : {0.1, 0.3, 1e-3}) {
    const auto expected = -eps * cosine(g, 1) - eps * eps * cosine(g, 2);
    CHECK(sup_norm(pme_rhs(perturbed(g, 1.0, eps)) - expected) < 1e-13);
    CHECK(sup_norm(pme_rhs(perturbed(g, 1.0, eps), false) - expected) < 1e-13);
  }
}

TEST_CASE("U_n is steady up to its residual") {
  for (int n : {2, 8, 16}) {
    const SequenceParams p(n, 4.0);
    const Grid g(8 * n);
    CHECK(sup_norm(pme_rhs(sample_U(p, g)) + residual_U_closed(p, g)) < 1e-10);
  }
}

TEST_CASE("solver config validation") {
  const Grid g(16);
  const auto u0 = perturbed(g, 1.0, 0.1);
  SolverConfig cfg = config(1.0);
  cfg.dt_safety = 1.5;
  CHECK_THROWS_AS(pme_evolve(u0, cfg), ArgumentError);
  cfg = config(1.0);
  cfg.sample_times = {0.5, 2.0};
  CHECK_THROWS_AS(pme_evolve(u0, cfg), ArgumentError);
  cfg = config(-1.0);
  CHECK_THROWS_AS(pme_evolve(u0, cfg), ArgumentError);
}

TEST_CASE("aborts") {
  const Grid g(16);
  SUBCASE("positivity lost at the start") {
    CHECK_THROWS_AS(pme_evolve(perturbed(g, 0.05, 1.0), config(1.0)), DegenerateRegimeError);
    CHECK_THROWS_AS(pme_evolve(SpectralField::zero(g), config(1.0)), DegenerateRegimeError);
  }
  SUBCASE("non-finite data") {
    std::vector<double> bad(16, 1.0);
    bad[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(pme_evolve(make_field_from_samples(g, bad), config(1.0)), InstabilityError);
  }
  SUBCASE("step budget") {
    SolverConfig cfg = config(1.0);
    cfg.max_steps = 3;
    try {
      pme_evolve(perturbed(g, 1.0, 0.1), cfg);
      FAIL("expected an abort");
    } catch (const NumericalAbort& e) {
      CHECK(e.time() > 0.0);
      CHECK(e.time() < 1.0);
    }
  }
}

TEST_CASE("constant data stays constant") {
  const Grid g(16);
  SolverConfig cfg = config(2.0);
  cfg.sample_times = {0.0, 0.5, 2.0};
  const auto traj = pme_evolve(SpectralField::constant(g, 0.7), cfg);
  REQUIRE(traj.snapshots.size() == 3);
  for (const auto& snap : traj.snapshots) {
    CHECK(sup_norm(snap.field - SpectralField::constant(g, 0.7)) == 0.0);
  }
  CHECK(check_monitors(traj, {}).passed());
}

TEST_CASE("sample times are hit exactly") {
  const Grid g(16);
  SolverConfig cfg = config(1.0);
  cfg.sample_times = {1.0, 0.1, 1.0 / 3.0, 0.0};
  const auto traj = pme_evolve(perturbed(g, 1.0, 0.2), cfg, "hit");
  REQUIRE(traj.snapshots.size() == 4);
  CHECK(traj.snapshots[0].t == 0.0);
  CHECK(traj.snapshots[1].t == 0.1);
  CHECK(traj.snapshots[2].t == 1.0 / 3.0);
  CHECK(traj.snapshots[3].t == 1.0);
  CHECK_NOTHROW(traj.at(1.0 / 3.0));
  CHECK_THROWS_AS(traj.at(0.2), ArgumentError);
  CHECK(traj.monitors.records.back().t == 1.0);
  CHECK(traj.description == "hit");
}

TEST_CASE("linearized decay for small perturbations") {
  const Grid g(16);
  for (double c : {1.0, 0.5}) {
    const double eps = 1e-6 * c;
    SolverConfig cfg = config(1.0);
    const auto u = pme_evolve(perturbed(g, c, eps), cfg).at(1.0);
    const auto expected = perturbed(g, c, eps * std::exp(-c));
    CHECK(sup_norm(u - expected) <= 10.0 * eps * eps / c);
  }
}

TEST_CASE("fourth order in time") {
  const Grid g(16);
  const auto u0 = perturbed(g, 1.0, 0.1);
  const auto reference = pme_evolve(u0, config(1.0, 0.125)).at(1.0);
  const double coarse = sobolev_norm(pme_evolve(u0, config(1.0, 1.0)).at(1.0) - reference, SobolevIndex{1.0});
  const double fine = sobolev_norm(pme_evolve(u0, config(1.0, 0.5)).at(1.0) - reference, SobolevIndex{1.0});
  const double factor = coarse / fine;
  CHECK(factor >= 16.0 * 0.7);
  CHECK(factor <= 16.0 * 1.3);
}

TEST_CASE("spatial resolution does not change sampled norms") {
  const SequenceParams p(8, 4.0);
  SolverConfig cfg = config(0.5);
  cfg.sample_times = {0.1, 0.5};
  for (bool v_family : {false, true}) {
    const auto coarse_u0 = v_family ? sample_V(p, 0.0, Grid(64)) : sample_U(p, Grid(64));
    const auto fine_u0 = v_family ? sample_V(p, 0.0, Grid(128)) : sample_U(p, Grid(128));
    const auto a = pme_evolve(coarse_u0, cfg);
    const auto b = pme_evolve(fine_u0, cfg);
    for (double t : cfg.sample_times) {
      for (double r : {0.0, 1.0, 4.0}) {
        const double na = sobolev_norm(a.at(t), SobolevIndex{r});
        const double nb = sobolev_norm(b.at(t), SobolevIndex{r});
        // high-order norms see the truncated cascade into modes 3n, 4n, ...
        CHECK(std::abs(na - nb) <= (r > 1.0 ? 1e-6 : 1e-10) * nb);
      }
    }
  }
}

TEST_CASE("exact solution stays close to U_8") {
  // Empirical constant: n^4 max_t ‖U_n - u_n(t)‖_{H^1} is about 1.7 for n = 8..64.
  const SequenceParams p(8, 4.0);
  const Grid g(64);
  SolverConfig cfg = config(1.0);
  for (int k = 0; k <= 32; ++k) cfg.sample_times.push_back(k / 32.0);
  const auto traj = pme_evolve(sample_U(p, g), cfg);
  const auto U = sample_U(p, g);
  double worst = 0.0;
  for (const auto& snap : traj.snapshots) {
    worst = std::max(worst, sobolev_norm(snap.field - U, SobolevIndex{1.0}));
  }
  CHECK(worst * std::pow(8.0, 4.0) <= 2.0);
  CHECK(worst * std::pow(8.0, 4.0) >= 1.0);
}

TEST_CASE("monitors on the families") {
  for (int n : {4, 8, 32}) {
    const SequenceParams p(n, 4.0);
    const Grid g(8 * n);
    SolverConfig cfg = config(1.0);
    const auto tu = pme_evolve(sample_U(p, g), cfg);
    const auto tv = pme_evolve(sample_V(p, 0.0, g), cfg);
    const auto vu = check_monitors(tu, MonitorBounds::for_U(p));
    const auto vv = check_monitors(tv, MonitorBounds::for_V(p));
    for (const auto& c : vu.checks) CHECK_MESSAGE(c.satisfied, "U n=", n, " ", c.name, " ", c.measured);
    for (const auto& c : vv.checks) CHECK_MESSAGE(c.satisfied, "V n=", n, " ", c.name, " ", c.measured);
    CHECK(tu.monitors.records.front().min_u >= std::pow(n, -3.0) / 4.0);
  }
}

TEST_CASE("monitors catch violated bounds") {
  const SequenceParams p(4, 4.0);
  const Grid g(32);
  const auto traj = pme_evolve(sample_U(p, g), config(0.5));
  MonitorBounds tight = MonitorBounds::for_U(p);
  tight.upper = std::pow(4.0, -3.0);
  tight.derivative = 1e-6;
  const auto verdict = check_monitors(traj, tight);
  CHECK_FALSE(verdict.passed());
  int failed = 0;
  for (const auto& c : verdict.checks) failed += c.satisfied ? 0 : 1;
  CHECK(failed == 2);

  // An odd perturbation is fine unless evenness is demanded.
  const auto odd = SpectralField::from_function(g, [](double x) { return 1.0 + 0.1 * std::sin(x); });
  const auto odd_traj = pme_evolve(odd, config(0.5));
  CHECK(check_monitors(odd_traj, {}).passed());
  MonitorBounds even;
  even.expect_even = true;
  CHECK_FALSE(check_monitors(odd_traj, even).passed());
}

TEST_CASE("energy decays at the rate set by min u0") {
  const Grid g(32);
  const auto u0 = SpectralField::from_function(g, [](double x) { return 1.0 + 0.5 * std::cos(x) + 0.2 * std::cos(3 * x); });
  SolverConfig cfg = config(2.0);
  const auto traj = pme_evolve(u0, cfg);
  const auto verdict = check_monitors(traj, {});
  CHECK(verdict.passed());
  const auto& recs = traj.monitors.records;
  for (size_t i = 1; i < recs.size(); ++i) CHECK(recs[i].energy <= recs[i - 1].energy);
  const double m0 = recs.front().min_u;
  CHECK(recs.back().energy <= recs.front().energy * std::exp(-2.0 * m0 * 2.0));
}

TEST_CASE("positivity for large n and long horizons") {
  const SequenceParams p(128, 4.0);
  const Grid g(8 * 128);
  SolverConfig cfg = config(2.0);
  CHECK_NOTHROW(pme_evolve(sample_U(p, g), cfg));
  const auto tv = pme_evolve(sample_V(p, 0.0, g), cfg);
  CHECK(check_monitors(tv, MonitorBounds::for_V(p)).passed());
}

TEST_CASE("heat propagator") {
  const Grid g(32);
  const auto c3 = heat_evolve(cosine(g, 3), 0.2);
  CHECK(sup_norm(c3 - std::exp(-9 * 0.2) * cosine(g, 3)) < 1e-15);
  CHECK(sup_norm(heat_evolve(SpectralField::constant(g, 2.5), 10.0) - SpectralField::constant(g, 2.5)) == 0.0);
  CHECK_THROWS_AS(heat_evolve(c3, -1.0), ArgumentError);

  // cos(x) against zero: gap e^{-t} √π 2^{s/2}.
  const double s = 4.0;
  for (double t : {0.0, 0.1, 1.0}) {
    const double gap = sobolev_norm(heat_evolve(cosine(g, 1), t) - heat_evolve(SpectralField::zero(g), t), SobolevIndex{s});
    CHECK(gap == doctest::Approx(std::exp(-t) * std::sqrt(std::numbers::pi) * std::pow(2.0, s / 2)).epsilon(1e-14));
  }
}

TEST_CASE("heat flow is a contraction on random pairs") {
  const Grid g(64);
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto u0 = random_trig_polynomial(g, 16, 99, 2 * i);
    const auto v0 = random_trig_polynomial(g, 16, 99, 2 * i + 1);
    const double g0 = sobolev_norm(u0 - v0, SobolevIndex{4.0});
    for (double t : {1e-4, 1e-2, 0.5, 2.0}) {
      CHECK(g0 - sobolev_norm(heat_evolve(u0, t) - heat_evolve(v0, t), SobolevIndex{4.0}) >= -1e-12);
    }
  }
}
