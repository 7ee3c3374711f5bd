// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "dense_oracle.hpp"
#include "pmelab/config.hpp"
#include "pmelab/evolution.hpp"
#include "pmelab/inequality.hpp"
#include "pmelab/report_io.hpp"

using namespace pmelab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;
  std::vector<std::string> violated;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      violated.push_back(what);
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

SpectralField cosine(const Grid& g, int n) {
  return SpectralField::from_function(g, [n](double x) { return std::cos(n * x); });
}

void norm_identity(Outcome& out) {
  const auto start = Clock::now();
  const Grid grid(256);
  double worst = 0.0;
  double worst_sampled = 0.0;
  for (int n = 1; n <= grid.size() / 4; ++n) {
    std::vector<Complex> half(static_cast<size_t>(grid.nyquist() + 1));
    half[static_cast<size_t>(n)] = 0.5;
    const auto exact = SpectralField::from_half_spectrum(grid, std::move(half));
    const auto sampled = cosine(grid, n);
    for (double r : {0.0, 1.0, 2.0, 3.5, 4.0, 6.0}) {
      const double expected = std::sqrt(std::numbers::pi) * std::pow(1.0 + double(n) * n, r / 2.0);
      worst = std::max(worst, std::abs(sobolev_norm(exact, SobolevIndex{r}) - expected) / expected);
      worst_sampled = std::max(worst_sampled, std::abs(sobolev_norm(sampled, SobolevIndex{r}) - expected) / expected);
    }
  }
  const double elapsed = seconds_since(start);
  out.detail << "N=256, n<=64, max rel error " << worst << " (from sampled values, FFT round-off included: "
             << worst_sampled << "), " << elapsed << " s";
  out.require(worst <= 1e-12, "relative error <= 1e-12");
  out.require(elapsed < 1.0, "runtime < 1 s");
}

void residual_closed_forms(Outcome& out) {
  double worst = 0.0;
  for (int n : {2, 4, 8, 16}) {
    const SequenceParams p(n, 4.0);
    const Grid g(8 * n);
    worst = std::max(worst, sup_norm(numeric_residual(sample_U(p, g), time_derivative_U(p, g)) -
                                     residual_U_closed(p, g)));
    for (double t : {0.0, 0.1, 1.0}) {
      worst = std::max(worst, sup_norm(numeric_residual(sample_V(p, t, g), time_derivative_V(p, t, g)) -
                                       residual_V_closed(p, t, g)));
    }
  }
  out.detail << "max pointwise error " << worst;
  out.require(worst <= 1e-10, "pointwise error <= 1e-10");
}

void solver_order(Outcome& out) {
  const Grid g(16);
  const auto u0 = SpectralField::from_function(g, [](double x) { return 1.0 + 0.1 * std::cos(x); });
  auto final_state = [&](double safety) {
    SolverConfig cfg;
    cfg.t_end = 1.0;
    cfg.dt_safety = safety;
    return pme_evolve(u0, cfg).at(1.0);
  };
  const auto reference = final_state(0.125);
  const double coarse = sobolev_norm(final_state(1.0) - reference, SobolevIndex{1.0});
  const double fine = sobolev_norm(final_state(0.5) - reference, SobolevIndex{1.0});
  const double factor = coarse / fine;
  out.detail << "self-convergence factor " << factor;
  out.require(std::abs(factor - 16.0) <= 0.3 * 16.0, "factor within 16 +/- 30%");

  double worst_margin = 0.0;
  for (double c : {1.0, 0.5, 2.0}) {
    const double eps = 1e-6 * c;
    const auto start = SpectralField::from_function(g, [=](double x) { return c + eps * std::cos(x); });
    SolverConfig cfg;
    cfg.t_end = 1.0;
    const auto u = pme_evolve(start, cfg).at(1.0);
    const auto linear = SpectralField::from_function(
        g, [=](double x) { return c + eps * std::exp(-c) * std::cos(x); });
    worst_margin = std::max(worst_margin, sup_norm(u - linear) / (10.0 * eps * eps / c));
  }
  out.detail << "; linearized deviation / (10 eps^2/c) <= " << worst_margin;
  out.require(worst_margin <= 1.0, "linearized decay within 10 eps^2/c");
}

void monitors(Outcome& out) {
  const auto report = run_nonuniform_experiment(ExperimentConfig{});
  int trajectories = 0, violations = 0;
  for (const auto& rec : report.records) {
    out.require(!rec.abort, "no aborted trajectory");
    trajectories += 2;
    for (const auto& c : rec.checks) {
      const bool monitored = c.name.rfind("u: ", 0) == 0 || c.name.rfind("v: ", 0) == 0;
      const bool in_scope = c.name.find("lower bound") != std::string::npos ||
                            c.name.find("upper bound") != std::string::npos ||
                            c.name.find("derivative bound") != std::string::npos ||
                            c.name.find("odd part") != std::string::npos ||
                            c.name.find("mean conserved") != std::string::npos;
      if (monitored && in_scope && !c.satisfied) {
        ++violations;
        out.detail << " n=" << rec.n << " " << c.name << "=" << c.measured << ";";
      }
    }
  }
  out.detail << trajectories << " trajectories, " << violations << " violations";
  out.require(trajectories == 8, "default sweep has four n values");
  out.require(violations == 0, "zero monitor violations");
}

ExperimentReport error_scaling_at(int multiplier) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kErrorScaling;
  cfg.grid_multiplier = multiplier;
  return run_error_scaling(cfg);
}

void error_scaling(Outcome& out) {
  const auto base = error_scaling_at(8);
  const auto doubled = error_scaling_at(16);
  for (const auto* r : {&base, &doubled}) out.require(!r->aborted(), "no aborted trajectory");
  for (const char* fam : {"u", "v"}) {
    const std::string key = std::string("slope_h1_") + fam;
    const double slope = base.fits.count(key) ? base.fits.at(key) : std::nan("");
    const double slope2 = doubled.fits.count(key) ? doubled.fits.at(key) : std::nan("");
    out.detail << fam << "-slope " << slope << " (2N: " << slope2 << "), ";
    out.require(slope >= -4.7 && slope <= -3.3, std::string(fam) + "-family slope in [-4.7, -3.3]");
  }
  double worst = 0.0;
  for (size_t i = 0; i < base.records.size(); ++i) {
    for (const char* key : {"max_h1_err_u", "max_h1_err_v"}) {
      const double a = base.records[i].values.at(key);
      const double b = doubled.records[i].values.at(key);
      worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
  }
  out.detail << "N vs 2N max rel difference " << worst;
  out.require(worst <= 5e-4, "N and 2N agree to 3 significant figures");
}

void nonuniform(Outcome& out) {
  const auto report = run_nonuniform_experiment(ExperimentConfig{});
  const auto& last = report.records.back();
  out.require(last.n == 64 && !last.abort, "n=64 completed");
  const double expected = std::sqrt(2.0 * std::numbers::pi) * (1.0 / 64 - 1.0 / (64.0 * 64.0 * 64.0));
  const double gap0 = last.values.at("initial_gap_measured");
  const double inf_gap = last.values.at("inf_gap");
  out.detail << "initial gap " << gap0 << " (formula " << expected << "), inf gap over [0.25,1] " << inf_gap
             << ", analytic floor " << last.values.at("analytic_floor");
  out.require(std::abs(gap0 - expected) <= 1e-6, "initial gap within 1e-6");
  out.require(inf_gap >= 1.50, "inf gap >= 1.50");
}

void heat_baseline(Outcome& out) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kHeatBaseline;
  const auto report = run_heat_baseline(cfg);
  double worst_excess = -1e300;
  for (const auto& rec : report.records) {
    out.require(!rec.abort, "no aborted trajectory");
    worst_excess = std::max(worst_excess, rec.values.at("max_heat_gap") - rec.values.at("initial_gap_measured"));
  }
  const double slack = report.fits.at("random_pairs_min_slack");
  out.detail << "family pairs: max(heat gap - initial gap) " << worst_excess << "; " << cfg.random_pairs
             << " random pairs: min slack " << slack;
  out.require(worst_excess <= 1e-12, "family heat gaps never exceed the initial gap");
  out.require(slack >= -1e-12, "random pair slack >= -1e-12");
  out.require(cfg.random_pairs == 100, "100 random pairs");
}

void inequality_sweeps(Outcome& out) {
  const Grid grid(64);
  const auto interp = interpolation_sweep(grid, SobolevIndex{4.0}, SobolevIndex{6.0}, 500, 20240901);
  double equality = 0.0;
  for (int n = 1; n < grid.nyquist(); ++n) {
    for (auto [s, r] : {std::pair{4.0, 6.0}, {2.0, 5.0}, {1.5, 3.0}}) {
      equality = std::max(equality,
                          std::abs(interpolation_ratio(cosine(grid, n), SobolevIndex{s}, SobolevIndex{r}).ratio - 1.0));
    }
  }
  out.detail << "interpolation max ratio " << interp.max_ratio << ", single-mode |ratio-1| " << equality;
  out.require(interp.count == 500 && interp.max_ratio <= 1.0 + 1e-10, "interpolation ratio <= 1+1e-10");
  out.require(equality <= 1e-12, "single-mode equality to 1e-12");

  for (double r : {2.0, 4.0}) {
    const auto first = commutator_sweep(grid, SobolevIndex{r}, 100, 20240901);
    const auto full = commutator_sweep(grid, SobolevIndex{r}, 200, 20240901);
    out.detail << "; commutator r=" << r << " max ratio " << full.max_ratio << " (100: " << first.max_ratio << ")";
    out.require(full.count == 200 && std::isfinite(full.max_ratio), "commutator ratios finite");
    out.require(full.max_ratio <= 1.2 * first.max_ratio, "max ratio stable under doubling the sample count");
  }

  const Grid small(16);
  double oracle_gap = 0.0;
  const auto c1 = cosine(small, 1);
  oracle_gap = std::abs(commutator_ratio(c1, c1, SobolevIndex{2.0}).lhs -
                        testing::dense_commutator_norm(c1, c1, 2.0));
  for (std::uint64_t i = 0; i < 8; ++i) {
    const auto f = random_trig_polynomial(small, 6, 77, 2 * i);
    const auto g = random_trig_polynomial(small, 6, 77, 2 * i + 1);
    for (double r : {2.0, 3.0, 4.0}) {
      oracle_gap = std::max(oracle_gap, std::abs(commutator_ratio(f, g, SobolevIndex{r}).lhs -
                                                 testing::dense_commutator_norm(f, g, r)));
    }
  }
  out.detail << "; dense oracle max difference " << oracle_gap;
  out.require(oracle_gap <= 1e-10, "dense-matrix oracle agreement 1e-10");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism(Outcome& out) {
  const auto root = fs::temp_directory_path() / "pmelab-acceptance-determinism";
  fs::remove_all(root);
  const auto cfg = parse_config_text("");
  for (const char* run : {"a", "b"}) {
    const auto report = run_experiment(cfg);
    write_report(report, root / run);
    emit_csv(report, root / run);
  }
  int files = 0, differing = 0;
  for (const auto& entry : fs::directory_iterator(root / "a")) {
    ++files;
    const auto name = entry.path().filename();
    if (slurp(entry.path()) != slurp(root / "b" / name)) {
      ++differing;
      out.detail << " differs: " << name.string() << ";";
    }
  }
  out.detail << files << " files compared, " << differing << " differ";
  out.require(files == 6, "report plus summary plus four norms files");
  out.require(differing == 0, "byte-identical outputs");
  fs::remove_all(root);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"1 norm identity", norm_identity},
      {"2 residual closed forms", residual_closed_forms},
      {"3 solver order", solver_order},
      {"4 maximum-principle monitors", monitors},
      {"5 error scaling", error_scaling},
      {"6 non-uniform continuity", nonuniform},
      {"7 heat baseline", heat_baseline},
      {"8 inequality sweeps", inequality_sweeps},
      {"9 determinism", determinism},
  };
  std::cout.precision(6);
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome out;
    const auto start = Clock::now();
    try {
      run(out);
    } catch (const std::exception& e) {
      out.passed = false;
      out.violated.push_back(std::string("exception: ") + e.what());
    }
    failures += out.passed ? 0 : 1;
    std::cout << (out.passed ? "PASS " : "FAIL ") << name << " (" << seconds_since(start) << " s): "
              << out.detail.str();
    for (const auto& v : out.violated) std::cout << " [violated: " << v << "]";
    std::cout << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
