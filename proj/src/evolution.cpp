#include "pmelab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fft.hpp"

namespace pmelab {
namespace {

constexpr double kValueRelTol = 1e-12;
constexpr double kDerivativeRelTol = 1e-10;
constexpr double kOddTol = 1e-10;
constexpr double kMeanTol = 1e-10;
constexpr double kEnergyMonotoneRelTol = 1e-12;
constexpr double kEnergyRateRelTol = 1e-8;

using Spectrum = std::vector<Complex>;

// Coefficient-space state plus the scratch buffers one RK4 step needs.
class Stepper {
 public:
  Stepper(const Grid& grid, bool dealias)
      : grid_(grid),
        plan_(detail::FftPlan::get(grid.size())),
        padded_(dealias ? (3 * grid.size() + 1) / 2 + ((3 * grid.size() + 1) / 2) % 2
                        : grid.size()),
        padded_plan_(detail::FftPlan::get(padded_)),
        u_(static_cast<size_t>(grid.size())),
        ux_(static_cast<size_t>(grid.size())),
        work_(static_cast<size_t>(grid.size() / 2 + 1)),
        pad_coeffs_(static_cast<size_t>(padded_ / 2 + 1)),
        pad_values_(static_cast<size_t>(padded_)) {}

  // out = ½ ∂_x²(u²) for the state c.
  void rhs(const Spectrum& c, Spectrum& out) {
    const int nyq = grid_.nyquist();
    std::fill(pad_coeffs_.begin(), pad_coeffs_.end(), Complex{});
    std::copy(c.begin(), c.begin() + nyq, pad_coeffs_.begin());
    padded_plan_.inverse(pad_coeffs_, pad_values_);
    for (auto& v : pad_values_) v *= v;
    padded_plan_.forward(pad_values_, pad_coeffs_);
    out.assign(c.size(), Complex{});
    for (int k = 0; k < nyq; ++k) {
      out[static_cast<size_t>(k)] = -0.5 * k * k * pad_coeffs_[static_cast<size_t>(k)];
    }
  }

  MonitorRecord observe(const Spectrum& c, double t, double dt) {
    plan_.inverse(c, u_);
    for (size_t k = 0; k < c.size(); ++k) work_[k] = c[k] * Complex(0.0, static_cast<double>(k));
    plan_.inverse(work_, ux_);

    MonitorRecord rec;
    rec.t = t;
    rec.dt = dt;
    rec.min_u = *std::min_element(u_.begin(), u_.end());
    rec.max_u = *std::max_element(u_.begin(), u_.end());
    rec.sup_ux = 0.0;
    for (double v : ux_) rec.sup_ux = std::max(rec.sup_ux, std::abs(v));
    rec.mean_u = c[0].real();
    double energy = 0.0;
    for (size_t k = 1; k < c.size(); ++k) {
      energy += 2.0 * (1.0 + static_cast<double>(k * k)) * std::norm(c[k]);
    }
    rec.energy = 2.0 * std::numbers::pi * energy;
    rec.odd_part = 0.0;
    for (const auto& ck : c) rec.odd_part = std::max(rec.odd_part, std::abs(ck.imag()));

    bool finite = std::isfinite(rec.min_u) && std::isfinite(rec.max_u) &&
                  std::isfinite(rec.sup_ux) && std::isfinite(rec.energy);
    for (double v : u_) finite = finite && std::isfinite(v);
    if (!finite) {
      std::ostringstream msg;
      msg << "non-finite state at t=" << t;
      throw InstabilityError(msg.str(), t);
    }
    if (rec.min_u <= 0.0) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "positivity lost at t=" << t << ": min u = " << rec.min_u
          << " (degenerate regime, solver aborted)";
      throw DegenerateRegimeError(msg.str(), t);
    }
    return rec;
  }

  double stable_step(const MonitorRecord& rec, double safety) const {
    const double kmax = grid_.nyquist();
    const double rate = rec.max_u * kmax * kmax + rec.sup_ux * kmax;
    if (rate <= 0.0) return std::numeric_limits<double>::infinity();
    return safety / rate;
  }

  void rk4(Spectrum& c, double dt) {
    const size_t m = c.size();
    k1_.resize(m), k2_.resize(m), k3_.resize(m), k4_.resize(m), stage_.resize(m);
    rhs(c, k1_);
    for (size_t k = 0; k < m; ++k) stage_[k] = c[k] + 0.5 * dt * k1_[k];
    rhs(stage_, k2_);
    for (size_t k = 0; k < m; ++k) stage_[k] = c[k] + 0.5 * dt * k2_[k];
    rhs(stage_, k3_);
    for (size_t k = 0; k < m; ++k) stage_[k] = c[k] + dt * k3_[k];
    rhs(stage_, k4_);
    for (size_t k = 0; k < m; ++k) {
      c[k] += dt / 6.0 * (k1_[k] + 2.0 * k2_[k] + 2.0 * k3_[k] + k4_[k]);
    }
    c[0].imag(0.0);
    c.back() = 0.0;
  }

 private:
  Grid grid_;
  const detail::FftPlan& plan_;
  int padded_;
  const detail::FftPlan& padded_plan_;
  std::vector<double> u_, ux_;
  Spectrum work_, pad_coeffs_;
  std::vector<double> pad_values_;
  Spectrum k1_, k2_, k3_, k4_, stage_;
};

BoundReport make_check(std::string name, double theoretical, double measured, bool ok) {
  return {std::move(name), theoretical, measured, ok};
}

}  // namespace

void SolverConfig::validate() const {
  if (!(dt_safety > 0.0 && dt_safety <= 1.0)) throw ArgumentError("dt_safety must lie in (0, 1]");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ArgumentError("t_end must be positive");
  for (double t : sample_times) {
    if (!(t >= 0.0 && t <= t_end)) throw ArgumentError("sample times must lie in [0, t_end]");
  }
  if (max_steps <= 0) throw ArgumentError("max_steps must be positive");
}

const SpectralField& Trajectory::at(double t) const {
  for (const auto& s : snapshots) {
    if (s.t == t) return s.field;
  }
  throw ArgumentError("no snapshot at the requested time");
}

SpectralField pme_rhs(const SpectralField& u, bool dealias) {
  const auto square = product(u, u, dealias ? ProductRule::kThreeHalves : ProductRule::kAliased);
  return 0.5 * second_derivative(square);
}

Trajectory pme_evolve(const SpectralField& u0, const SolverConfig& cfg, std::string description) {
  cfg.validate();
  std::vector<double> targets = cfg.sample_times;
  if (targets.empty()) targets.push_back(cfg.t_end);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  const Grid& grid = u0.grid();
  Stepper stepper(grid, cfg.dealias);
  Spectrum c(u0.half_spectrum().begin(), u0.half_spectrum().end());

  Trajectory traj;
  traj.description = std::move(description);
  double t = 0.0;
  MonitorRecord rec = stepper.observe(c, t, 0.0);
  traj.monitors.records.push_back(rec);

  long steps = 0;
  for (double target : targets) {
    while (t < target) {
      double dt = stepper.stable_step(rec, cfg.dt_safety);
      bool lands = false;
      if (t + dt >= target) {
        dt = target - t;
        lands = true;
      }
      stepper.rk4(c, dt);
      t = lands ? target : t + dt;
      rec = stepper.observe(c, t, dt);
      traj.monitors.records.push_back(rec);
      if (++steps > cfg.max_steps) throw InstabilityError("step budget exhausted", t);
    }
    traj.snapshots.push_back({target, SpectralField::from_half_spectrum(grid, c)});
  }
  return traj;
}

SpectralField heat_evolve(const SpectralField& u0, double t) {
  if (!(t >= 0.0)) throw ArgumentError("heat time must be nonnegative");
  Spectrum c(u0.half_spectrum().begin(), u0.half_spectrum().end());
  for (size_t k = 0; k < c.size(); ++k) c[k] *= std::exp(-static_cast<double>(k * k) * t);
  return SpectralField::from_half_spectrum(u0.grid(), std::move(c));
}

MonitorBounds MonitorBounds::for_U(const SequenceParams& p) {
  const double base = std::pow(p.n(), -3.0);
  return {base / 4.0, 2.0 * base, std::pow(p.n(), 1.0 - p.s()), true};
}

MonitorBounds MonitorBounds::for_V(const SequenceParams& p) {
  const double base = 1.0 / p.n();
  return {base / 4.0, 2.0 * base, std::pow(p.n(), 1.0 - p.s()), true};
}

bool MonitorVerdict::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.satisfied; });
}

MonitorVerdict check_monitors(const Trajectory& trajectory, const MonitorBounds& bounds) {
  MonitorVerdict verdict;
  const auto& recs = trajectory.monitors.records;
  if (recs.empty()) return verdict;

  double lowest = recs.front().min_u, highest = recs.front().max_u;
  double steepest = 0.0, odd = 0.0, drift = 0.0;
  for (const auto& r : recs) {
    lowest = std::min(lowest, r.min_u);
    highest = std::max(highest, r.max_u);
    steepest = std::max(steepest, r.sup_ux);
    odd = std::max(odd, r.odd_part);
    drift = std::max(drift, std::abs(r.mean_u - recs.front().mean_u));
  }

  if (bounds.lower) {
    verdict.checks.push_back(make_check("min u >= lower bound", *bounds.lower, lowest,
                                        lowest >= *bounds.lower * (1.0 - kValueRelTol)));
  }
  if (bounds.upper) {
    verdict.checks.push_back(make_check("max u <= upper bound", *bounds.upper, highest,
                                        highest <= *bounds.upper * (1.0 + kValueRelTol)));
  }
  if (bounds.derivative) {
    verdict.checks.push_back(make_check("sup|u_x| <= derivative bound", *bounds.derivative,
                                        steepest,
                                        steepest <= *bounds.derivative * (1.0 + kDerivativeRelTol)));
  }
  const bool even = bounds.expect_even.value_or(recs.front().odd_part <= kOddTol);
  if (even) {
    verdict.checks.push_back(make_check("odd part stays zero", kOddTol, odd, odd <= kOddTol));
  }
  verdict.checks.push_back(make_check("mean conserved", kMeanTol, drift, drift <= kMeanTol));

  // Energy ‖Λ¹(u-[u])‖²: monotone, and bounded by E(0) e^{-2 min u0 t}.
  // Below `floor` an energy difference is transform round-off: every coefficient carries
  // noise of order eps * max|u|, weighted by (1+k^2) over N modes.
  const double m0 = recs.front().min_u;
  const double e0 = recs.front().energy;
  const double n_pts = trajectory.snapshots.empty() ? 0.0 : trajectory.snapshots.front().field.grid().size();
  const double noise = 16.0 * std::numeric_limits<double>::epsilon() * std::abs(recs.front().max_u);
  const double floor = 2.0 * std::numbers::pi * n_pts * (1.0 + n_pts * n_pts / 4.0) * noise * noise;
  int increases = 0, hard_rate = 0;
  double worst_integrated = 0.0;
  for (size_t i = 1; i < recs.size(); ++i) {
    const auto& prev = recs[i - 1];
    const auto& cur = recs[i];
    if (cur.energy > prev.energy * (1.0 + kEnergyMonotoneRelTol) + floor) ++increases;
    const double step_bound = prev.energy * std::exp(-2.0 * m0 * cur.dt);
    const double excess = cur.energy - step_bound - floor;
    if (excess > 0.0) {
      if (excess <= kEnergyRateRelTol * prev.energy) {
        ++verdict.soft_rate_excursions;
      } else {
        ++hard_rate;
      }
    }
    const double integrated = e0 * std::exp(-2.0 * m0 * cur.t);
    if (integrated > 0.0) {
      worst_integrated = std::max(worst_integrated, std::max(0.0, cur.energy - floor) / integrated);
    }
  }
  verdict.checks.push_back(make_check("energy non-increasing (violating steps)", 0.0,
                                      static_cast<double>(increases), increases == 0));
  verdict.checks.push_back(make_check("energy decay rate, stepwise (violating steps)", 0.0,
                                      static_cast<double>(hard_rate), hard_rate == 0));
  verdict.checks.push_back(make_check("energy decay rate, integrated (E/E0 e^{-2mt})", 1.0,
                                      worst_integrated,
                                      worst_integrated <= 1.0 + kEnergyRateRelTol));
  return verdict;
}

}  // namespace pmelab
