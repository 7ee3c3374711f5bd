// pmelab command-line entry point.
//
//   pmelab verify                                  module invariant suite
//   pmelab evolve --family U --n 8 --out dir       single trajectory dump
//   pmelab experiment --config cfg.yaml [--set k=v]...
//   pmelab report --input dir/report.json [--out dir]
//
// Exit codes: 0 all verdicts pass, 1 verdict failure, 2 usage/config error,
// 3 numerical abort, 4 I/O error.

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "pmelab/config.hpp"
#include "pmelab/evolution.hpp"
#include "pmelab/report_io.hpp"
#include "pmelab/self_check.hpp"

namespace {

enum ExitCode { kOk = 0, kVerdictFailed = 1, kConfigError = 2, kNumericalAbort = 3, kIoError = 4 };

std::filesystem::path resolve_output_dir(const std::string& configured, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(pmelab::kOutputDirEnv); env && *env) return env;
  return configured;
}

void print_check(const pmelab::BoundReport& c) {
  std::cout << (c.satisfied ? "PASS " : "FAIL ") << c.name << "  measured="
            << pmelab::format_double(c.measured) << " bound=" << pmelab::format_double(c.theoretical)
            << "\n";
}

int run_verify() {
  const auto checks = pmelab::run_self_checks();
  bool ok = true;
  for (const auto& c : checks) {
    print_check(c);
    ok = ok && c.satisfied;
  }
  return ok ? kOk : kVerdictFailed;
}

struct EvolveOptions {
  std::string family = "U";
  int n = 8;
  double s = 4.0;
  double T = 1.0;
  int samples = 16;
  int multiplier = 8;
  double dt_safety = 0.5;
  bool no_dealias = false;
  double c = 1.0;
  double eps = 0.1;
  std::string out;
};

int run_evolve(const EvolveOptions& o) {
  using namespace pmelab;
  std::optional<SpectralField> u0;
  std::optional<MonitorBounds> bounds;
  if (o.family == "U" || o.family == "V") {
    const SequenceParams p(o.n, o.s);
    const Grid grid(o.multiplier * o.n);
    u0 = o.family == "U" ? sample_U(p, grid) : sample_V(p, 0.0, grid);
    bounds = o.family == "U" ? MonitorBounds::for_U(p) : MonitorBounds::for_V(p);
  } else if (o.family == "perturbed") {
    const Grid grid(std::max(8, o.multiplier * o.n));
    const double c = o.c, eps = o.eps;
    u0 = SpectralField::from_function(grid, [c, eps](double x) { return c + eps * std::cos(x); });
    bounds = MonitorBounds{};
  } else {
    throw CLI::ValidationError("--family", "must be U, V or perturbed");
  }

  SolverConfig cfg;
  cfg.t_end = o.T;
  cfg.dt_safety = o.dt_safety;
  cfg.dealias = !o.no_dealias;
  for (int k = 0; k <= o.samples; ++k) cfg.sample_times.push_back(o.T * k / o.samples);
  const auto traj = pme_evolve(*u0, cfg, o.family);

  std::string snapshots = "t,j,x,u\n";
  const Grid& grid = u0->grid();
  for (const auto& snap : traj.snapshots) {
    for (int j = 0; j < grid.size(); ++j) {
      snapshots += format_double(snap.t) + "," + std::to_string(j) + "," + format_double(grid.node(j)) +
                   "," + format_double(snap.field.values()[static_cast<size_t>(j)]) + "\n";
    }
  }
  std::string monitors = "t,dt,min_u,max_u,sup_ux,mean_u,energy,odd_part\n";
  for (const auto& r : traj.monitors.records) {
    for (double x : {r.t, r.dt, r.min_u, r.max_u, r.sup_ux, r.mean_u, r.energy}) {
      monitors += format_double(x) + ",";
    }
    monitors += format_double(r.odd_part) + "\n";
  }
  const auto dir = resolve_output_dir("pmelab-out", o.out);
  write_text_file(dir, "trajectory.csv", snapshots);
  write_text_file(dir, "monitors.csv", monitors);

  const auto verdict = check_monitors(traj, *bounds);
  for (const auto& c : verdict.checks) print_check(c);
  std::cout << traj.monitors.records.size() - 1 << " steps, output in " << dir.string() << "\n";
  return verdict.passed() ? kOk : kVerdictFailed;
}

int finish_report(const pmelab::ExperimentReport& report) {
  for (const auto& rec : report.records) {
    std::cout << "n=" << rec.n << " N=" << rec.grid_points << (rec.passed() ? "  pass" : "  FAIL");
    if (rec.abort) std::cout << "  aborted: " << *rec.abort;
    std::cout << "\n";
    for (const auto& c : rec.checks) {
      if (!c.satisfied) print_check(c);
    }
  }
  for (const auto& [k, v] : report.fits) std::cout << "  " << k << " = " << pmelab::format_double(v) << "\n";
  for (const auto& c : report.checks) print_check(c);
  for (const auto& note : report.notes) std::cout << "note: " << note << "\n";
  if (report.aborted()) return kNumericalAbort;
  return report.passed() ? kOk : kVerdictFailed;
}

int run_experiment(const std::string& config_path, const std::vector<std::string>& overrides,
                   const std::string& out_flag) {
  using namespace pmelab;
  auto cfg = parse_config(config_path, overrides);
  const auto dir = resolve_output_dir(cfg.output_dir, out_flag);
  const auto report = pmelab::run_experiment(cfg);
  write_report(report, dir);
  emit_csv(report, dir);
  std::ostringstream timing;
  timing << std::setprecision(6) << "wall_seconds=" << report.wall_seconds << "\n";
  write_text_file(dir, "timing.txt", timing.str());
  std::cout << to_string(cfg.kind) << " experiment, output in " << dir.string() << "\n";
  return finish_report(report);
}

int run_report(const std::string& input, const std::string& out_flag) {
  using namespace pmelab;
  const auto report = read_report(input);
  const std::filesystem::path dir =
      out_flag.empty() ? std::filesystem::path(input).parent_path() : std::filesystem::path(out_flag);
  for (const auto& p : emit_csv(report, dir.empty() ? std::filesystem::path(".") : dir)) {
    std::cout << "wrote " << p.string() << "\n";
  }
  return finish_report(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for the periodic porous medium equation u_t = (u u_x)_x"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "Run the module invariant suite");

  EvolveOptions evolve_opts;
  auto* evolve = app.add_subcommand("evolve", "Evolve one initial datum and dump the trajectory");
  evolve->add_option("--family", evolve_opts.family, "U, V or perturbed (c + eps cos x)");
  evolve->add_option("--n", evolve_opts.n, "Mode number (U/V) or grid scale (perturbed)");
  evolve->add_option("-s,--s", evolve_opts.s, "Sobolev regularity s > 7/2");
  evolve->add_option("-T,--T", evolve_opts.T, "Time horizon");
  evolve->add_option("--samples", evolve_opts.samples, "Number of uniform output intervals");
  evolve->add_option("--grid-multiplier", evolve_opts.multiplier, "Grid points per mode");
  evolve->add_option("--dt-safety", evolve_opts.dt_safety, "Fraction of the stability limit");
  evolve->add_flag("--no-dealias", evolve_opts.no_dealias, "Disable 3/2-rule padding");
  evolve->add_option("--c", evolve_opts.c, "Mean level for the perturbed family");
  evolve->add_option("--eps", evolve_opts.eps, "Perturbation size for the perturbed family");
  evolve->add_option("-o,--out", evolve_opts.out, "Output directory");

  std::string config_path, out_dir, report_input;
  std::vector<std::string> overrides;
  auto* experiment = app.add_subcommand("experiment", "Run an experiment from a YAML config");
  experiment->add_option("-c,--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  experiment->add_option("--set", overrides, "Override as dotted.key=value (repeatable)");
  experiment->add_option("-o,--out", out_dir, "Output directory (overrides config and environment)");

  auto* report = app.add_subcommand("report", "Re-render CSV files from a stored report");
  report->add_option("-i,--input", report_input, "Path to report.json")->required()->check(CLI::ExistingFile);
  report->add_option("-o,--out", out_dir, "Output directory (default: alongside the report)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (verify->parsed()) return run_verify();
    if (evolve->parsed()) return run_evolve(evolve_opts);
    if (experiment->parsed()) return run_experiment(config_path, overrides, out_dir);
    if (report->parsed()) return run_report(report_input, out_dir);
  } catch (const pmelab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  } catch (const pmelab::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const pmelab::ResolutionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const pmelab::NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return kNumericalAbort;
  } catch (const pmelab::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIoError;
  }
  return kConfigError;
}
