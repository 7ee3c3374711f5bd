#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "pmelab/config.hpp"
#include "pmelab/evolution.hpp"
#include "pmelab/inequality.hpp"
#include "pmelab/report_io.hpp"
#include "pmelab/self_check.hpp"

namespace py = pybind11;
using namespace pmelab;

namespace {

py::array_t<double> to_array(std::span<const double> v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::array_t<Complex> to_array(std::span<const Complex> v) {
  py::array_t<Complex> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

SobolevIndex idx(double r) { return SobolevIndex{r}; }

}  // namespace

PYBIND11_MODULE(_pmelab, m) {
  m.doc() = "Spectral toolkit for the periodic porous medium equation u_t = (u u_x)_x";

  auto base = py::register_exception<NumericalAbort>(m, "NumericalAbort", PyExc_RuntimeError);
  py::register_exception<DegenerateRegimeError>(m, "DegenerateRegimeError", base.ptr());
  py::register_exception<InstabilityError>(m, "InstabilityError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ResolutionError>(m, "ResolutionError", PyExc_ValueError);
  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<Grid>(m, "Grid")
      .def(py::init<int>(), py::arg("num_points"))
      .def_property_readonly("size", &Grid::size)
      .def_property_readonly("nyquist", &Grid::nyquist)
      .def("nodes", [](const Grid& g) { return to_array(g.nodes()); })
      .def("__eq__", [](const Grid& a, const Grid& b) { return a == b; })
      .def("__repr__", [](const Grid& g) { return "Grid(" + std::to_string(g.size()) + ")"; });

  py::class_<SpectralField>(m, "SpectralField")
      .def_static(
          "from_samples",
          [](const Grid& g, py::array_t<double, py::array::c_style | py::array::forcecast> values) {
            return SpectralField::from_samples(g, std::span<const double>(values.data(), values.size()));
          },
          py::arg("grid"), py::arg("values"))
      .def_static("from_function", &SpectralField::from_function, py::arg("grid"), py::arg("f"))
      .def_static("constant", &SpectralField::constant, py::arg("grid"), py::arg("value"))
      .def_property_readonly("grid", &SpectralField::grid)
      .def_property_readonly("values", [](const SpectralField& f) { return to_array(f.values()); })
      .def_property_readonly("half_spectrum", [](const SpectralField& f) { return to_array(f.half_spectrum()); })
      .def("coeff", &SpectralField::coeff, py::arg("k"))
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(-py::self)
      .def(double() * py::self)
      .def(py::self * double());

  m.def("sobolev_norm", [](const SpectralField& f, double r) { return sobolev_norm(f, idx(r)); },
        py::arg("field"), py::arg("r"));
  m.def("apply_lambda", [](const SpectralField& f, double r) { return apply_lambda(f, idx(r)); },
        py::arg("field"), py::arg("r"));
  m.def("sup_norm", &sup_norm);
  m.def("mean", &mean);
  m.def("derivative", &derivative);

  py::class_<SequenceParams>(m, "SequenceParams")
      .def(py::init<int, double>(), py::arg("n"), py::arg("s"))
      .def_property_readonly("n", &SequenceParams::n)
      .def_property_readonly("s", &SequenceParams::s);
  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("name", &BoundReport::name)
      .def_readonly("theoretical", &BoundReport::theoretical)
      .def_readonly("measured", &BoundReport::measured)
      .def_readonly("satisfied", &BoundReport::satisfied);

  m.def("sample_U", &sample_U, py::arg("params"), py::arg("grid"));
  m.def("sample_V", &sample_V, py::arg("params"), py::arg("t"), py::arg("grid"));
  m.def("residual_U_closed", &residual_U_closed, py::arg("params"), py::arg("grid"));
  m.def("residual_V_closed", &residual_V_closed, py::arg("params"), py::arg("t"), py::arg("grid"));
  m.def("initial_gap", &initial_gap, py::arg("params"));
  m.def("gap_lower_bound", &gap_lower_bound, py::arg("params"), py::arg("t"));

  py::class_<MonitorRecord>(m, "MonitorRecord")
      .def_readonly("t", &MonitorRecord::t)
      .def_readonly("dt", &MonitorRecord::dt)
      .def_readonly("min_u", &MonitorRecord::min_u)
      .def_readonly("max_u", &MonitorRecord::max_u)
      .def_readonly("sup_ux", &MonitorRecord::sup_ux)
      .def_readonly("mean_u", &MonitorRecord::mean_u)
      .def_readonly("energy", &MonitorRecord::energy)
      .def_readonly("odd_part", &MonitorRecord::odd_part);
  py::class_<Trajectory>(m, "Trajectory")
      .def_property_readonly("times",
                             [](const Trajectory& t) {
                               std::vector<double> ts;
                               for (const auto& s : t.snapshots) ts.push_back(s.t);
                               return ts;
                             })
      .def("at", &Trajectory::at, py::arg("t"), py::return_value_policy::copy)
      .def_property_readonly("monitors", [](const Trajectory& t) { return t.monitors.records; });

  m.def("pme_rhs", &pme_rhs, py::arg("u"), py::arg("dealias") = true);
  m.def(
      "pme_evolve",
      [](const SpectralField& u0, double t_end, std::vector<double> sample_times, double dt_safety, bool dealias) {
        SolverConfig cfg;
        cfg.t_end = t_end;
        cfg.sample_times = std::move(sample_times);
        cfg.dt_safety = dt_safety;
        cfg.dealias = dealias;
        py::gil_scoped_release release;
        return pme_evolve(u0, cfg);
      },
      py::arg("u0"), py::arg("t_end"), py::arg("sample_times") = std::vector<double>{},
      py::arg("dt_safety") = 0.5, py::arg("dealias") = true);
  m.def("heat_evolve", &heat_evolve, py::arg("u0"), py::arg("t"));

  py::class_<RatioSample>(m, "RatioSample")
      .def_readonly("inputs", &RatioSample::inputs)
      .def_readonly("lhs", &RatioSample::lhs)
      .def_readonly("rhs", &RatioSample::rhs)
      .def_readonly("ratio", &RatioSample::ratio);
  py::class_<PowerLawFit>(m, "PowerLawFit")
      .def_readonly("slope", &PowerLawFit::slope)
      .def_readonly("intercept", &PowerLawFit::intercept)
      .def_readonly("residual", &PowerLawFit::residual);
  m.def("commutator_ratio",
        [](const SpectralField& f, const SpectralField& g, double r) { return commutator_ratio(f, g, idx(r)); },
        py::arg("f"), py::arg("g"), py::arg("r"));
  m.def("interpolation_ratio",
        [](const SpectralField& u, double s, double r) { return interpolation_ratio(u, idx(s), idx(r)); },
        py::arg("u"), py::arg("s"), py::arg("r"));
  m.def("fit_power_law", &fit_power_law, py::arg("points"));
  m.def("random_trig_polynomial", &random_trig_polynomial, py::arg("grid"), py::arg("max_mode"),
        py::arg("seed"), py::arg("index"));

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_property_readonly("kind", [](const ExperimentConfig& c) { return to_string(c.kind); })
      .def_readonly("n_list", &ExperimentConfig::n_list)
      .def_readonly("s", &ExperimentConfig::s)
      .def_readonly("T", &ExperimentConfig::T)
      .def_readonly("delta", &ExperimentConfig::delta)
      .def_readonly("output_dir", &ExperimentConfig::output_dir)
      .def_readonly("seed", &ExperimentConfig::seed);
  py::class_<ExperimentReport>(m, "ExperimentReport")
      .def_property_readonly("passed", &ExperimentReport::passed)
      .def_readonly("fits", &ExperimentReport::fits)
      .def_readonly("checks", &ExperimentReport::checks)
      .def_readonly("notes", &ExperimentReport::notes)
      .def_property_readonly("values",
                             [](const ExperimentReport& r) {
                               std::map<int, std::map<std::string, double>> out;
                               for (const auto& rec : r.records) out[rec.n] = rec.values;
                               return out;
                             })
      .def("to_json", &serialize_report)
      .def("summary_csv", &render_summary_csv)
      .def("emit_csv", &emit_csv, py::arg("directory"));

  m.def("parse_config_text", &parse_config_text, py::arg("yaml"),
        py::arg("overrides") = std::vector<std::string>{});
  m.def(
      "run_experiment",
      [](const ExperimentConfig& cfg) {
        py::gil_scoped_release release;
        return run_experiment(cfg);
      },
      py::arg("config"));
  m.def("load_report", &deserialize_report, py::arg("text"));
  m.def("run_self_checks", &run_self_checks, py::arg("seed") = 20240901);
}
