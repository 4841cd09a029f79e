#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "adjtime/adaptivity.hpp"
#include "adjtime/report.hpp"

namespace py = pybind11;
using namespace adjt;

namespace {

std::string steps_csv(const LevelReport& r) {
  std::ostringstream out;
  write_steps_csv(out, r);
  return out.str();
}

std::string summary_csv(const std::vector<LevelReport>& reports) {
  std::ostringstream out;
  write_summary_header(out);
  for (const auto& r : reports) write_summary_row(out, r);
  return out.str();
}

AnalysisOptions analysis(std::optional<int> reference_level, double dual_cfl, int base_cells) {
  AnalysisOptions o;
  o.reference_level = reference_level;
  o.dual_cfl = dual_cfl;
  o.base_cells = base_cells;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Adjoint error estimation and adaptive time stepping for 1D conservation laws";

  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::enum_<StepMode>(m, "StepMode")
      .value("explicit", StepMode::Explicit)
      .value("implicit", StepMode::Implicit);
  py::enum_<Strategy>(m, "Strategy")
      .value("uniform", Strategy::UniformExplicit)
      .value("implicit", Strategy::AdaptiveImplicit)
      .value("imex", Strategy::AdaptiveImplicitExplicit);
  py::enum_<ToleranceRule>(m, "ToleranceRule")
      .value("halve", ToleranceRule::Halve)
      .value("match_previous", ToleranceRule::MatchPrevious)
      .value("scaled_ref", ToleranceRule::ScaledReference);

  py::class_<Interval>(m, "Interval")
      .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
      .def_readonly("lo", &Interval::lo)
      .def_readonly("hi", &Interval::hi);

  py::class_<SpatialGrid>(m, "SpatialGrid")
      .def(py::init(&build_spatial_grid), py::arg("base_cells") = 20, py::arg("level") = 0,
           py::arg("domain") = Interval{})
      .def_property_readonly("level", &SpatialGrid::level)
      .def_property_readonly("cells", &SpatialGrid::cell_count)
      .def_property_readonly("h", &SpatialGrid::h)
      .def_property_readonly("edges", &SpatialGrid::edges);

  py::class_<TimePartition>(m, "TimePartition")
      .def(py::init(&partition_from_times), py::arg("times"), py::arg("mode") = StepMode::Explicit)
      .def("__len__", &TimePartition::size)
      .def_property_readonly("times", &TimePartition::times)
      .def_property_readonly("modes", &TimePartition::modes)
      .def_property_readonly("horizon", &TimePartition::horizon)
      .def("count", &TimePartition::count);

  py::class_<ShockPath>(m, "ShockPath")
      .def(py::init<>())
      .def_readwrite("first_amplitude", &ShockPath::first_amplitude)
      .def_readwrite("second_amplitude", &ShockPath::second_amplitude)
      .def("position", &ShockPath::position)
      .def("speed", &ShockPath::speed);

  py::class_<TestCase>(m, "TestCase")
      .def_readonly("name", &TestCase::name)
      .def_readonly("horizon", &TestCase::horizon)
      .def_readonly("inflow_max", &TestCase::inflow_max)
      .def("inflow", [](const TestCase& tc, double t) { return tc.inflow(t); });
  m.def("perturbed_shock", &perturbed_shock, py::arg("path") = ShockPath{});
  m.def("steady_shock", &steady_shock);
  m.def("uniform_cfl_partition", &uniform_cfl_partition, py::arg("grid"), py::arg("case"),
        py::arg("cfl") = 0.8, py::arg("mode") = StepMode::Explicit);

  py::class_<ErrorBreakdown>(m, "ErrorBreakdown")
      .def_readonly("eta_k_bar", &ErrorBreakdown::eta_k_bar)
      .def_readonly("eta_h_bar", &ErrorBreakdown::eta_h_bar)
      .def_readonly("eta_bar", &ErrorBreakdown::eta_bar)
      .def_readonly("eta_k", &ErrorBreakdown::eta_k)
      .def_readonly("eta_h", &ErrorBreakdown::eta_h)
      .def_readonly("functional", &ErrorBreakdown::functional)
      .def_readonly("eta_k_density", &ErrorBreakdown::eta_k_density)
      .def_readonly("eta_h_density", &ErrorBreakdown::eta_h_density);

  py::class_<LevelReport>(m, "LevelReport")
      .def_readonly("level", &LevelReport::level)
      .def_readonly("cells", &LevelReport::cells)
      .def_readonly("h", &LevelReport::h)
      .def_readonly("tol_k", &LevelReport::tol_k)
      .def_readonly("reference", &LevelReport::reference)
      .def_readonly("breakdown", &LevelReport::breakdown)
      .def_property_readonly("partition", [](const LevelReport& r) { return r.plan.partition; })
      .def_property_readonly("steps", [](const LevelReport& r) { return r.plan.partition.size(); })
      .def_property_readonly("explicit_steps",
                             [](const LevelReport& r) { return r.plan.partition.count(StepMode::Explicit); })
      .def_property_readonly("times", [](const LevelReport& r) { return r.series.time; })
      .def_property_readonly("cfl", [](const LevelReport& r) { return r.series.cfl; })
      .def_property_readonly("theta", [](const LevelReport& r) -> std::optional<double> {
        if (r.efficiency && r.efficiency->defined) return r.efficiency->value;
        return std::nullopt;
      })
      .def("steps_csv", &steps_csv);

  m.def(
      "analyze_run",
      [](const SpatialGrid& grid, const TimePartition& partition, const TestCase& tc,
         std::optional<int> reference_level, double dual_cfl) {
        return analyze_run(grid, partition, tc, analysis(reference_level, dual_cfl, grid.base_cells()));
      },
      py::arg("grid"), py::arg("partition"), py::arg("case"), py::arg("reference_level") = 6,
      py::arg("dual_cfl") = 0.8);

  m.def(
      "adaptive_loop",
      [](const TestCase& tc, const std::vector<std::pair<int, Strategy>>& schedule, ToleranceRule rule,
         double factor, std::optional<double> tol_total, double cfl_switch,
         std::optional<int> reference_level, int base_cells) {
        LoopConfig cfg;
        cfg.rule = rule;
        cfg.factor = factor;
        cfg.adapt.tol_total = tol_total;
        cfg.adapt.cfl_switch = cfl_switch;
        cfg.analysis = analysis(reference_level, 0.8, base_cells);
        std::vector<LevelSpec> levels;
        for (const auto& [level, strategy] : schedule) levels.push_back({level, strategy});
        return adaptive_loop(cfg, levels, tc);
      },
      py::arg("case"), py::arg("schedule"), py::arg("rule") = ToleranceRule::MatchPrevious,
      py::arg("factor") = 1.0, py::arg("tol_total") = std::nullopt, py::arg("cfl_switch") = 5.0,
      py::arg("reference_level") = 6, py::arg("base_cells") = 20);

  m.def("reference_functional", &reference_functional, py::arg("case"), py::arg("level") = 6,
        py::arg("base_cells") = 20, py::arg("cfl") = 0.8);
  m.def("summary_csv", &summary_csv, py::arg("reports"));
}
