// Python bindings. Scenarios, sweep specs and reports cross the boundary as
// JSON text; the pure-Python wrapper converts to and from dicts.

#include <optional>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fmdn/analysis.hpp"
#include "fmdn/config_io.hpp"
#include "fmdn/des_sim.hpp"
#include "fmdn/errors.hpp"
#include "fmdn/report.hpp"
#include "fmdn/sweep.hpp"

namespace py = pybind11;

namespace {

nlohmann::json parse_text(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw fmdn::ConfigError("", what + " is not valid JSON: " + e.what());
  }
}

fmdn::Scenario scenario(const std::optional<std::string>& config, std::optional<std::int64_t> slots,
                        std::optional<std::uint64_t> seed, std::optional<int> reps, int workers) {
  fmdn::Scenario s;
  if (config) {
    s = fmdn::parse_scenario(parse_text(*config, "config"));
  } else {
    s.fleet = fmdn::reference_fleet();
  }
  auto& sim = s.sim;
  if (slots) {
    sim.slots = *slots;
    if (sim.warmup >= sim.slots) sim.warmup = sim.slots / 10;
  }
  if (seed) sim.seed = *seed;
  if (reps) sim.replications = *reps;
  if (workers > 0) sim.threads = workers;
  sim.fleet = s.fleet;
  sim.overrides = s.overrides;
  sim.validate();
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Analytic model and slot simulator for flying mesh drone networks";

  auto base = py::register_exception<fmdn::Error>(m, "FmdnError", PyExc_RuntimeError);
  py::register_exception<fmdn::ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<fmdn::DomainError>(m, "DomainError", base.ptr());
  py::register_exception<fmdn::NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<fmdn::InstabilityError>(m, "InstabilityError", base.ptr());
  py::register_exception<fmdn::UsageError>(m, "UsageError", base.ptr());
  py::register_exception<fmdn::IoError>(m, "IoError", base.ptr());

  m.def("reference_config", [] {
    fmdn::Scenario s;
    s.fleet = fmdn::reference_fleet();
    s.sim.fleet = s.fleet;
    return fmdn::to_json(s).dump();
  });

  m.def(
      "scenario_hash",
      [](const std::optional<std::string>& config) {
        return fmdn::scenario_hash(scenario(config, {}, {}, {}, 0));
      },
      py::arg("config") = py::none());

  m.def(
      "analyze",
      [](const std::optional<std::string>& config) {
        const fmdn::Scenario s = scenario(config, {}, {}, {}, 0);
        py::gil_scoped_release release;
        return fmdn::analysis_report(s, fmdn::analyze(s.fleet, s.overrides)).dump();
      },
      py::arg("config") = py::none());

  m.def(
      "simulate",
      [](const std::optional<std::string>& config, std::optional<std::int64_t> slots,
         std::optional<std::uint64_t> seed, std::optional<int> reps, int workers) {
        const fmdn::Scenario s = scenario(config, slots, seed, reps, workers);
        py::gil_scoped_release release;
        return fmdn::simulation_report(s, fmdn::run(s.sim)).dump();
      },
      py::arg("config") = py::none(), py::arg("slots") = py::none(), py::arg("seed") = py::none(),
      py::arg("reps") = py::none(), py::arg("workers") = 0);

  m.def(
      "sweep",
      [](const std::string& spec, const std::optional<std::string>& config, std::optional<std::int64_t> slots,
         std::optional<std::uint64_t> seed, std::optional<int> reps, int workers) {
        const fmdn::Scenario s = scenario(config, slots, seed, reps, workers);
        const fmdn::SweepSpec sw = fmdn::parse_sweep(parse_text(spec, "sweep"));
        py::gil_scoped_release release;
        return fmdn::to_csv(fmdn::run_sweep(s, sw, workers));
      },
      py::arg("spec"), py::arg("config") = py::none(), py::arg("slots") = py::none(),
      py::arg("seed") = py::none(), py::arg("reps") = py::none(), py::arg("workers") = 0);

  m.def(
      "compare",
      [](const std::optional<std::string>& config, std::optional<std::int64_t> slots,
         std::optional<std::uint64_t> seed, std::optional<int> reps, int workers) {
        const fmdn::Scenario s = scenario(config, slots, seed, reps, workers);
        const std::string hash = fmdn::scenario_hash(s);
        py::gil_scoped_release release;
        const fmdn::ComparisonReport rep =
            fmdn::compare(fmdn::analyze(s.fleet, s.overrides), fmdn::run(s.sim), hash, hash);
        return fmdn::comparison_report(rep, hash).dump();
      },
      py::arg("config") = py::none(), py::arg("slots") = py::none(), py::arg("seed") = py::none(),
      py::arg("reps") = py::none(), py::arg("workers") = 0);

  m.def(
      "compare_reports",
      [](const std::string& analysis, const std::string& simulation) {
        const auto ar = fmdn::read_report(parse_text(analysis, "analysis report"));
        const auto sr = fmdn::read_report(parse_text(simulation, "simulation report"));
        if (ar.kind != "analysis") throw fmdn::UsageError("first report is not an analysis report");
        if (sr.kind != "simulation") throw fmdn::UsageError("second report is not a simulation report");
        const fmdn::ComparisonReport rep = fmdn::compare(fmdn::analyze(ar.scenario.fleet, ar.scenario.overrides),
                                                         sr.sim, ar.config_hash, sr.config_hash);
        return fmdn::comparison_report(rep, ar.config_hash).dump();
      },
      py::arg("analysis"), py::arg("simulation"));
}
