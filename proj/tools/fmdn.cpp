// Command-line driver: analyze, simulate, sweep, compare.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fmdn/analysis.hpp"
#include "fmdn/config_io.hpp"
#include "fmdn/des_sim.hpp"
#include "fmdn/errors.hpp"
#include "fmdn/report.hpp"
#include "fmdn/sweep.hpp"

namespace {

enum Exit : int {
  kOk = 0,
  kUsage = 2,
  kConfig = 3,
  kNumerical = 4,
  kIo = 5,
  kComparisonFailed = 6,
  kInternal = 70,
};

struct Options {
  std::string config;
  std::string sweep;
  std::string out;
  std::string analytic_report;
  std::string sim_report;
  std::optional<std::int64_t> slots;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  int workers = 0;
  bool plot = false;
};

fmdn::Scenario load(const Options& o) {
  fmdn::Scenario s;
  if (o.config.empty()) {
    s.fleet = fmdn::reference_fleet();
  } else {
    s = fmdn::load_scenario(o.config);
  }
  auto& sim = s.sim;
  if (o.slots) {
    sim.slots = *o.slots;
    if (sim.warmup >= sim.slots) sim.warmup = sim.slots / 10;
  }
  if (o.seed) sim.seed = *o.seed;
  if (o.reps) sim.replications = *o.reps;
  if (o.workers > 0) sim.threads = o.workers;
  sim.fleet = s.fleet;
  sim.overrides = s.overrides;
  sim.validate();
  return s;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty() || o.out == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    fmdn::write_text_file(o.out, text);
  }
}

int cmd_analyze(const Options& o) {
  const fmdn::Scenario s = load(o);
  const fmdn::Analysis a = fmdn::analyze(s.fleet, s.overrides);
  emit(o, fmdn::dump(fmdn::analysis_report(s, a)));
  return kOk;
}

int cmd_simulate(const Options& o) {
  const fmdn::Scenario s = load(o);
  const fmdn::SimMeasurements m = fmdn::run(s.sim);
  emit(o, fmdn::dump(fmdn::simulation_report(s, m)));
  return kOk;
}

int cmd_sweep(const Options& o) {
  const fmdn::Scenario s = load(o);
  const fmdn::SweepSpec spec = fmdn::load_sweep(o.sweep);
  const fmdn::SweepResult r = fmdn::run_sweep(s, spec, o.workers);
  emit(o, fmdn::to_csv(r));
  if (o.plot || spec.plot) {
    std::string stem = o.out.empty() || o.out == "-" ? "sweep" : o.out;
    if (stem.size() > 4 && stem.ends_with(".csv")) stem.resize(stem.size() - 4);
    for (const auto& path : fmdn::write_plots(r, stem)) std::cerr << "wrote " << path << "\n";
  }
  return kOk;
}

int cmd_compare(const Options& o) {
  fmdn::Analysis analytic;
  fmdn::SimMeasurements sim;
  std::string analytic_hash, sim_hash;
  if (!o.analytic_report.empty() || !o.sim_report.empty()) {
    if (o.analytic_report.empty() || o.sim_report.empty())
      throw fmdn::UsageError("--analytic-report and --sim-report must be given together");
    const auto ar = fmdn::load_report(o.analytic_report);
    const auto sr = fmdn::load_report(o.sim_report);
    if (ar.kind != "analysis") throw fmdn::UsageError(o.analytic_report + " is not an analysis report");
    if (sr.kind != "simulation") throw fmdn::UsageError(o.sim_report + " is not a simulation report");
    analytic_hash = ar.config_hash;
    sim_hash = sr.config_hash;
    analytic = fmdn::analyze(ar.scenario.fleet, ar.scenario.overrides);
    sim = sr.sim;
  } else {
    const fmdn::Scenario s = load(o);
    analytic = fmdn::analyze(s.fleet, s.overrides);
    sim = fmdn::run(s.sim);
    analytic_hash = sim_hash = fmdn::scenario_hash(s);
  }
  const fmdn::ComparisonReport rep = fmdn::compare(analytic, sim, analytic_hash, sim_hash);
  emit(o, fmdn::dump(fmdn::comparison_report(rep, analytic_hash)));
  for (const auto& row : rep.rows)
    if (row.checked && !row.pass)
      std::cerr << "FAIL " << row.entity << " " << row.metric << ": analytic "
                << fmdn::format_number(row.analytic) << " sim " << fmdn::format_number(row.sim)
                << " error " << fmdn::format_number(row.error) << " > "
                << fmdn::format_number(row.tolerance) << "\n";
  return rep.pass() ? kOk : kComparisonFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytic performance model and slot simulator for flying mesh drone networks"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Scenario file (JSON); built-in defaults when omitted");
    sub->add_option("--out", o.out, "Output file ('-' or omitted: standard output)");
  };
  auto sim_flags = [&](CLI::App* sub) {
    sub->add_option("--slots", o.slots, "Simulated slots per replication")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "Base random seed");
    sub->add_option("--reps", o.reps, "Replications")->check(CLI::PositiveNumber);
    sub->add_option("--workers", o.workers, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  };

  auto* analyze = app.add_subcommand("analyze", "Solve the analytic model and print a JSON report");
  common(analyze);
  auto* simulate = app.add_subcommand("simulate", "Run the slot simulator and print a JSON report");
  common(simulate);
  sim_flags(simulate);
  auto* sweep = app.add_subcommand("sweep", "Evaluate a parameter grid and print a CSV table");
  common(sweep);
  sim_flags(sweep);
  sweep->add_option("--sweep", o.sweep, "Sweep specification (JSON)")->required();
  sweep->add_flag("--plot", o.plot, "Also write one SVG chart per metric");
  auto* compare = app.add_subcommand("compare", "Compare the analytic model with the simulator");
  common(compare);
  sim_flags(compare);
  compare->add_option("--analytic-report", o.analytic_report, "Cached analysis report");
  compare->add_option("--sim-report", o.sim_report, "Cached simulation report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*analyze) return cmd_analyze(o);
    if (*simulate) return cmd_simulate(o);
    if (*sweep) return cmd_sweep(o);
    return cmd_compare(o);
  } catch (const fmdn::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const fmdn::ConfigError& e) {
    std::cerr << "config error:\n" << e.what() << "\n";
    return kConfig;
  } catch (const fmdn::DomainError& e) {
    std::cerr << "config error:\n" << e.what() << "\n";
    return kConfig;
  } catch (const fmdn::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    for (const auto& d : e.diagnostics()) std::cerr << "  " << d << "\n";
    return kNumerical;
  } catch (const fmdn::InstabilityError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const fmdn::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
