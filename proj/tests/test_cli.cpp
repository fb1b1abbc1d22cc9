// Configuration, report and sweep layers, plus the command-line contract.

#include <cmath>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "fmdn/analysis.hpp"
#include "fmdn/config_io.hpp"
#include "fmdn/errors.hpp"
#include "fmdn/report.hpp"
#include "fmdn/sweep.hpp"
#include "support.hpp"

using namespace fmdn;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kCli = FMDN_CLI_PATH;
const std::string kSource = FMDN_SOURCE_DIR;

json reference_doc() { return json::parse(read_text_file(kSource + "/configs/reference.json")); }

std::string write_json(const fs::path& dir, const std::string& name, const json& j) {
  const auto path = (dir / name).string();
  write_text_file(path, j.dump(2));
  return path;
}

std::string cli(const std::string& args) { return kCli + " " + args; }

}  // namespace

TEST_CASE("shipped scenario parses to the reference fleet") {
  const Scenario s = parse_scenario(reference_doc());
  const Scenario ref{reference_fleet(), {}, {}};
  CHECK(s.fleet.size() == 5);
  CHECK(scenario_hash(s) == scenario_hash(ref));
}

TEST_CASE("scenario round trip and hash") {
  Scenario s = parse_scenario(reference_doc());
  const Scenario back = parse_scenario(to_json(s));
  CHECK(to_json(back) == to_json(s));
  CHECK(scenario_hash(back) == scenario_hash(s));
  CHECK(scenario_hash(s).size() == 16);
  // Simulation settings do not change the model hash; model inputs do.
  Scenario t = s;
  t.sim.slots = 1234;
  t.sim.seed = 99;
  CHECK(scenario_hash(t) == scenario_hash(s));
  t.fleet.uavs[0].altitude_m = 21.0;
  CHECK(scenario_hash(t) != scenario_hash(s));
}

TEST_CASE("strict parsing itemizes every problem") {
  json j = reference_doc();
  j["colour"] = "blue";
  j["mac"]["contention_window"] = "eight";
  j["uavs"][1]["altitud"] = 20.0;
  try {
    parse_scenario(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("colour: unknown key") != std::string::npos);
    CHECK(msg.find("mac.contention_window: expected an integer") != std::string::npos);
    CHECK(msg.find("uavs[1].altitud: unknown key") != std::string::npos);
  }
  j = reference_doc();
  j["schema_version"] = 2;
  CHECK_THROWS_AS(parse_scenario(j), ConfigError);
  j = reference_doc();
  j["simulation"]["arrival_mode"] = "sometimes";
  CHECK_THROWS_AS(parse_scenario(j), ConfigError);
  j = reference_doc();
  j["overrides"] = {{"coverage", {1.0, 2.0}}};
  CHECK_THROWS_AS(parse_scenario(j), ConfigError);
}

TEST_CASE("invariant violations name the field") {
  json j = reference_doc();
  j["traffic"]["per_uav"][2]["up_air"] = 0.8;
  try {
    parse_scenario(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "traffic.per_uav[2].up_air");
  }
}

TEST_CASE("sweep specifications") {
  json j = {{"schema_version", 1}, {"parameter", "θ"}, {"grid", {0.5, 1.0, 1.5}}};
  SweepSpec s = parse_sweep(j);
  CHECK(s.parameter == "theta");
  CHECK(s.grid.size() == 3);
  j["grid"] = {{"from", 0.05}, {"to", 0.7}, {"step", 0.05}};
  s = parse_sweep(j);
  REQUIRE(s.grid.size() == 14);
  CHECK(format_number(s.grid[2]) == "0.15");
  CHECK(s.grid.back() == doctest::Approx(0.7));
  j["grid"] = {0.5, 0.5};
  CHECK_THROWS_AS(parse_sweep(j), ConfigError);
  j["grid"] = json::array();
  CHECK_THROWS_AS(parse_sweep(j), ConfigError);
  j["grid"] = {3.0, 2.0, 1.0};  // decreasing is monotone too
  CHECK_NOTHROW(parse_sweep(j));
  j["parameter"] = "gamma";
  CHECK_THROWS_AS(parse_sweep(j), ConfigError);
  for (const char* name : {"f_U^A", "f_D^A", "f_D^G", "h", "θ", "λ", "ω", "r", "V", "d_tx", "P_t", "K", "W"})
    CHECK_NOTHROW(canonical_parameter(name));
}

TEST_CASE("parameters land on the right fields") {
  Scenario s{reference_fleet(), {}, {}};
  apply_parameter(s, "f_U^A", 0.3);
  CHECK(s.fleet.traffic.per_uav[0].up_air == 0.3);
  CHECK(s.fleet.traffic.per_uav[4].up_air == 0.0);  // the gateway keeps its profile
  apply_parameter(s, "r", 4.0);
  CHECK(s.fleet.uavs[2].rotation_radius() == doctest::Approx(4.0));
  apply_parameter(s, "K", 5);
  CHECK(s.fleet.mac.max_attempts == 5);
  CHECK_THROWS_AS(apply_parameter(s, "W", 7.5), ConfigError);
}

TEST_CASE("sweep CSV format") {
  const Scenario base{reference_fleet(), {}, {}};
  SweepSpec spec{"f_U^A", {0.3, 0.4, 0.8}, {"load_up", "theta_up"}};
  const SweepResult r = run_sweep(base, spec, 1);
  const std::string csv = to_csv(r);
  CHECK(csv.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(csv.back() == '\n');
  // 2 points x (5 loads + 4 streams) + one status row for the invalid point.
  CHECK(r.rows.size() == 2 * 9 + 1);
  CHECK(csv.find("f_U^A,0.8,status,error:config,nan,,\n") != std::string::npos);
  CHECK(csv.find("f_U^A,0.3,uav1,load_up,") != std::string::npos);
  // Parallel evaluation emits the same bytes.
  CHECK(to_csv(run_sweep(base, spec, 3)) == csv);
  // Round trip.
  CHECK(to_csv(parse_csv(csv)) == csv);
  CHECK_THROWS_AS(parse_csv("a,b\n"), ConfigError);
}

TEST_CASE("numbers use 12 significant digits") {
  CHECK(format_number(0.1 + 0.2) == "0.3");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(1e-7) == "1e-07");
  CHECK(format_number(INFINITY) == "inf");
  CHECK(format_number(NAN) == "nan");
}

TEST_CASE("reports embed the scenario and read back") {
  const Scenario s = parse_scenario(reference_doc());
  const Analysis a = analyze(s.fleet);
  const json rep = analysis_report(s, a);
  CHECK(rep["uavs"].size() == 5);
  CHECK(rep["streams"].size() == 4);
  const CachedReport back = read_report(rep);
  CHECK(back.kind == "analysis");
  CHECK(back.config_hash == scenario_hash(s));
  CHECK(scenario_hash(back.scenario) == scenario_hash(s));
}

TEST_CASE("analysis plots are optional SVG files") {
  const auto dir = test::scratch_dir("plots");
  const Scenario base{reference_fleet(), {}, {}};
  const SweepResult r = run_sweep(base, {"h", {10, 20, 30}, {"load_up"}}, 1);
  const auto files = write_plots(r, (dir / "h").string());
  REQUIRE(files.size() == 1);
  const std::string svg = read_text_file(files[0]);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("polyline") != std::string::npos);
}

// ---- command-line contract ----

TEST_CASE("cli: analyze the shipped scenario") {
  const auto r = test::run_command(cli("analyze --config " + kSource + "/configs/reference.json"));
  REQUIRE(r.status == 0);
  const json rep = json::parse(r.output);
  CHECK(rep["kind"] == "analysis");
  CHECK(rep["uavs"].size() == 5);
}

TEST_CASE("cli: no devices gives an all-zero report") {
  const auto dir = test::scratch_dir("zero");
  json j = reference_doc();
  j["device_density"] = 0.0;
  const auto r = test::run_command(cli("analyze --config " + write_json(dir, "zero.json", j)));
  REQUIRE(r.status == 0);
  const json rep = json::parse(r.output);
  for (const auto& u : rep["uavs"]) {
    CHECK(u["load_up"] == 0.0);
    CHECK(u["load_down_air"] == 0.0);
    CHECK(u["load_down_ground"] == 0.0);
  }
  for (const auto& s : rep["streams"]) {
    CHECK(s["theta_up"] == 0.0);
    CHECK(s["theta_down"] == 0.0);
  }
}

TEST_CASE("cli: exit statuses") {
  const auto dir = test::scratch_dir("exit");
  json bad = reference_doc();
  bad["traffic"]["per_uav"][0]["up_air"] = 0.9;
  auto r = test::run_command(cli("analyze --config " + write_json(dir, "bad.json", bad)), true);
  CHECK(r.status == 3);
  CHECK(r.output.find("up_air + down_air must not exceed 1") != std::string::npos);
  CHECK(r.output.find("traffic.per_uav[0].up_air") != std::string::npos);

  json unknown = reference_doc();
  unknown["mac"]["cw"] = 8;
  unknown["extra"] = 1;
  r = test::run_command(cli("analyze --config " + write_json(dir, "unknown.json", unknown)), true);
  CHECK(r.status == 3);
  CHECK(r.output.find("mac.cw: unknown key") != std::string::npos);
  CHECK(r.output.find("extra: unknown key") != std::string::npos);

  json far = reference_doc();
  far["uavs"][4]["velocity"] = 400.0;
  r = test::run_command(cli("analyze --config " + write_json(dir, "far.json", far)), true);
  CHECK(r.status == 4);
  CHECK(r.output.find("numerical error") != std::string::npos);

  r = test::run_command(cli("analyze --config " + (dir / "missing.json").string()), true);
  CHECK(r.status == 5);
  r = test::run_command(cli("analyze --bogus"), true);
  CHECK(r.status == 2);
  r = test::run_command(cli(""), true);
  CHECK(r.status == 2);
  write_text_file((dir / "broken.json").string(), "{ not json");
  r = test::run_command(cli("analyze --config " + (dir / "broken.json").string()), true);
  CHECK(r.status == 3);
  r = test::run_command(cli("analyze --out " + (dir / "no/such/dir/out.json").string()), true);
  CHECK(r.status == 5);
}

TEST_CASE("cli: simulate is deterministic and fills standard errors") {
  const auto a = test::run_command(cli("simulate --slots 1000 --seed 7"));
  const auto b = test::run_command(cli("simulate --slots 1000 --seed 7"));
  REQUIRE(a.status == 0);
  CHECK(a.output == b.output);
  const auto c = test::run_command(cli("simulate --slots 20000 --seed 7 --reps 10"));
  REQUIRE(c.status == 0);
  const json rep = json::parse(c.output);
  CHECK(rep["conserved"] == true);
  for (const auto& e : rep["load_up"]) CHECK(e["stderr"].get<double>() > 0.0);
}

TEST_CASE("cli: single-point sweep equals analyze") {
  const auto dir = test::scratch_dir("single");
  const json sw = {{"schema_version", 1}, {"parameter", "h"}, {"grid", {20.0}}};
  const std::string cfg = kSource + "/configs/reference.json";
  const auto r = test::run_command(cli("sweep --config " + cfg + " --sweep " + write_json(dir, "one.json", sw)));
  REQUIRE(r.status == 0);
  const json rep = json::parse(test::run_command(cli("analyze --config " + cfg)).output);
  const SweepResult res = parse_csv(r.output);
  int checked = 0;
  for (const auto& row : res.rows) {
    const int k = std::stoi(row.entity.substr(3)) - 1;
    double expected = NAN;
    if (row.metric.rfind("load_", 0) == 0) expected = rep["uavs"][k][row.metric].get<double>();
    else expected = rep["streams"][k][row.metric].get<double>();
    CHECK(row.analytic == std::stod(format_number(expected)));
    ++checked;
  }
  CHECK(checked == 5 + 4 + 4 + 4 * 4);
}

TEST_CASE("cli: sweep writes plots on request") {
  const auto dir = test::scratch_dir("sweep_plot");
  const json sw = {{"schema_version", 1}, {"parameter", "omega"}, {"grid", {2.0, 4.0, 8.0}},
                   {"metrics", {"load_up"}}};
  const auto out = (dir / "omega.csv").string();
  const auto r = test::run_command(
      cli("sweep --sweep " + write_json(dir, "w.json", sw) + " --out " + out + " --plot --workers 2"));
  REQUIRE(r.status == 0);
  CHECK(fs::exists(out));
  CHECK(fs::exists(dir / "omega_load_up.svg"));
}

TEST_CASE("cli: compare live and from cached reports") {
  const auto dir = test::scratch_dir("compare");
  const std::string cfg = kSource + "/configs/reference.json";
  const auto a_path = (dir / "a.json").string(), s_path = (dir / "s.json").string();
  REQUIRE(test::run_command(cli("analyze --config " + cfg + " --out " + a_path)).status == 0);
  REQUIRE(test::run_command(cli("simulate --config " + cfg + " --slots 20000 --out " + s_path)).status == 0);
  const auto r = test::run_command(cli("compare --analytic-report " + a_path + " --sim-report " + s_path));
  CHECK((r.status == 0 || r.status == 6));
  const json rep = json::parse(r.output);
  CHECK(rep["kind"] == "comparison");
  CHECK(rep["rows"].size() > 10);

  json other = reference_doc();
  other["uavs"][0]["altitude"] = 25.0;
  const auto o_path = (dir / "o.json").string();
  REQUIRE(test::run_command(cli("simulate --config " + write_json(dir, "other.json", other) +
                                " --slots 2000 --out " + o_path)).status == 0);
  const auto mismatch =
      test::run_command(cli("compare --analytic-report " + a_path + " --sim-report " + o_path), true);
  CHECK(mismatch.status == 2);
  CHECK(mismatch.output.find("different configs") != std::string::npos);

  const auto lonely = test::run_command(cli("compare --analytic-report " + a_path), true);
  CHECK(lonely.status == 2);
}

TEST_CASE("cli: a failing comparison exits with its own status") {
  const auto dir = test::scratch_dir("compare_fail");
  const auto a_path = (dir / "a.json").string(), s_path = (dir / "s.json").string();
  REQUIRE(test::run_command(cli("analyze --out " + a_path)).status == 0);
  REQUIRE(test::run_command(cli("simulate --slots 20000 --out " + s_path)).status == 0);
  json sim = json::parse(read_text_file(s_path));
  sim["load_up"][2]["mean"] = sim["load_up"][2]["mean"].get<double>() + 0.5;
  write_text_file(s_path, sim.dump());
  const auto r = test::run_command(cli("compare --analytic-report " + a_path + " --sim-report " + s_path), true);
  CHECK(r.status == 6);
  CHECK(r.output.find("FAIL uav3 load_up") != std::string::npos);
}
