#include "fmdn/report.hpp"

#include <cmath>
#include <limits>

#include "fmdn/errors.hpp"

namespace fmdn {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double from_num(const json& j, double missing = kNaN) {
  return j.is_number() ? j.get<double>() : missing;
}

json estimates(const std::vector<Estimate>& es) {
  json a = json::array();
  for (const auto& e : es) a.push_back({{"mean", num(e.mean)}, {"stderr", num(e.stderr_)}});
  return a;
}

std::vector<Estimate> read_estimates(const json& a) {
  std::vector<Estimate> out;
  for (const auto& e : a) out.push_back({from_num(e.at("mean")), from_num(e.at("stderr"), 0.0)});
  return out;
}

json ledger(const Ledger& l) {
  return {{"generated", l.generated},
          {"delivered", l.delivered},
          {"dropped_retry", l.dropped_retry},
          {"dropped_backhaul", l.dropped_backhaul},
          {"residual", l.residual},
          {"balanced", l.balanced()}};
}

Ledger read_ledger(const json& j) {
  Ledger l;
  l.generated = j.at("generated").get<std::int64_t>();
  l.delivered = j.at("delivered").get<std::int64_t>();
  l.dropped_retry = j.at("dropped_retry").get<std::int64_t>();
  l.dropped_backhaul = j.at("dropped_backhaul").get<std::int64_t>();
  l.residual = j.at("residual").get<std::int64_t>();
  return l;
}

json header(const char* kind, const Scenario& s) {
  return {{"kind", kind}, {"config_hash", scenario_hash(s)}, {"config", to_json(s)}};
}

}  // namespace

json analysis_report(const Scenario& s, const Analysis& a) {
  json j = header("analysis", s);
  const auto& st = a.state;
  const auto& mt = a.metrics;
  const std::size_t m = a.fleet.size();
  const std::size_t g = a.fleet.gateway();
  const double slot_s = s.fleet.mac.slot_idle_s;
  j["solver"] = {{"iterations", st.iterations},
                 {"final_delta", st.final_delta},
                 {"max_residual", st.max_residual},
                 {"los_clamps", a.model.clamps.los},
                 {"coverage_clamps", a.model.clamps.coverage},
                 {"contenders_rounded", a.model.contenders_rounded}};
  j["slot_seconds"] = slot_s;
  j["uavs"] = json::array();
  for (std::size_t i = 0; i < m; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const auto& u = a.model.uavs[i];
    json e = {{"id", a.fleet.uavs[i].id},
              {"is_gateway", i == g},
              {"covered", u.covered},
              {"coverage", u.coverage},
              {"attempt_air", u.air.attempt},
              {"attempt_ground", u.ground.attempt},
              {"source_rate", u.source_rate},
              {"cycle_air", num(st.cycle_air(k))},
              {"cycle_ground", num(st.cycle_ground(k))},
              {"load_up", st.queue_load_up(k)},
              {"load_down_air", st.queue_load_down(k)},
              {"load_down_ground", st.queue_load_ground(k)},
              {"stable_up", static_cast<bool>(st.stable_up[i])},
              {"stable_down_air", static_cast<bool>(st.stable_down_air[i])},
              {"stable_down_ground", static_cast<bool>(st.stable_down_ground[i])},
              {"residual_air", num(mt.residual_air[i])},
              {"residual_ground", num(mt.residual_ground[i])}};
    j["uavs"].push_back(e);
  }
  j["streams"] = json::array();
  for (std::size_t s2 = 0; s2 < g; ++s2) {
    j["streams"].push_back({{"uav", a.fleet.uavs[s2].id},
                            {"theta_up", mt.theta_up[s2]},
                            {"theta_down", mt.theta_down[s2]},
                            {"delay_up", num(mt.delay_up[s2])},
                            {"delay_down", num(mt.delay_down[s2])},
                            {"delay_up_seconds", num(mt.delay_up[s2] * slot_s)},
                            {"delay_down_seconds", num(mt.delay_down[s2] * slot_s)}});
  }
  return j;
}

json simulation_report(const Scenario& s, const SimMeasurements& m) {
  json j = header("simulation", s);
  j["conserved"] = m.conserved;
  j["max_attempts_seen"] = m.max_attempts_seen;
  j["load_up"] = estimates(m.load_up);
  j["load_down_air"] = estimates(m.load_down_air);
  j["load_down_ground"] = estimates(m.load_down_ground);
  j["time_load_up"] = estimates(m.time_load_up);
  j["time_load_down_air"] = estimates(m.time_load_down_air);
  j["time_load_down_ground"] = estimates(m.time_load_down_ground);
  j["slope_up"] = estimates(m.slope_up);
  j["slope_down_air"] = estimates(m.slope_down_air);
  j["slope_down_ground"] = estimates(m.slope_down_ground);
  j["theta_up"] = estimates(m.theta_up);
  j["theta_down"] = estimates(m.theta_down);
  j["delay_up"] = estimates(m.delay_up);
  j["delay_down"] = estimates(m.delay_down);
  j["hop_up"] = estimates(m.hop_up);
  j["hop_down_air"] = estimates(m.hop_down_air);
  j["hop_down_ground"] = estimates(m.hop_down_ground);
  j["ledger_up"] = json::array();
  for (const auto& l : m.ledger_up) j["ledger_up"].push_back(ledger(l));
  j["ledger_down"] = json::array();
  for (const auto& l : m.ledger_down) j["ledger_down"].push_back(ledger(l));
  j["final_queue_up"] = json::array();
  for (std::size_t i = 0; i < m.load_up.size(); ++i) {
    std::int64_t worst = 0;
    for (const auto& r : m.runs) worst = std::max(worst, r.up[i].final_length);
    j["final_queue_up"].push_back(worst);
  }
  return j;
}

json comparison_report(const ComparisonReport& r, const std::string& config_hash) {
  json j = {{"kind", "comparison"}, {"config_hash", config_hash}, {"pass", r.pass()},
            {"failures", r.failures()}, {"rows", json::array()}};
  for (const auto& row : r.rows)
    j["rows"].push_back({{"entity", row.entity},
                         {"metric", row.metric},
                         {"analytic", num(row.analytic)},
                         {"sim", num(row.sim)},
                         {"sim_stderr", num(row.sim_stderr)},
                         {"error", num(row.error)},
                         {"tolerance", row.tolerance},
                         {"relative", row.relative},
                         {"checked", row.checked},
                         {"pass", row.pass}});
  return j;
}

CachedReport read_report(const json& doc) {
  CachedReport out;
  try {
    out.kind = doc.at("kind").get<std::string>();
    out.config_hash = doc.at("config_hash").get<std::string>();
    out.scenario = parse_scenario(doc.at("config"));
    if (out.kind == "simulation") {
      SimMeasurements& m = out.sim;
      m.config = out.scenario.sim;
      m.conserved = doc.at("conserved").get<bool>();
      m.max_attempts_seen = doc.at("max_attempts_seen").get<int>();
      m.load_up = read_estimates(doc.at("load_up"));
      m.load_down_air = read_estimates(doc.at("load_down_air"));
      m.load_down_ground = read_estimates(doc.at("load_down_ground"));
      m.time_load_up = read_estimates(doc.at("time_load_up"));
      m.time_load_down_air = read_estimates(doc.at("time_load_down_air"));
      m.time_load_down_ground = read_estimates(doc.at("time_load_down_ground"));
      m.slope_up = read_estimates(doc.at("slope_up"));
      m.slope_down_air = read_estimates(doc.at("slope_down_air"));
      m.slope_down_ground = read_estimates(doc.at("slope_down_ground"));
      m.theta_up = read_estimates(doc.at("theta_up"));
      m.theta_down = read_estimates(doc.at("theta_down"));
      m.delay_up = read_estimates(doc.at("delay_up"));
      m.delay_down = read_estimates(doc.at("delay_down"));
      m.hop_up = read_estimates(doc.at("hop_up"));
      m.hop_down_air = read_estimates(doc.at("hop_down_air"));
      m.hop_down_ground = read_estimates(doc.at("hop_down_ground"));
      for (const auto& l : doc.at("ledger_up")) m.ledger_up.push_back(read_ledger(l));
      for (const auto& l : doc.at("ledger_down")) m.ledger_down.push_back(read_ledger(l));
    } else if (out.kind != "analysis") {
      throw UsageError("unsupported report kind '" + out.kind + "'");
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed report: ") + e.what());
  }
  return out;
}

CachedReport load_report(const std::string& path) {
  const std::string text = read_text_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": not valid JSON (" + e.what() + ")");
  }
  return read_report(doc);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace fmdn
