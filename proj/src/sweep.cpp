#include "fmdn/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "fmdn/analysis.hpp"
#include "fmdn/des_sim.hpp"
#include "fmdn/errors.hpp"

namespace fmdn {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::map<std::string, std::string>& aliases() {
  static const std::map<std::string, std::string> m = {
      {"f_U^A", "f_U^A"},   {"fu", "f_U^A"},        {"up_air", "f_U^A"},
      {"f_D^A", "f_D^A"},   {"fd", "f_D^A"},        {"down_air", "f_D^A"},
      {"f_D^G", "f_D^G"},   {"fg", "f_D^G"},        {"down_ground", "f_D^G"},
      {"h", "h"},           {"altitude", "h"},
      {"theta", "theta"},   {"θ", "theta"},         {"aperture", "theta"},
      {"lambda", "lambda"}, {"λ", "lambda"},        {"device_density", "lambda"},
      {"omega", "omega"},   {"ω", "omega"},         {"angular_velocity", "omega"},
      {"r", "r"},           {"radius", "r"},
      {"V", "V"},           {"velocity", "V"},
      {"d_tx", "d_tx"},     {"tx_range", "d_tx"},
      {"P_t", "P_t"},       {"tx_power_dbm", "P_t"},
      {"K", "K"},           {"max_attempts", "K"},
      {"W", "W"},           {"contention_window", "W"},
  };
  return m;
}

int integral(const std::string& parameter, double value) {
  if (value != std::round(value) || std::abs(value) > 1e9)
    throw ConfigError(parameter, "grid values must be integers");
  return static_cast<int>(value);
}

/// Rounds to 12 significant digits so that generated grids print cleanly.
double tidy(double x) { return std::stod(format_number(x)); }

std::vector<std::string> entities(const std::string& metric, const FleetConfig& f) {
  std::vector<std::string> out;
  const std::size_t m = f.size();
  const std::size_t g = f.gateway();
  std::size_t from = 0, to = g;  // streams by default
  if (metric == "load_up") to = m;
  if (metric == "load_down_air") from = 1, to = m;
  for (std::size_t i = from; i < to; ++i) out.push_back("uav" + std::to_string(f.uavs[i].id));
  return out;
}

double analytic_value(const std::string& metric, std::size_t k, const Analysis& a) {
  const auto K = static_cast<Eigen::Index>(k);
  if (metric == "load_up") return a.state.queue_load_up(K);
  if (metric == "load_down_air") return a.state.queue_load_down(K + 1);
  if (metric == "load_down_ground") return a.state.queue_load_ground(K);
  if (metric == "theta_up") return a.metrics.theta_up[k];
  if (metric == "theta_down") return a.metrics.theta_down[k];
  if (metric == "delay_up") return a.metrics.delay_up[k];
  return a.metrics.delay_down[k];
}

const Estimate& sim_value(const std::string& metric, std::size_t k, const SimMeasurements& s) {
  if (metric == "load_up") return s.load_up[k];
  if (metric == "load_down_air") return s.load_down_air[k + 1];
  if (metric == "load_down_ground") return s.load_down_ground[k];
  if (metric == "theta_up") return s.theta_up[k];
  if (metric == "theta_down") return s.theta_down[k];
  if (metric == "delay_up") return s.delay_up[k];
  return s.delay_down[k];
}

const char* error_kind(std::exception_ptr e) {
  try {
    std::rethrow_exception(e);
  } catch (const ConfigError&) {
    return "error:config";
  } catch (const NumericalError&) {
    return "error:numerical";
  } catch (const InstabilityError&) {
    return "error:instability";
  } catch (const DomainError&) {
    return "error:domain";
  } catch (...) {
    return "error:internal";
  }
}

std::vector<SweepRow> evaluate(const Scenario& base, const SweepSpec& spec,
                               const std::vector<std::string>& metrics, double value,
                               bool single_thread_sim) {
  std::vector<SweepRow> rows;
  try {
    Scenario s = base;
    apply_parameter(s, spec.parameter, value);
    s.fleet.validate();
    const Analysis a = analyze(s.fleet, s.overrides);
    SimMeasurements sim;
    if (spec.simulate) {
      SimConfig cfg = s.sim;
      cfg.fleet = s.fleet;
      cfg.overrides = s.overrides;
      if (single_thread_sim) cfg.threads = 1;
      sim = run(cfg);
    }
    for (const auto& metric : metrics) {
      const auto names = entities(metric, s.fleet);
      for (std::size_t k = 0; k < names.size(); ++k) {
        SweepRow row{spec.parameter, value, names[k], metric, analytic_value(metric, k, a)};
        if (spec.simulate) {
          const Estimate& e = sim_value(metric, k, sim);
          row.has_sim = true;
          row.sim = e.mean;
          row.sim_stderr = e.stderr_;
        }
        rows.push_back(std::move(row));
      }
    }
  } catch (...) {
    rows.assign(1, SweepRow{spec.parameter, value, "status", error_kind(std::current_exception()),
                            kNaN});
  }
  return rows;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_number(const std::string& s) {
  if (s == "nan" || s == "-nan") return kNaN;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double x = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument(s);
  return x;
}

std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

const std::vector<std::string>& sweep_metrics() {
  static const std::vector<std::string> m = {"load_up",  "load_down_air", "load_down_ground",
                                             "theta_up", "theta_down",    "delay_up",
                                             "delay_down"};
  return m;
}

std::string canonical_parameter(const std::string& name) {
  const auto it = aliases().find(name);
  if (it == aliases().end()) throw ConfigError("parameter", "unknown sweep parameter '" + name + "'");
  return it->second;
}

SweepSpec parse_sweep(const json& doc) {
  std::vector<std::string> errors;
  SweepSpec spec;
  if (!doc.is_object()) throw ConfigError("<root>", "expected an object");
  for (const auto& [key, v] : doc.items())
    if (key != "schema_version" && key != "parameter" && key != "grid" && key != "metrics" &&
        key != "plot" && key != "simulate")
      errors.push_back(key + ": unknown key");
  if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer() ||
      doc["schema_version"].get<long long>() != kSchemaVersion)
    errors.push_back("schema_version: expected " + std::to_string(kSchemaVersion));
  if (!doc.contains("parameter") || !doc["parameter"].is_string()) {
    errors.push_back("parameter: required string");
  } else {
    try {
      spec.parameter = canonical_parameter(doc["parameter"].get<std::string>());
    } catch (const ConfigError& e) {
      errors.push_back(e.what());
    }
  }
  if (!doc.contains("grid")) {
    errors.push_back("grid: required");
  } else if (doc["grid"].is_array()) {
    for (const auto& v : doc["grid"]) {
      if (!v.is_number()) {
        errors.push_back("grid: expected numbers");
        break;
      }
      spec.grid.push_back(v.get<double>());
    }
  } else if (doc["grid"].is_object()) {
    const auto& g = doc["grid"];
    if (!g.contains("from") || !g.contains("to") || !g.contains("step") || !g["from"].is_number() ||
        !g["to"].is_number() || !g["step"].is_number() || g.size() != 3) {
      errors.push_back("grid: range form needs exactly numeric from, to and step");
    } else {
      const double from = g["from"], to = g["to"], step = g["step"];
      if (!(step > 0.0) || to < from) {
        errors.push_back("grid: need step > 0 and to >= from");
      } else {
        const auto n = static_cast<long long>(std::floor((to - from) / step + 1e-9));
        if (n > 100000) errors.push_back("grid: more than 100000 points");
        else
          for (long long k = 0; k <= n; ++k) spec.grid.push_back(tidy(from + static_cast<double>(k) * step));
      }
    }
  } else {
    errors.push_back("grid: expected an array or {from, to, step}");
  }
  if (spec.grid.empty() && errors.empty()) errors.push_back("grid: must not be empty");
  if (spec.grid.size() > 1) {
    const bool up = spec.grid[1] > spec.grid[0];
    for (std::size_t k = 1; k < spec.grid.size(); ++k)
      if (up ? !(spec.grid[k] > spec.grid[k - 1]) : !(spec.grid[k] < spec.grid[k - 1])) {
        errors.push_back("grid: must be strictly monotone");
        break;
      }
  }
  if (doc.contains("metrics")) {
    if (!doc["metrics"].is_array()) {
      errors.push_back("metrics: expected an array of names");
    } else {
      for (const auto& v : doc["metrics"]) {
        const std::string name = v.is_string() ? v.get<std::string>() : "";
        if (std::find(sweep_metrics().begin(), sweep_metrics().end(), name) == sweep_metrics().end())
          errors.push_back("metrics: unknown metric '" + (v.is_string() ? name : v.dump()) + "'");
        else
          spec.metrics.push_back(name);
      }
    }
  }
  for (const char* flag : {"plot", "simulate"}) {
    if (!doc.contains(flag)) continue;
    if (!doc[flag].is_boolean()) errors.push_back(std::string(flag) + ": expected true or false");
    else (std::string(flag) == "plot" ? spec.plot : spec.simulate) = doc[flag].get<bool>();
  }
  if (!errors.empty()) {
    std::string msg;
    for (const auto& e : errors) msg += (msg.empty() ? "" : "\n") + e;
    throw ConfigError("", msg);
  }
  return spec;
}

SweepSpec load_sweep(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_sweep(json::parse(text));
  } catch (const json::parse_error& e) {
    throw ConfigError("", path + ": not valid JSON (" + e.what() + ")");
  }
}

void apply_parameter(Scenario& s, const std::string& parameter, double value) {
  FleetConfig& f = s.fleet;
  const std::string p = canonical_parameter(parameter);
  const std::size_t g = f.gateway();
  auto relays = [&](auto&& set) {
    for (std::size_t i = 0; i < g; ++i) set(f.traffic.per_uav[i]);
  };
  if (p == "f_U^A") relays([&](UavTraffic& t) { t.up_air = value; });
  else if (p == "f_D^A") relays([&](UavTraffic& t) { t.down_air = value; });
  else if (p == "f_D^G") relays([&](UavTraffic& t) { t.down_ground = value; });
  else if (p == "h") for (auto& u : f.uavs) u.altitude_m = value;
  else if (p == "theta") for (auto& u : f.uavs) u.aperture_rad = value;
  else if (p == "lambda") f.device_density = value;
  else if (p == "omega") for (auto& u : f.uavs) u.angular_velocity = value;
  else if (p == "r") {
    if (!(value > 0.0)) throw ConfigError("r", "must be > 0");
    for (auto& u : f.uavs) u.angular_velocity = u.velocity_mps / value;
  } else if (p == "V") for (auto& u : f.uavs) u.velocity_mps = value;
  else if (p == "d_tx") f.tx_range_m = value;
  else if (p == "P_t") f.channel.tx_power_dbm = value;
  else if (p == "K") f.mac.max_attempts = integral(p, value);
  else if (p == "W") f.mac.contention_window = integral(p, value);
}

SweepResult run_sweep(const Scenario& base, const SweepSpec& spec, int workers) {
  const auto& metrics = spec.metrics.empty() ? sweep_metrics() : spec.metrics;
  const std::size_t n = spec.grid.size();
  unsigned w = workers > 0 ? static_cast<unsigned>(workers)
                           : std::max(1u, std::thread::hardware_concurrency());
  w = std::min<unsigned>(w, static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  std::vector<std::vector<SweepRow>> per_point(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < n; k = next++)
      per_point[k] = evaluate(base, spec, metrics, spec.grid[k], w > 1);
  };
  if (w <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < w; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  SweepResult out;
  for (auto& rows : per_point)
    for (auto& r : rows) out.rows.push_back(std::move(r));
  return out;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string to_csv(const SweepResult& r) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& row : r.rows) {
    out += row.param + "," + format_number(row.value) + "," + row.entity + "," + row.metric + "," +
           format_number(row.analytic) + ",";
    if (row.has_sim) out += format_number(row.sim) + "," + format_number(row.sim_stderr);
    else out += ",";
    out += "\n";
  }
  return out;
}

SweepResult parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw ConfigError("csv", "header must be exactly '" + std::string(kCsvHeader) + "'");
  SweepResult r;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 7) throw ConfigError("csv", "line " + std::to_string(lineno) + ": expected 7 cells");
    try {
      SweepRow row{cells[0], parse_number(cells[1]), cells[2], cells[3], parse_number(cells[4])};
      if (!cells[5].empty()) {
        row.has_sim = true;
        row.sim = parse_number(cells[5]);
        row.sim_stderr = cells[6].empty() ? 0.0 : parse_number(cells[6]);
      }
      r.rows.push_back(std::move(row));
    } catch (const std::exception&) {
      throw ConfigError("csv", "line " + std::to_string(lineno) + ": malformed number");
    }
  }
  return r;
}

std::vector<std::string> write_plots(const SweepResult& r, const std::string& stem) {
  // metric -> entity -> points, in first-seen order
  std::vector<std::string> metric_order;
  std::map<std::string, std::vector<std::string>> entity_order;
  std::map<std::string, std::map<std::string, std::vector<std::pair<double, double>>>> series;
  std::string param;
  for (const auto& row : r.rows) {
    if (row.entity == "status" || !std::isfinite(row.analytic)) continue;
    param = row.param;
    if (!series.count(row.metric)) metric_order.push_back(row.metric);
    auto& ents = series[row.metric];
    if (!ents.count(row.entity)) entity_order[row.metric].push_back(row.entity);
    ents[row.entity].emplace_back(row.value, row.analytic);
  }
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::vector<std::string> written;
  for (const auto& metric : metric_order) {
    const auto& ents = series[metric];
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& [e, pts] : ents)
      for (auto [x, y] : pts) {
        x0 = std::min(x0, x), x1 = std::max(x1, x);
        y0 = std::min(y0, y), y1 = std::max(y1, y);
      }
    if (x1 <= x0) x1 = x0 + 1.0;
    if (y1 <= y0) y1 = y0 + 1.0;
    const double W = 640, H = 400, L = 70, R = 120, T = 30, B = 50;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << W / 2 << "\" y=\"18\" text-anchor=\"middle\">" << xml_escape(metric)
        << " vs " << xml_escape(param) << "</text>\n"
        << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
        << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
      const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
      svg << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">"
          << short_number(xv) << "</text>\n"
          << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
          << short_number(yv) << "</text>\n";
    }
    int c = 0;
    for (const auto& e : entity_order[metric]) {
      const char* color = colors[c % 8];
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (auto [x, y] : ents.at(e)) svg << px(x) << "," << py(y) << " ";
      svg << "\"/>\n<text x=\"" << W - R + 10 << "\" y=\"" << T + 16 * (c + 1) << "\" fill=\""
          << color << "\">" << xml_escape(e) << "</text>\n";
      ++c;
    }
    svg << "</svg>\n";
    const std::string path = stem + "_" + metric + ".svg";
    write_text_file(path, svg.str());
    written.push_back(path);
  }
  return written;
}

}  // namespace fmdn
