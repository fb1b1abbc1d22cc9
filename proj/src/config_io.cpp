#include "fmdn/config_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "fmdn/errors.hpp"

namespace fmdn {

using nlohmann::json;

namespace {

class Reader {
 public:
  std::vector<std::string> errors;
  std::string first_field;

  void fail(const std::string& field, const std::string& what) {
    if (first_field.empty()) first_field = field;
    errors.push_back(field + ": " + what);
  }

  /// Checks that `j` is an object with no keys outside `allowed`.
  bool object(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) {
      fail(path.empty() ? "<root>" : path, "expected an object");
      return false;
    }
    for (const auto& [key, value] : j.items())
      if (!allowed.count(key)) fail(join(path, key), "unknown key");
    return true;
  }

  void number(const json& obj, const std::string& path, const char* key, double& out) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_number()) return fail(join(path, key), "expected a number");
    out = v.get<double>();
  }

  template <class Int>
  void integer(const json& obj, const std::string& path, const char* key, Int& out) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) return fail(join(path, key), "expected an integer");
    if constexpr (std::is_unsigned_v<Int>) {
      if (v.is_number_unsigned() || v.get<std::int64_t>() >= 0) {
        out = v.get<Int>();
        return;
      }
      return fail(join(path, key), "expected a non-negative integer");
    } else {
      out = v.get<Int>();
    }
  }

  void boolean(const json& obj, const std::string& path, const char* key, bool& out) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_boolean()) return fail(join(path, key), "expected true or false");
    out = v.get<bool>();
  }

  void string(const json& obj, const std::string& path, const char* key, std::string& out) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_string()) return fail(join(path, key), "expected a string");
    out = v.get<std::string>();
  }

  void numbers(const json& obj, const std::string& path, const char* key, std::vector<double>& out) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_array()) return fail(join(path, key), "expected an array of numbers");
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        fail(join(path, key) + "[" + std::to_string(i) + "]", "expected a number");
        continue;
      }
      out.push_back(v[i].get<double>());
    }
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }
};

void read_uav(Reader& rd, const json& j, const std::string& path, UavParams& u) {
  if (!rd.object(j, path, {"id", "altitude", "aperture", "velocity", "angular_velocity", "is_gateway"}))
    return;
  rd.integer(j, path, "id", u.id);
  rd.number(j, path, "altitude", u.altitude_m);
  rd.number(j, path, "aperture", u.aperture_rad);
  rd.number(j, path, "velocity", u.velocity_mps);
  rd.number(j, path, "angular_velocity", u.angular_velocity);
  rd.boolean(j, path, "is_gateway", u.is_gateway);
}

void read_traffic(Reader& rd, const json& j, const std::string& path, UavTraffic& t) {
  if (!rd.object(j, path, {"up_air", "down_air", "down_ground", "control_rate"})) return;
  rd.number(j, path, "up_air", t.up_air);
  rd.number(j, path, "down_air", t.down_air);
  rd.number(j, path, "down_ground", t.down_ground);
  rd.number(j, path, "control_rate", t.control_rate);
}

const char* arrival_name(ArrivalMode m) {
  switch (m) {
    case ArrivalMode::injected: return "injected";
    case ArrivalMode::poisson: return "poisson";
    case ArrivalMode::scripted: return "scripted";
  }
  return "injected";
}

const char* contact_name(ContactMode m) {
  return m == ContactMode::bernoulli ? "bernoulli" : "geometric";
}

json model_json(const Scenario& s) {
  const FleetConfig& f = s.fleet;
  json j;
  j["schema_version"] = kSchemaVersion;
  j["device_density"] = f.device_density;
  j["tx_range"] = f.tx_range_m;
  j["uavs"] = json::array();
  for (const auto& u : f.uavs)
    j["uavs"].push_back({{"id", u.id},
                         {"altitude", u.altitude_m},
                         {"aperture", u.aperture_rad},
                         {"velocity", u.velocity_mps},
                         {"angular_velocity", u.angular_velocity},
                         {"is_gateway", u.is_gateway}});
  const auto& c = f.channel;
  j["channel"] = {{"beta1", c.beta1},
                  {"beta2", c.beta2},
                  {"los_sigma_a", c.los_sigma_a},
                  {"los_sigma_b", c.los_sigma_b},
                  {"los_mean_db", c.los_mean_db},
                  {"tx_power_dbm", c.tx_power_dbm},
                  {"noise_dbm", c.noise_dbm},
                  {"frequency_hz", c.frequency_hz},
                  {"snr_threshold_db", c.snr_threshold_db},
                  {"backhaul_success", c.backhaul_success}};
  const auto& m = f.mac;
  j["mac"] = {{"contention_window", m.contention_window},
              {"max_backoff_stage", m.max_backoff_stage},
              {"max_attempts", m.max_attempts},
              {"payload_bits", m.payload_bits},
              {"bitrate_bps", m.bitrate_bps},
              {"slot_idle_s", m.slot_idle_s},
              {"success_time_s", m.success_time_s},
              {"collision_time_s", m.collision_time_s}};
  j["traffic"] = {{"ack_fraction", f.traffic.ack_fraction}, {"per_uav", json::array()}};
  for (const auto& t : f.traffic.per_uav)
    j["traffic"]["per_uav"].push_back({{"up_air", t.up_air},
                                       {"down_air", t.down_air},
                                       {"down_ground", t.down_ground},
                                       {"control_rate", t.control_rate}});
  if (!s.overrides.empty()) {
    json o = json::object();
    if (!s.overrides.air_attempt.empty()) o["air_attempt"] = s.overrides.air_attempt;
    if (!s.overrides.ground_attempt.empty()) o["ground_attempt"] = s.overrides.ground_attempt;
    if (!s.overrides.coverage.empty()) o["coverage"] = s.overrides.coverage;
    if (!s.overrides.source_rate.empty()) o["source_rate"] = s.overrides.source_rate;
    j["overrides"] = o;
  }
  return j;
}

}  // namespace

Scenario parse_scenario(const json& doc) {
  Reader rd;
  Scenario s;
  s.fleet = reference_fleet();
  FleetConfig& f = s.fleet;

  if (!rd.object(doc, "", {"schema_version", "device_density", "tx_range", "uavs", "channel", "mac",
                           "traffic", "simulation", "overrides"}))
    throw ConfigError(rd.first_field, rd.errors.front());
  if (!doc.contains("schema_version")) {
    rd.fail("schema_version", "missing (expected " + std::to_string(kSchemaVersion) + ")");
  } else if (!doc["schema_version"].is_number_integer() ||
             doc["schema_version"].get<long long>() != kSchemaVersion) {
    rd.fail("schema_version", "unsupported (expected " + std::to_string(kSchemaVersion) + ")");
  }

  rd.number(doc, "", "device_density", f.device_density);
  rd.number(doc, "", "tx_range", f.tx_range_m);
  if (doc.contains("uavs")) {
    const auto& arr = doc["uavs"];
    if (!arr.is_array()) {
      rd.fail("uavs", "expected an array");
    } else {
      f.uavs.assign(arr.size(), UavParams{});
      for (std::size_t k = 0; k < arr.size(); ++k) {
        f.uavs[k].id = static_cast<int>(k + 1);
        f.uavs[k].is_gateway = k + 1 == arr.size();
        read_uav(rd, arr[k], "uavs[" + std::to_string(k) + "]", f.uavs[k]);
      }
    }
  }
  if (doc.contains("channel")) {
    const auto& j = doc["channel"];
    auto& c = f.channel;
    if (rd.object(j, "channel", {"beta1", "beta2", "los_sigma_a", "los_sigma_b", "los_mean_db",
                                 "tx_power_dbm", "noise_dbm", "frequency_hz", "snr_threshold_db",
                                 "backhaul_success"})) {
      rd.number(j, "channel", "beta1", c.beta1);
      rd.number(j, "channel", "beta2", c.beta2);
      rd.number(j, "channel", "los_sigma_a", c.los_sigma_a);
      rd.number(j, "channel", "los_sigma_b", c.los_sigma_b);
      rd.number(j, "channel", "los_mean_db", c.los_mean_db);
      rd.number(j, "channel", "tx_power_dbm", c.tx_power_dbm);
      rd.number(j, "channel", "noise_dbm", c.noise_dbm);
      rd.number(j, "channel", "frequency_hz", c.frequency_hz);
      rd.number(j, "channel", "snr_threshold_db", c.snr_threshold_db);
      rd.number(j, "channel", "backhaul_success", c.backhaul_success);
    }
  }
  if (doc.contains("mac")) {
    const auto& j = doc["mac"];
    auto& m = f.mac;
    if (rd.object(j, "mac", {"contention_window", "max_backoff_stage", "max_attempts",
                             "payload_bits", "bitrate_bps", "slot_idle_s", "success_time_s",
                             "collision_time_s"})) {
      rd.integer(j, "mac", "contention_window", m.contention_window);
      rd.integer(j, "mac", "max_backoff_stage", m.max_backoff_stage);
      rd.integer(j, "mac", "max_attempts", m.max_attempts);
      rd.number(j, "mac", "payload_bits", m.payload_bits);
      rd.number(j, "mac", "bitrate_bps", m.bitrate_bps);
      rd.number(j, "mac", "slot_idle_s", m.slot_idle_s);
      rd.number(j, "mac", "success_time_s", m.success_time_s);
      rd.number(j, "mac", "collision_time_s", m.collision_time_s);
    }
  }
  // Traffic defaults follow the UAV list, with the gateway's own profile.
  if (f.traffic.per_uav.size() != f.uavs.size()) {
    f.traffic.per_uav.assign(f.uavs.size(), UavTraffic{});
    if (!f.uavs.empty()) f.traffic.per_uav.back() = reference_fleet().traffic.per_uav.back();
  }
  if (doc.contains("traffic")) {
    const auto& j = doc["traffic"];
    if (rd.object(j, "traffic", {"ack_fraction", "per_uav"})) {
      rd.number(j, "traffic", "ack_fraction", f.traffic.ack_fraction);
      if (j.contains("per_uav")) {
        const auto& arr = j["per_uav"];
        if (!arr.is_array()) {
          rd.fail("traffic.per_uav", "expected an array");
        } else {
          f.traffic.per_uav.assign(arr.size(), UavTraffic{});
          for (std::size_t k = 0; k < arr.size(); ++k)
            read_traffic(rd, arr[k], "traffic.per_uav[" + std::to_string(k) + "]",
                         f.traffic.per_uav[k]);
        }
      }
    }
  }
  if (doc.contains("overrides")) {
    const auto& j = doc["overrides"];
    if (rd.object(j, "overrides", {"air_attempt", "ground_attempt", "coverage", "source_rate"})) {
      rd.numbers(j, "overrides", "air_attempt", s.overrides.air_attempt);
      rd.numbers(j, "overrides", "ground_attempt", s.overrides.ground_attempt);
      rd.numbers(j, "overrides", "coverage", s.overrides.coverage);
      rd.numbers(j, "overrides", "source_rate", s.overrides.source_rate);
    }
  }
  SimConfig& sim = s.sim;
  if (doc.contains("simulation")) {
    const auto& j = doc["simulation"];
    const std::string p = "simulation";
    if (rd.object(j, p, {"slots", "warmup", "seed", "replications", "threads", "arrival_mode",
                         "contact_mode", "slot_seconds", "trace_interval", "script"})) {
      rd.integer(j, p, "slots", sim.slots);
      rd.integer(j, p, "warmup", sim.warmup);
      rd.integer(j, p, "seed", sim.seed);
      rd.integer(j, p, "replications", sim.replications);
      rd.integer(j, p, "threads", sim.threads);
      rd.number(j, p, "slot_seconds", sim.slot_seconds);
      rd.integer(j, p, "trace_interval", sim.trace_interval);
      std::string mode;
      rd.string(j, p, "arrival_mode", mode);
      if (mode == "injected") sim.arrival_mode = ArrivalMode::injected;
      else if (mode == "poisson") sim.arrival_mode = ArrivalMode::poisson;
      else if (mode == "scripted") sim.arrival_mode = ArrivalMode::scripted;
      else if (!mode.empty()) rd.fail(p + ".arrival_mode", "expected injected, poisson or scripted");
      mode.clear();
      rd.string(j, p, "contact_mode", mode);
      if (mode == "geometric") sim.contact_mode = ContactMode::geometric;
      else if (mode == "bernoulli") sim.contact_mode = ContactMode::bernoulli;
      else if (!mode.empty()) rd.fail(p + ".contact_mode", "expected geometric or bernoulli");
      if (j.contains("script")) {
        const auto& arr = j["script"];
        if (!arr.is_array()) {
          rd.fail(p + ".script", "expected an array");
        } else {
          for (std::size_t k = 0; k < arr.size(); ++k) {
            const std::string q = p + ".script[" + std::to_string(k) + "]";
            ScriptedPacket pk;
            int uav = 1;
            if (!rd.object(arr[k], q, {"slot", "uav"})) continue;
            rd.integer(arr[k], q, "slot", pk.slot);
            rd.integer(arr[k], q, "uav", uav);
            pk.uav = uav - 1;  // ids in the file are 1-based
            sim.script.push_back(pk);
          }
        }
      }
    }
  }

  if (!rd.errors.empty()) {
    std::string msg;
    for (const auto& e : rd.errors) msg += (msg.empty() ? "" : "\n") + e;
    throw ConfigError(rd.first_field, msg);
  }
  f.validate();
  sim.fleet = f;
  sim.overrides = s.overrides;
  sim.validate();
  build_link_model(f, s.overrides);  // rejects malformed overrides early
  return s;
}

Scenario load_scenario(const std::string& path) {
  const std::string text = read_text_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", path + ": not valid JSON (" + e.what() + ")");
  }
  return parse_scenario(doc);
}

json to_json(const Scenario& s) {
  json j = model_json(s);
  const SimConfig& sim = s.sim;
  j["simulation"] = {{"slots", sim.slots},
                     {"warmup", sim.warmup},
                     {"seed", sim.seed},
                     {"replications", sim.replications},
                     {"threads", sim.threads},
                     {"arrival_mode", arrival_name(sim.arrival_mode)},
                     {"contact_mode", contact_name(sim.contact_mode)},
                     {"slot_seconds", sim.slot_seconds},
                     {"trace_interval", sim.trace_interval}};
  if (!sim.script.empty()) {
    j["simulation"]["script"] = json::array();
    for (const auto& p : sim.script)
      j["simulation"]["script"].push_back({{"slot", p.slot}, {"uav", p.uav + 1}});
  }
  return j;
}

std::string scenario_hash(const Scenario& s) {
  const std::string canon = model_json(s).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace fmdn
