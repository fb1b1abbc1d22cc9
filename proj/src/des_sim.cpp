#include "fmdn/des_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "fmdn/errors.hpp"
#include "fmdn/rng.hpp"

namespace fmdn {

namespace {

enum Channel : std::uint64_t { kAir = 0, kGround = 1, kCloud = 2 };

enum Purpose : std::uint64_t {
  kClass = 0,
  kAttempt = 1,
  kContact = 2,
  kInjection = 3,
  kCoverage = 4,
  kContenders = 5,
  kBackhaul = 6,
  kAck = 7,
  kControl = 8,
  kPhase = 9,
};

enum class Cls : std::uint8_t { none, up, down, beacon };

struct Packet {
  int stream = 0;
  std::int64_t created = 0;
  std::int64_t arrived = 0;
  int attempts = 0;
};

enum class Dest : std::uint8_t { up, down_air, down_ground };

struct Transfer {
  int uav;
  Dest dest;
  Packet packet;
};

struct Cycle {
  Cls cls = Cls::none;
  int remaining = 0;
};

struct Occupancy {
  std::int64_t cycles = 0, busy_cycles = 0, slots = 0, busy_slots = 0;

  void observe_cycle(bool busy) {
    ++cycles;
    busy_cycles += busy;
  }
  void observe_slot(bool busy) {
    ++slots;
    busy_slots += busy;
  }
  double cycle_load() const { return cycles ? static_cast<double>(busy_cycles) / cycles : 0.0; }
  double time_load() const { return slots ? static_cast<double>(busy_slots) / slots : 0.0; }
};

Estimate estimate(const std::vector<double>& xs) {
  Estimate e;
  std::vector<double> v;
  for (double x : xs)
    if (std::isfinite(x)) v.push_back(x);
  if (v.empty()) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
  RunningStat s;
  for (double x : v) s.add(x);
  e.mean = s.mean;
  e.stderr_ = v.size() > 1 ? std::sqrt(s.variance() / static_cast<double>(v.size())) : 0.0;
  return e;
}

}  // namespace

std::int64_t SimConfig::effective_trace_interval() const {
  return trace_interval > 0 ? trace_interval : std::max<std::int64_t>(1, slots / 200);
}

void SimConfig::validate() const {
  fleet.validate();
  if (slots <= 0) throw ConfigError("simulation.slots", "must be positive");
  if (warmup < 0 || warmup >= slots) throw ConfigError("simulation.warmup", "must satisfy 0 <= warmup < slots");
  if (replications < 1) throw ConfigError("simulation.replications", "must be >= 1");
  if (threads < 0) throw ConfigError("simulation.threads", "must be >= 0");
  if (!(slot_seconds > 0.0)) throw ConfigError("simulation.slot_seconds", "must be positive");
  if (trace_interval < 0) throw ConfigError("simulation.trace_interval", "must be >= 0");
  if (queue_watermark < 1) throw ConfigError("simulation.queue_watermark", "must be >= 1");
  for (const auto& p : script)
    if (p.uav < 0 || static_cast<std::size_t>(p.uav) >= fleet.gateway() || p.slot < 0)
      throw ConfigError("simulation.script", "packets must start at a non-gateway UAV at slot >= 0");
}

double growth_slope(const std::vector<std::int64_t>& trace, std::int64_t interval) {
  const std::size_t n = trace.size();
  if (n < 4 || interval <= 0) return 0.0;
  const std::size_t from = n / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(n - from);
  for (std::size_t i = from; i < n; ++i) {
    const double x = static_cast<double>(i) * static_cast<double>(interval);
    const double y = static_cast<double>(trace[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = k * sxx - sx * sx;
  return den > 0.0 ? (k * sxy - sx * sy) / den : 0.0;
}

ReplicationResult run_replication(const SimConfig& cfg, const LinkModel& model, int rep) {
  const std::int64_t trace_every = cfg.effective_trace_interval();
  const FleetConfig& fleet = cfg.fleet;
  const std::size_t m = fleet.size();
  const std::size_t g = fleet.gateway();
  const int k_max = fleet.mac.max_attempts;
  const auto r = static_cast<std::uint64_t>(rep);

  std::vector<RngStream> rng_class(m), rng_attempt(m), rng_contact(m), rng_inject(m),
      rng_gclass(m), rng_gattempt(m), rng_cover(m), rng_contenders(m), rng_control(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto u = static_cast<std::uint64_t>(i);
    rng_class[i] = RngStream(cfg.seed, r, u, kAir, kClass);
    rng_attempt[i] = RngStream(cfg.seed, r, u, kAir, kAttempt);
    rng_contact[i] = RngStream(cfg.seed, r, u, kAir, kContact);
    rng_inject[i] = RngStream(cfg.seed, r, u, kGround, kInjection);
    rng_gclass[i] = RngStream(cfg.seed, r, u, kGround, kClass);
    rng_gattempt[i] = RngStream(cfg.seed, r, u, kGround, kAttempt);
    rng_cover[i] = RngStream(cfg.seed, r, u, kGround, kCoverage);
    rng_contenders[i] = RngStream(cfg.seed, r, u, kGround, kContenders);
    rng_control[i] = RngStream(cfg.seed, r, u, kCloud, kControl);
  }
  RngStream rng_backhaul(cfg.seed, r, g, kCloud, kBackhaul);
  RngStream rng_ack(cfg.seed, r, g, kCloud, kAck);

  // Geometry: concentric circles, one phase per UAV drawn per replication.
  std::vector<double> radius(m), omega(m), phase0(m);
  for (std::size_t i = 0; i < m; ++i) {
    RngStream ph(cfg.seed, r, i, kAir, kPhase);
    radius[i] = fleet.uavs[i].rotation_radius();
    omega[i] = fleet.uavs[i].angular_velocity;
    phase0[i] = 2.0 * std::numbers::pi * ph.uniform();
  }
  const double d2 = fleet.tx_range_m * fleet.tx_range_m;
  // contact[i] is the state of the pair (i, i + 1).
  std::vector<char> contact(m, 0);
  auto in_contact = [&](std::size_t a, std::size_t b) { return contact[std::min(a, b)] != 0; };

  std::vector<std::deque<Packet>> q_up(m), q_down(m), q_ground(m);
  std::vector<Cycle> air(m), ground(m);
  std::vector<Occupancy> occ_up(m), occ_down(m), occ_ground(m);
  std::vector<Transfer> pending, arriving;
  std::vector<char> tx(m, 0);
  std::vector<int> contenders(m, 0);
  for (std::size_t i = 0; i < g; ++i) contenders[i] = model.uavs[i].ground_contenders - 1;

  ReplicationResult res;
  res.up.resize(m);
  res.down_air.resize(m);
  res.down_ground.resize(m);
  res.ledger_up.resize(g);
  res.ledger_down.resize(g);
  res.theta_up.assign(g, 0.0);
  res.theta_down.assign(g, 0.0);
  res.delay_up.resize(g);
  res.delay_down.resize(g);
  res.hop_up.resize(m);
  res.hop_down_air.resize(m);
  res.hop_down_ground.resize(m);
  std::vector<std::int64_t> delivered_up(g, 0), delivered_down(g, 0);

  std::vector<ScriptedPacket> script = cfg.script;
  std::stable_sort(script.begin(), script.end(),
                   [](const ScriptedPacket& a, const ScriptedPacket& b) { return a.slot < b.slot; });
  std::size_t script_pos = 0;

  const double zeta = fleet.channel.backhaul_success;
  const double ack = fleet.traffic.ack_fraction;
  std::vector<int> cloud;

  auto note_attempt = [&](Packet& p) {
    ++p.attempts;
    res.max_attempts_seen = std::max(res.max_attempts_seen, p.attempts);
    if (p.attempts > k_max) throw NumericalError("simulator attempted a packet more than K times");
  };

  for (std::int64_t t = 0; t < cfg.slots; ++t) {
    const bool measuring = t >= cfg.warmup;

    // Contact between consecutive UAVs.
    for (std::size_t i = 0; i + 1 < m; ++i) {
      if (cfg.contact_mode == ContactMode::bernoulli) {
        contact[i] = rng_contact[i].bernoulli(model.contact[i][i + 1]);
      } else {
        const double time = static_cast<double>(t) * cfg.slot_seconds;
        const double dphi = (phase0[i] + omega[i] * time) - (phase0[i + 1] + omega[i + 1] * time);
        const double dist2 = radius[i] * radius[i] + radius[i + 1] * radius[i + 1] -
                             2.0 * radius[i] * radius[i + 1] * std::cos(dphi);
        contact[i] = dist2 <= d2 * (1.0 + 1e-12);
      }
    }

    // (1) Cycle decisions and backhaul service.
    for (std::size_t i = 0; i < m; ++i) {
      const auto& tr = fleet.traffic.per_uav[i];
      if (measuring) {
        occ_up[i].observe_slot(!q_up[i].empty());
        if (i > 0) occ_down[i].observe_slot(!q_down[i].empty());
        if (i < g) occ_ground[i].observe_slot(!q_ground[i].empty());
      }
      if (air[i].cls == Cls::none) {
        const bool up_busy = i != g && !q_up[i].empty();
        const bool down_busy = i > 0 && !q_down[i].empty();
        if (measuring) {
          if (i != g) occ_up[i].observe_cycle(up_busy);
          if (i > 0) occ_down[i].observe_cycle(down_busy);
        }
        const double u = rng_class[i].uniform();
        const double f_up = i == g ? 0.0 : tr.up_air;
        if (u < f_up && up_busy)
          air[i] = {Cls::up, k_max};
        else if (u >= f_up && u < f_up + tr.down_air && down_busy)
          air[i] = {Cls::down, k_max};
        else
          air[i] = {Cls::beacon, 1};
      }
      if (i < g && ground[i].cls == Cls::none) {
        const bool busy = !q_ground[i].empty();
        if (measuring) occ_ground[i].observe_cycle(busy);
        const double u = rng_gclass[i].uniform();
        ground[i] = u < tr.down_ground && busy ? Cycle{Cls::down, k_max} : Cycle{Cls::beacon, 1};
      }
    }
    cloud.clear();
    if (measuring) occ_up[g].observe_cycle(!q_up[g].empty());
    if (!q_up[g].empty()) {
      Packet p = q_up[g].front();
      q_up[g].pop_front();
      if (measuring) res.hop_up[g].add(static_cast<double>(t - p.arrived + 1));
      auto& led = res.ledger_up[static_cast<std::size_t>(p.stream)];
      if (rng_backhaul.bernoulli(zeta)) {
        ++led.delivered;
        if (measuring) {
          ++delivered_up[static_cast<std::size_t>(p.stream)];
          res.delay_up[static_cast<std::size_t>(p.stream)].add(static_cast<double>(t - p.created + 1));
        }
        if (rng_ack.bernoulli(ack)) cloud.push_back(p.stream);
      } else {
        ++led.dropped_backhaul;
      }
    }

    // (2) Arrivals: relayed packets from the previous slot, device uplink
    // traffic and the cloud's downlink traffic.
    for (auto& tr : pending) {
      tr.packet.arrived = t;
      tr.packet.attempts = 0;
      const auto u = static_cast<std::size_t>(tr.uav);
      switch (tr.dest) {
        case Dest::up: q_up[u].push_back(tr.packet); break;
        case Dest::down_air: q_down[u].push_back(tr.packet); break;
        case Dest::down_ground: q_ground[u].push_back(tr.packet); break;
      }
    }
    pending.clear();
    for (std::size_t i = 0; i < g; ++i) {
      int count = 0;
      const double a = model.uavs[i].source_rate;
      switch (cfg.arrival_mode) {
        case ArrivalMode::injected: count = rng_inject[i].bernoulli(a); break;
        case ArrivalMode::poisson: count = rng_inject[i].poisson(a); break;
        case ArrivalMode::scripted: break;
      }
      for (int c = 0; c < count; ++c) {
        q_up[i].push_back({static_cast<int>(i), t, t, 0});
        ++res.ledger_up[i].generated;
      }
    }
    while (script_pos < script.size() && script[script_pos].slot == t) {
      const auto i = static_cast<std::size_t>(script[script_pos].uav);
      q_up[i].push_back({static_cast<int>(i), t, t, 0});
      ++res.ledger_up[i].generated;
      ++script_pos;
    }
    while (script_pos < script.size() && script[script_pos].slot < t) ++script_pos;
    for (std::size_t d = 0; d < g; ++d) {
      const double rate = fleet.traffic.per_uav[d].control_rate * zeta;
      if (rate > 0.0 && rng_control[d].bernoulli(rate)) cloud.push_back(static_cast<int>(d));
    }
    for (int d : cloud) {
      q_down[g].push_back({d, t, t, 0});
      ++res.ledger_down[static_cast<std::size_t>(d)].generated;
    }

    // (3) Air channel: attempts, then outcomes against the attempt set.
    for (std::size_t i = 0; i < m; ++i) {
      const bool draw = rng_attempt[i].bernoulli(model.uavs[i].air.attempt);
      tx[i] = 0;
      switch (air[i].cls) {
        case Cls::up: tx[i] = draw && in_contact(i, i + 1); break;
        case Cls::down: tx[i] = draw && in_contact(i, i - 1); break;
        case Cls::beacon: tx[i] = draw; break;
        case Cls::none: break;
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (!tx[i]) continue;
      Cycle& cyc = air[i];
      if (cyc.cls == Cls::beacon) {
        cyc = {};
        continue;
      }
      const bool up = cyc.cls == Cls::up;
      const std::size_t j = up ? i + 1 : i - 1;
      bool ok = !tx[j];
      for (std::size_t k : {j - 1, j + 1})
        if (k < m && k != i && tx[k] && in_contact(k, j)) ok = false;
      auto& queue = up ? q_up[i] : q_down[i];
      Packet& p = queue.front();
      note_attempt(p);
      if (ok) {
        if (measuring) (up ? res.hop_up[i] : res.hop_down_air[i]).add(static_cast<double>(t - p.arrived + 1));
        Dest dest = up ? Dest::up : (static_cast<std::size_t>(p.stream) == j ? Dest::down_ground : Dest::down_air);
        pending.push_back({static_cast<int>(j), dest, p});
        queue.pop_front();
        cyc = {};
      } else if (--cyc.remaining == 0) {
        auto& led = up ? res.ledger_up[static_cast<std::size_t>(p.stream)]
                       : res.ledger_down[static_cast<std::size_t>(p.stream)];
        ++led.dropped_retry;
        queue.pop_front();
        cyc = {};
      }
    }

    // (3') Ground channel of every non-gateway UAV.
    for (std::size_t i = 0; i < g; ++i) {
      const auto& u = model.uavs[i];
      if (!rng_gattempt[i].bernoulli(u.ground.attempt)) continue;
      Cycle& cyc = ground[i];
      if (cyc.cls == Cls::beacon) {
        cyc = {};
        continue;
      }
      bool ok = rng_cover[i].bernoulli(u.coverage);
      const double x = u.ground.attempt * u.coverage;
      for (int c = 0; c < contenders[i]; ++c)
        if (rng_contenders[i].bernoulli(x)) ok = false;
      Packet& p = q_ground[i].front();
      note_attempt(p);
      auto& led = res.ledger_down[static_cast<std::size_t>(p.stream)];
      if (ok) {
        ++led.delivered;
        if (measuring) {
          ++delivered_down[static_cast<std::size_t>(p.stream)];
          res.hop_down_ground[i].add(static_cast<double>(t - p.arrived + 1));
          res.delay_down[static_cast<std::size_t>(p.stream)].add(static_cast<double>(t - p.created + 1));
        }
        q_ground[i].pop_front();
        cyc = {};
      } else if (--cyc.remaining == 0) {
        ++led.dropped_retry;
        q_ground[i].pop_front();
        cyc = {};
      }
    }

    if (t % trace_every == 0) {
      for (std::size_t i = 0; i < m; ++i) {
        res.up[i].trace.push_back(static_cast<std::int64_t>(q_up[i].size()));
        res.down_air[i].trace.push_back(static_cast<std::int64_t>(q_down[i].size()));
        res.down_ground[i].trace.push_back(static_cast<std::int64_t>(q_ground[i].size()));
      }
    }
    if ((t & 1023) == 0) {
      std::int64_t total = 0;
      for (std::size_t i = 0; i < m; ++i)
        total += static_cast<std::int64_t>(q_up[i].size() + q_down[i].size() + q_ground[i].size());
      if (total > cfg.queue_watermark) {
        std::ostringstream msg;
        msg << "replication " << rep << " exceeded the queue watermark (" << total
            << " packets queued at slot " << t << ")";
        throw NumericalError(msg.str(), {msg.str()});
      }
    }
  }

  // Whatever is still queued or in flight is the ledger residual.
  auto residual = [&](const Packet& p, bool up) {
    ++(up ? res.ledger_up : res.ledger_down)[static_cast<std::size_t>(p.stream)].residual;
  };
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& p : q_up[i]) residual(p, true);
    for (const auto& p : q_down[i]) residual(p, false);
    for (const auto& p : q_ground[i]) residual(p, false);
  }
  for (const auto& tr : pending) residual(tr.packet, tr.dest == Dest::up);

  const double span = static_cast<double>(cfg.slots - cfg.warmup);
  for (std::size_t s = 0; s < g; ++s) {
    res.theta_up[s] = static_cast<double>(delivered_up[s]) / span;
    res.theta_down[s] =
        static_cast<double>(delivered_down[s]) / span / (model.uavs[s].covered + 1.0);
  }
  auto finish = [&](QueueObservation& o, const Occupancy& occ, std::size_t len) {
    o.cycle_load = occ.cycle_load();
    o.time_load = occ.time_load();
    o.final_length = static_cast<std::int64_t>(len);
    o.growth_slope = growth_slope(o.trace, trace_every);
  };
  for (std::size_t i = 0; i < m; ++i) {
    finish(res.up[i], occ_up[i], q_up[i].size());
    finish(res.down_air[i], occ_down[i], q_down[i].size());
    finish(res.down_ground[i], occ_ground[i], q_ground[i].size());
  }
  return res;
}

SimMeasurements run(const SimConfig& cfg) {
  cfg.validate();
  const LinkModel model = build_link_model(cfg.fleet, cfg.overrides);
  SimMeasurements out;
  out.config = cfg;
  out.runs.resize(static_cast<std::size_t>(cfg.replications));

  unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(cfg.replications));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (int rep = next++; rep < cfg.replications; rep = next++) {
      try {
        out.runs[static_cast<std::size_t>(rep)] = run_replication(cfg, model, rep);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  const std::size_t m = cfg.fleet.size();
  const std::size_t g = cfg.fleet.gateway();
  auto collect = [&](auto&& get, std::size_t n) {
    std::vector<Estimate> est(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> xs;
      for (const auto& run : out.runs) xs.push_back(get(run, i));
      est[i] = estimate(xs);
    }
    return est;
  };
  out.load_up = collect([](const auto& r, std::size_t i) { return r.up[i].cycle_load; }, m);
  out.load_down_air = collect([](const auto& r, std::size_t i) { return r.down_air[i].cycle_load; }, m);
  out.load_down_ground = collect([](const auto& r, std::size_t i) { return r.down_ground[i].cycle_load; }, m);
  out.time_load_up = collect([](const auto& r, std::size_t i) { return r.up[i].time_load; }, m);
  out.time_load_down_air = collect([](const auto& r, std::size_t i) { return r.down_air[i].time_load; }, m);
  out.time_load_down_ground = collect([](const auto& r, std::size_t i) { return r.down_ground[i].time_load; }, m);
  out.slope_up = collect([](const auto& r, std::size_t i) { return r.up[i].growth_slope; }, m);
  out.slope_down_air = collect([](const auto& r, std::size_t i) { return r.down_air[i].growth_slope; }, m);
  out.slope_down_ground = collect([](const auto& r, std::size_t i) { return r.down_ground[i].growth_slope; }, m);
  out.theta_up = collect([](const auto& r, std::size_t s) { return r.theta_up[s]; }, g);
  out.theta_down = collect([](const auto& r, std::size_t s) { return r.theta_down[s]; }, g);
  auto mean_or_nan = [](const RunningStat& s) {
    return s.count ? s.mean : std::numeric_limits<double>::quiet_NaN();
  };
  out.delay_up = collect([&](const auto& r, std::size_t s) { return mean_or_nan(r.delay_up[s]); }, g);
  out.delay_down = collect([&](const auto& r, std::size_t s) { return mean_or_nan(r.delay_down[s]); }, g);
  out.hop_up = collect([&](const auto& r, std::size_t i) { return mean_or_nan(r.hop_up[i]); }, m);
  out.hop_down_air = collect([&](const auto& r, std::size_t i) { return mean_or_nan(r.hop_down_air[i]); }, m);
  out.hop_down_ground = collect([&](const auto& r, std::size_t i) { return mean_or_nan(r.hop_down_ground[i]); }, m);

  out.ledger_up.assign(g, {});
  out.ledger_down.assign(g, {});
  for (const auto& run : out.runs) {
    out.max_attempts_seen = std::max(out.max_attempts_seen, run.max_attempts_seen);
    for (std::size_t s = 0; s < g; ++s) {
      for (auto [sum, part] : {std::pair{&out.ledger_up[s], &run.ledger_up[s]},
                               std::pair{&out.ledger_down[s], &run.ledger_down[s]}}) {
        if (!part->balanced()) out.conserved = false;
        sum->generated += part->generated;
        sum->delivered += part->delivered;
        sum->dropped_retry += part->dropped_retry;
        sum->dropped_backhaul += part->dropped_backhaul;
        sum->residual += part->residual;
      }
    }
  }
  return out;
}

bool ComparisonReport::pass() const { return failures() == 0; }

int ComparisonReport::failures() const {
  int n = 0;
  for (const auto& r : rows) n += r.checked && !r.pass;
  return n;
}

SaturationFlags saturation_flags(const Analysis& a, const SimMeasurements& sim,
                                 double slope_threshold) {
  SaturationFlags f;
  for (std::size_t i = 0; i < a.fleet.size(); ++i) {
    f.analytic.push_back(!a.state.stable_up[i]);
    f.sim.push_back(sim.slope_up[i].mean >= slope_threshold);
  }
  return f;
}

ComparisonReport compare(const Analysis& analytic, const SimMeasurements& sim,
                         const std::string& analytic_hash, const std::string& sim_hash,
                         const Tolerances& tol) {
  if (analytic_hash != sim_hash)
    throw UsageError("analytic and simulated results come from different configs (" +
                     analytic_hash + " vs " + sim_hash + ")");
  const auto& fleet = analytic.fleet;
  const std::size_t m = fleet.size();
  const std::size_t g = fleet.gateway();
  if (sim.load_up.size() != m) throw UsageError("simulation does not match the fleet size");
  ComparisonReport rep;
  auto uav = [](std::size_t i) { return "uav" + std::to_string(i + 1); };
  auto add = [&](std::string entity, std::string metric, double a, const Estimate& s,
                 bool relative, double tolerance, bool checked) {
    ComparisonRow row{std::move(entity), std::move(metric), a, s.mean, s.stderr_};
    row.relative = relative;
    row.tolerance = tolerance;
    const double diff = std::abs(a - s.mean);
    row.error = relative && a != 0.0 ? diff / std::abs(a) : diff;
    row.checked = checked && std::isfinite(a);
    row.pass = !row.checked || (std::isfinite(s.mean) && row.error <= tolerance);
    rep.rows.push_back(std::move(row));
  };
  const auto& st = analytic.state;
  const auto& mt = analytic.metrics;
  for (std::size_t i = 0; i < m; ++i)
    add(uav(i), "load_up", st.queue_load_up(static_cast<Eigen::Index>(i)), sim.load_up[i], false,
        tol.load_abs, true);
  for (std::size_t i = 1; i < m; ++i)
    add(uav(i), "load_down_air", st.queue_load_down(static_cast<Eigen::Index>(i)),
        sim.load_down_air[i], false, tol.load_abs, false);
  for (std::size_t i = 0; i < g; ++i)
    add(uav(i), "load_down_ground", st.queue_load_ground(static_cast<Eigen::Index>(i)),
        sim.load_down_ground[i], false, tol.load_abs, false);
  for (std::size_t s = 0; s < g; ++s) {
    add(uav(s), "theta_up", mt.theta_up[s], sim.theta_up[s], true, tol.theta_rel, true);
    add(uav(s), "delay_up", mt.delay_up[s], sim.delay_up[s], true, tol.delay_rel, true);
    add(uav(s), "theta_down", mt.theta_down[s], sim.theta_down[s], true, tol.theta_rel, false);
    add(uav(s), "delay_down", mt.delay_down[s], sim.delay_down[s], true, tol.delay_rel, false);
  }
  const SaturationFlags flags = saturation_flags(analytic, sim);
  for (std::size_t i = 0; i < m; ++i) {
    ComparisonRow row{uav(i), "saturated_up", flags.analytic[i] ? 1.0 : 0.0,
                      flags.sim[i] ? 1.0 : 0.0, 0.0};
    row.error = flags.analytic[i] == flags.sim[i] ? 0.0 : 1.0;
    row.pass = row.error == 0.0;
    rep.rows.push_back(row);
  }
  ComparisonRow ledger{"fleet", "conservation", 1.0, sim.conserved ? 1.0 : 0.0, 0.0};
  ledger.error = sim.conserved ? 0.0 : 1.0;
  ledger.pass = sim.conserved;
  rep.rows.push_back(ledger);
  return rep;
}

}  // namespace fmdn
