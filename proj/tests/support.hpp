#pragma once

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include "fmdn/topology.hpp"

namespace fmdn::test {

/// One relay feeding the gateway, otherwise reference parameters.
inline FleetConfig single_relay() {
  FleetConfig f = reference_fleet();
  f.uavs = {f.uavs.front(), f.uavs.back()};
  f.uavs[1].id = 2;
  f.traffic.per_uav = {f.traffic.per_uav.front(), f.traffic.per_uav.back()};
  return f;
}

inline FleetConfig with_up_share(double up) {
  FleetConfig f = reference_fleet();
  for (std::size_t i = 0; i < f.gateway(); ++i) f.traffic.per_uav[i].up_air = up;
  return f;
}

struct CommandResult {
  int status = -1;
  std::string output;
};

/// Runs a shell command, capturing standard output (stderr is merged when
/// `merge_stderr`). Returns the process exit status.
inline CommandResult run_command(const std::string& cmd, bool merge_stderr = false) {
  CommandResult r;
  const std::string full = cmd + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(full.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  const int status = pclose(pipe);
  r.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("fmdn_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fmdn::test
