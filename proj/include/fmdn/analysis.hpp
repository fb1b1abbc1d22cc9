#pragma once

#include "fmdn/link_model.hpp"
#include "fmdn/metrics.hpp"
#include "fmdn/steady_state.hpp"
#include "fmdn/topology.hpp"

namespace fmdn {

/// Everything the analytic model says about one scenario.
struct Analysis {
  FleetConfig fleet;
  LinkModel model;
  SteadyState state;
  StreamMetrics metrics;
};

Analysis analyze(const FleetConfig& fleet, const LinkOverrides& overrides = {},
                 const SolverOptions& opts = {});

}  // namespace fmdn
