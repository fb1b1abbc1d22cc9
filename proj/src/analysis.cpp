#include "fmdn/analysis.hpp"

namespace fmdn {

Analysis analyze(const FleetConfig& fleet, const LinkOverrides& overrides,
                 const SolverOptions& opts) {
  Analysis a;
  a.fleet = fleet;
  a.model = build_link_model(fleet, overrides);
  a.state = solve_steady_state(fleet, a.model, opts);
  a.metrics = compute_metrics(a.state, fleet, a.model);
  return a;
}

}  // namespace fmdn
