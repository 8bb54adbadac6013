#include <limits>

#include "adr/planners.hpp"

namespace adr {

void GreedyConfig::validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0) || !(alpha + beta > 0.0))
    throw std::invalid_argument("greedy weights must be non-negative with a positive sum");
}

Action greedy_select(const MissionState& state, const Scenario& scenario, const GreedyConfig& cfg) {
  cfg.validate();
  if (state.done) throw NoLegalAction("greedy_select called on a finished episode");

  const double time_left = scenario.config.max_duration - state.elapsed_time;
  int best_affordable = -1;
  double best_affordable_cost = std::numeric_limits<double>::infinity();
  int best_any = -1;
  double best_any_cost = std::numeric_limits<double>::infinity();

  for (int i = 0; i < scenario.n_debris(); ++i) {
    if (state.visited[static_cast<std::size_t>(i)]) continue;
    const auto plan = plan_for(state, scenario, Action::visit(i));
    const double cost = cfg.alpha * plan.total_delta_v + cfg.beta * plan.total_duration;
    // Strict comparison keeps the lowest index on ties.
    if (cost < best_any_cost) {
      best_any_cost = cost;
      best_any = i;
    }
    const bool affordable =
        plan.total_delta_v <= state.remaining_delta_v && plan.total_duration <= time_left;
    if (affordable && cost < best_affordable_cost) {
      best_affordable_cost = cost;
      best_affordable = i;
    }
  }

  if (best_affordable >= 0) return Action::visit(best_affordable);
  if (state.visits_this_episode >= 1) {
    const auto plan = plan_for(state, scenario, Action::refuel());
    if (plan.total_delta_v <= state.remaining_delta_v && plan.total_duration <= time_left)
      return Action::refuel();
  }
  if (best_any >= 0) return Action::visit(best_any);
  throw NoLegalAction("no unvisited debris and refuel not permitted");
}

EpisodeResult greedy_episode(const Scenario& scenario, const GreedyConfig& cfg) {
  cfg.validate();
  return run_episode(scenario, [&](const MissionState& state) {
    return greedy_select(state, scenario, cfg);
  });
}

}  // namespace adr
