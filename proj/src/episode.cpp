#include <chrono>

#include "adr/planners.hpp"

namespace adr {

EpisodeResult run_episode(const Scenario& scenario, const DecisionFn& decide) {
  using Clock = std::chrono::steady_clock;
  EpisodeResult result;
  auto state = reset(scenario).state;
  while (!state.done) {
    const auto t0 = Clock::now();
    const Action action = decide(state);
    result.planner_wall_clock += std::chrono::duration<double>(Clock::now() - t0).count();

    StepInfo info;
    const int reward = apply_action(state, scenario, action, &info);
    result.reward_sum += reward;
    result.actions.push_back(action.flat(scenario.n_debris()));
    // A -1 leaves the state untouched, so nothing was burned.
    if (reward >= 0) result.total_delta_v_spent += info.transfer_delta_v;
  }
  result.debris_visited = state.visits_this_episode;
  result.refuel_count = state.refuel_count;
  result.elapsed_mission_time = state.elapsed_time;
  result.done_reason = state.done_reason;
  return result;
}

}  // namespace adr
