#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "adr/mission.hpp"

namespace adr {

// Thrown when a planner is asked to decide on a terminal state.
class NoLegalAction : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Outcome of one planner-driven episode.
struct EpisodeResult {
  int debris_visited = 0;
  double total_delta_v_spent = 0.0;
  int refuel_count = 0;
  double elapsed_mission_time = 0.0;
  double planner_wall_clock = 0.0;  // s, decision calls only
  DoneReason done_reason = DoneReason::Running;
  int reward_sum = 0;
  std::vector<int> actions;  // flat action indices in order
};

using DecisionFn = std::function<Action(const MissionState&)>;

/// reset/step loop until done. Only time spent inside `decide` is counted
/// as planner wall-clock.
EpisodeResult run_episode(const Scenario& scenario, const DecisionFn& decide);

// ---------------------------------------------------------------------------
// Greedy

struct GreedyConfig {
  double alpha = 1.0;  // weight on delta-v, per m/s
  double beta = 0.0;   // weight on transfer time, per s

  void validate() const;
};

Action greedy_select(const MissionState& state, const Scenario& scenario, const GreedyConfig& cfg = {});
EpisodeResult greedy_episode(const Scenario& scenario, const GreedyConfig& cfg = {});

// ---------------------------------------------------------------------------
// MCTS

struct MctsConfig {
  double exploration_c = 1.5;
  int simulations_per_step = 200;
  int rollout_depth = 15;
  std::uint64_t rollout_seed = 0;
  // Final choice among root children: most visited, or highest mean value.
  bool select_by_value = false;

  void validate() const;
};

/// Q + c * sqrt(ln(N) / n); +inf for an unvisited child.
double ucb_score(double q, int n_child, int n_parent, double c);

/// Root statistics of the last search, exposed for tests and diagnostics.
struct MctsRootStats {
  std::vector<int> actions;       // flat indices of expanded root children
  std::vector<int> visit_counts;
  std::vector<double> mean_values;
  int root_visits = 0;
};

class MctsPlanner {
 public:
  explicit MctsPlanner(MctsConfig cfg);

  /// Runs a fresh search from `state`. Uses and advances the planner's
  /// rollout stream; rebuild the planner to replay a decision.
  Action select(const MissionState& state, const Scenario& scenario);

  const MctsRootStats& last_root() const { return root_stats_; }
  const MctsConfig& config() const { return cfg_; }

 private:
  MctsConfig cfg_;
  std::mt19937_64 rng_;
  MctsRootStats root_stats_;
};

/// One decision with a planner seeded from cfg.rollout_seed.
Action mcts_select_action(const MissionState& state, const Scenario& scenario, const MctsConfig& cfg);
EpisodeResult mcts_episode(const Scenario& scenario, const MctsConfig& cfg);

// ---------------------------------------------------------------------------
// Learned policy inference

enum class Activation { Tanh, Identity };

std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view s);

struct DenseLayer {
  int in = 0;
  int out = 0;
  std::vector<double> weights;  // row-major, out x in
  std::vector<double> bias;     // out
  Activation activation = Activation::Identity;
};

struct PolicyWeights {
  std::vector<DenseLayer> layers;
  std::string observation_layout{kObservationLayout};

  int input_size() const { return layers.empty() ? 0 : layers.front().in; }
  int output_size() const { return layers.empty() ? 0 : layers.back().out; }

  /// Dimension chaining and finiteness.
  void validate() const;

  /// Standard shape for a scenario with n debris: obs -> 256 -> 256 -> n+1.
  static PolicyWeights zeros(int n_debris, int hidden = 256);
};

std::vector<double> policy_forward(const PolicyWeights& weights, std::span<const double> obs);

/// Argmax over unmasked logits, lowest index on ties.
int masked_argmax(std::span<const double> logits, const std::vector<bool>& mask);

Action policy_select(const PolicyWeights& weights, const Observation& obs, const std::vector<bool>& mask);
EpisodeResult policy_episode(const Scenario& scenario, const PolicyWeights& weights);

// Weight files: JSON with 17 significant digits, see README for schema.
std::string policy_to_json(const PolicyWeights& weights);
PolicyWeights policy_from_json(std::string_view text);
void write_policy(const PolicyWeights& weights, const std::filesystem::path& path);
PolicyWeights read_policy(const std::filesystem::path& path);

}  // namespace adr
