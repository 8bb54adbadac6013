#include <cmath>
#include <limits>

#include "adr/planners.hpp"

namespace adr {

void MctsConfig::validate() const {
  if (!(exploration_c > 0.0)) throw std::invalid_argument("exploration_c must be positive");
  if (simulations_per_step < 1) throw std::invalid_argument("simulations_per_step must be >= 1");
  if (rollout_depth < 1) throw std::invalid_argument("rollout_depth must be >= 1");
}

double ucb_score(double q, int n_child, int n_parent, double c) {
  if (n_child == 0) return std::numeric_limits<double>::infinity();
  return q + c * std::sqrt(std::log(static_cast<double>(n_parent)) / n_child);
}

namespace {

std::vector<int> legal_actions(const MissionState& state) {
  const auto mask = action_mask(state);
  std::vector<int> out;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out.push_back(static_cast<int>(i));
  return out;
}

struct Node {
  MissionState state;
  int action = -1;    // flat action that led here
  int reward = 0;     // reward collected on that edge
  int depth = 0;
  int parent = -1;
  std::vector<int> children;
  std::vector<int> untried;
  int visits = 0;
  double value_sum = 0.0;

  double mean() const { return visits > 0 ? value_sum / visits : 0.0; }
};

// Tree stored in a flat arena; indices stay valid while it grows.
class SearchTree {
 public:
  SearchTree(const MissionState& root, const Scenario& scenario, const MctsConfig& cfg,
             std::mt19937_64& rng)
      : scenario_(scenario), cfg_(cfg), rng_(rng), n_(scenario.n_debris()) {
    Node r;
    r.state = root;
    r.untried = legal_actions(root);
    nodes_.push_back(std::move(r));
  }

  void simulate() {
    int current = 0;
    // Selection.
    while (!nodes_[current].state.done && nodes_[current].untried.empty() &&
           !nodes_[current].children.empty()) {
      current = best_child(current);
    }
    // Expansion.
    Node& leaf = nodes_[current];
    if (!leaf.state.done && !leaf.untried.empty() && leaf.depth < cfg_.rollout_depth) {
      current = expand(current);
    }
    // Rollout from the reached node, bounded by the total simulated horizon.
    double value = rollout(nodes_[current].state, cfg_.rollout_depth - nodes_[current].depth);
    // Backpropagation: each node's value counts rewards from its own edge on.
    for (int i = current; i >= 0; i = nodes_[i].parent) {
      value += nodes_[i].reward;
      nodes_[i].visits += 1;
      nodes_[i].value_sum += value;
    }
  }

  const Node& root() const { return nodes_.front(); }
  const Node& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }

 private:
  int best_child(int parent) const {
    const Node& p = nodes_[parent];
    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    int best_action = std::numeric_limits<int>::max();
    for (int ci : p.children) {
      const Node& c = nodes_[ci];
      const double score = ucb_score(c.mean(), c.visits, p.visits, cfg_.exploration_c);
      if (score > best_score || (score == best_score && c.action < best_action)) {
        best = ci;
        best_score = score;
        best_action = c.action;
      }
    }
    return best;
  }

  int expand(int parent) {
    auto& untried = nodes_[parent].untried;
    std::uniform_int_distribution<std::size_t> pick(0, untried.size() - 1);
    const std::size_t k = pick(rng_);
    const int action = untried[k];
    untried.erase(untried.begin() + static_cast<std::ptrdiff_t>(k));

    Node child;
    child.state = nodes_[parent].state;
    child.action = action;
    child.reward = apply_action(child.state, scenario_, Action::from_flat(action, n_));
    child.depth = nodes_[parent].depth + 1;
    child.parent = parent;
    if (!child.state.done) child.untried = legal_actions(child.state);
    nodes_.push_back(std::move(child));
    const int index = static_cast<int>(nodes_.size()) - 1;
    nodes_[parent].children.push_back(index);
    return index;
  }

  double rollout(MissionState state, int steps) {
    double total = 0.0;
    std::vector<int> legal;
    for (int s = 0; s < steps && !state.done; ++s) {
      legal = legal_actions(state);
      std::uniform_int_distribution<std::size_t> pick(0, legal.size() - 1);
      total += apply_action(state, scenario_, Action::from_flat(legal[pick(rng_)], n_));
    }
    return total;
  }

  const Scenario& scenario_;
  const MctsConfig& cfg_;
  std::mt19937_64& rng_;
  int n_;
  std::vector<Node> nodes_;
};

}  // namespace

MctsPlanner::MctsPlanner(MctsConfig cfg) : cfg_(cfg), rng_(cfg.rollout_seed) { cfg_.validate(); }

Action MctsPlanner::select(const MissionState& state, const Scenario& scenario) {
  if (state.done) throw NoLegalAction("mcts select called on a finished episode");
  const int n = scenario.n_debris();
  root_stats_ = {};

  const auto legal = legal_actions(state);
  if (legal.size() == 1) return Action::from_flat(legal.front(), n);

  SearchTree tree(state, scenario, cfg_, rng_);
  for (int i = 0; i < cfg_.simulations_per_step; ++i) tree.simulate();

  const Node& root = tree.root();
  root_stats_.root_visits = root.visits;
  // Ordering: primary key (visits or mean), then the other, then lowest index.
  int best_action = -1;
  double best_primary = -std::numeric_limits<double>::infinity();
  double best_secondary = -std::numeric_limits<double>::infinity();
  for (int ci : root.children) {
    const Node& c = tree.node(ci);
    root_stats_.actions.push_back(c.action);
    root_stats_.visit_counts.push_back(c.visits);
    root_stats_.mean_values.push_back(c.mean());
    const double visits = static_cast<double>(c.visits);
    const double primary = cfg_.select_by_value ? c.mean() : visits;
    const double secondary = cfg_.select_by_value ? visits : c.mean();
    const bool better =
        primary > best_primary ||
        (primary == best_primary &&
         (secondary > best_secondary || (secondary == best_secondary && c.action < best_action)));
    if (better) {
      best_primary = primary;
      best_secondary = secondary;
      best_action = c.action;
    }
  }
  return Action::from_flat(best_action, n);
}

Action mcts_select_action(const MissionState& state, const Scenario& scenario, const MctsConfig& cfg) {
  MctsPlanner planner(cfg);
  return planner.select(state, scenario);
}

EpisodeResult mcts_episode(const Scenario& scenario, const MctsConfig& cfg) {
  MctsPlanner planner(cfg);
  return run_episode(scenario, [&](const MissionState& state) { return planner.select(state, scenario); });
}

}  // namespace adr
