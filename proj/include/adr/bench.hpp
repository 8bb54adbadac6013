#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "adr/planners.hpp"

namespace adr {

enum class PlannerKind { Greedy, Mcts, Policy };

std::string_view to_string(PlannerKind p);
PlannerKind planner_from_string(std::string_view s);

struct CampaignConfig {
  int n_cases = 100;
  int iterations_per_case = 10;
  std::vector<PlannerKind> planners{PlannerKind::Greedy, PlannerKind::Mcts};
  std::uint64_t base_seed = 0;
  ScenarioConfig scenario;
  GreedyConfig greedy;
  MctsConfig mcts{.simulations_per_step = 50};
  std::filesystem::path policy_weights;
  std::filesystem::path output_dir = "bench_out";
  int threads = 0;  // 0: hardware concurrency

  void validate() const;
};

/// One row of the results table.
struct BenchRow {
  int case_id = 0;
  int iteration = 0;
  PlannerKind planner = PlannerKind::Greedy;
  int debris_visited = 0;
  double total_delta_v_spent = 0.0;
  int refuel_count = 0;
  double elapsed_mission_time = 0.0;
  double planner_wall_clock = 0.0;
  std::string done_reason;  // DoneReason name, or "Error: ..." if the episode threw
  int reward_sum = 0;
};

struct Moments {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double stddev = 0.0;  // population
};

struct PlannerSummary {
  int episodes = 0;
  Moments visits;
  Moments wall_clock;
};

using CampaignSummary = std::map<std::string, PlannerSummary>;

struct CampaignResult {
  std::vector<BenchRow> rows;  // sorted by (case, iteration, planner)
  CampaignSummary summary;
};

/// Planner seed for an iteration: base_seed XOR splitmix64(iteration).
std::uint64_t iteration_seed(std::uint64_t base_seed, int iteration);

CampaignResult run_campaign(const CampaignConfig& cfg);

Moments moments(const std::vector<double>& xs);
CampaignSummary summarize(const std::vector<BenchRow>& rows);

inline constexpr std::string_view kResultsHeader =
    "case,iteration,planner,debris_visited,total_delta_v_spent,refuel_count,"
    "elapsed_mission_time,planner_wall_clock,done_reason,reward_sum";

std::string results_to_csv(const std::vector<BenchRow>& rows);
std::vector<BenchRow> results_from_csv(std::string_view text);
std::string summary_to_json(const CampaignSummary& summary);

/// Writes results.csv, summary.json and series_<planner>.csv into `dir`.
std::vector<std::filesystem::path> write_results(const std::vector<BenchRow>& rows,
                                                 const CampaignSummary& summary,
                                                 const std::filesystem::path& dir);

/// Reads a JSON campaign config file; keys mirror the CLI flags.
void apply_config_file(const std::filesystem::path& path, CampaignConfig& cfg);

}  // namespace adr
