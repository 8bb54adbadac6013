#include "adr/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "adr/serialize.hpp"

namespace adr {

std::string_view to_string(PlannerKind p) {
  switch (p) {
    case PlannerKind::Greedy: return "greedy";
    case PlannerKind::Mcts: return "mcts";
    case PlannerKind::Policy: return "policy";
  }
  return "unknown";
}

PlannerKind planner_from_string(std::string_view s) {
  if (s == "greedy") return PlannerKind::Greedy;
  if (s == "mcts") return PlannerKind::Mcts;
  if (s == "policy") return PlannerKind::Policy;
  throw std::invalid_argument("unknown planner '" + std::string(s) + "' (expected greedy, mcts or policy)");
}

void CampaignConfig::validate() const {
  if (n_cases < 1) throw std::invalid_argument("n_cases must be >= 1");
  if (iterations_per_case < 1) throw std::invalid_argument("iterations_per_case must be >= 1");
  if (planners.empty()) throw std::invalid_argument("at least one planner must be selected");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  scenario.validate();
  greedy.validate();
  mcts.validate();
  const bool wants_policy = std::find(planners.begin(), planners.end(), PlannerKind::Policy) != planners.end();
  if (wants_policy) {
    if (policy_weights.empty()) throw std::invalid_argument("policy planner selected but no weight file given");
    if (!std::filesystem::exists(policy_weights))
      throw std::invalid_argument("policy weight file not found: " + policy_weights.string());
  }
}

std::uint64_t iteration_seed(std::uint64_t base_seed, int iteration) {
  // splitmix64 finalizer
  std::uint64_t z = static_cast<std::uint64_t>(iteration) + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z = z ^ (z >> 31);
  return base_seed ^ z;
}

namespace {

BenchRow run_one(const Scenario& scenario, PlannerKind planner, int case_id, int iteration,
                 const CampaignConfig& cfg, const PolicyWeights* weights) {
  BenchRow row;
  row.case_id = case_id;
  row.iteration = iteration;
  row.planner = planner;
  try {
    EpisodeResult r;
    switch (planner) {
      case PlannerKind::Greedy:
        r = greedy_episode(scenario, cfg.greedy);
        break;
      case PlannerKind::Mcts: {
        auto mc = cfg.mcts;
        mc.rollout_seed = iteration_seed(cfg.base_seed, iteration);
        r = mcts_episode(scenario, mc);
        break;
      }
      case PlannerKind::Policy:
        r = policy_episode(scenario, *weights);
        break;
    }
    row.debris_visited = r.debris_visited;
    row.total_delta_v_spent = r.total_delta_v_spent;
    row.refuel_count = r.refuel_count;
    row.elapsed_mission_time = r.elapsed_mission_time;
    row.planner_wall_clock = r.planner_wall_clock;
    row.done_reason = std::string(to_string(r.done_reason));
    row.reward_sum = r.reward_sum;
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    row.done_reason = "Error: " + msg;
  }
  return row;
}

bool row_order(const BenchRow& a, const BenchRow& b) {
  if (a.case_id != b.case_id) return a.case_id < b.case_id;
  if (a.iteration != b.iteration) return a.iteration < b.iteration;
  return static_cast<int>(a.planner) < static_cast<int>(b.planner);
}

}  // namespace

CampaignResult run_campaign(const CampaignConfig& cfg) {
  cfg.validate();
  std::optional<PolicyWeights> weights;
  if (std::find(cfg.planners.begin(), cfg.planners.end(), PlannerKind::Policy) != cfg.planners.end())
    weights = read_policy(cfg.policy_weights);

  const int workers = std::max(1, std::min(cfg.n_cases, cfg.threads > 0
                                                            ? cfg.threads
                                                            : static_cast<int>(std::thread::hardware_concurrency())));
  std::atomic<int> next_case{0};
  std::mutex mu;
  std::vector<BenchRow> rows;
  std::exception_ptr failure;

  auto worker = [&] {
    try {
      for (int c = next_case++; c < cfg.n_cases; c = next_case++) {
        auto sc = cfg.scenario;
        sc.seed = cfg.base_seed + static_cast<std::uint64_t>(c);
        const Scenario scenario = generate_scenario(sc);
        std::vector<BenchRow> local;
        for (int it = 0; it < cfg.iterations_per_case; ++it)
          for (PlannerKind p : cfg.planners)
            local.push_back(run_one(scenario, p, c, it, cfg, weights ? &*weights : nullptr));
        std::lock_guard lock(mu);
        rows.insert(rows.end(), local.begin(), local.end());
      }
    } catch (...) {
      std::lock_guard lock(mu);
      if (!failure) failure = std::current_exception();
    }
  };

  {
    std::vector<std::jthread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(rows.begin(), rows.end(), row_order);
  CampaignResult out;
  out.summary = summarize(rows);
  out.rows = std::move(rows);
  return out;
}

Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  double sum = 0.0;
  m.min = xs.front();
  m.max = xs.front();
  for (double x : xs) {
    sum += x;
    m.min = std::min(m.min, x);
    m.max = std::max(m.max, x);
  }
  m.mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.stddev = std::sqrt(ss / static_cast<double>(xs.size()));
  return m;
}

CampaignSummary summarize(const std::vector<BenchRow>& rows) {
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_planner;
  for (const auto& r : rows) {
    auto& [visits, wall] = by_planner[std::string(to_string(r.planner))];
    visits.push_back(r.debris_visited);
    wall.push_back(r.planner_wall_clock);
  }
  CampaignSummary out;
  for (const auto& [name, series] : by_planner) {
    PlannerSummary s;
    s.episodes = static_cast<int>(series.first.size());
    s.visits = moments(series.first);
    s.wall_clock = moments(series.second);
    out[name] = s;
  }
  return out;
}

std::string results_to_csv(const std::vector<BenchRow>& rows) {
  std::string out(kResultsHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.case_id) + ',' + std::to_string(r.iteration) + ',' +
           std::string(to_string(r.planner)) + ',' + std::to_string(r.debris_visited) + ',' +
           format_double(r.total_delta_v_spent) + ',' + std::to_string(r.refuel_count) + ',' +
           format_double(r.elapsed_mission_time) + ',' + format_double(r.planner_wall_clock) + ',' +
           r.done_reason + ',' + std::to_string(r.reward_sum) + '\n';
  }
  return out;
}

std::vector<BenchRow> results_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader)
    throw std::invalid_argument("results table header does not match the expected columns");
  std::vector<BenchRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 10)
      throw std::invalid_argument("results line " + std::to_string(line_no) + ": expected 10 fields");
    try {
      BenchRow r;
      r.case_id = std::stoi(f[0]);
      r.iteration = std::stoi(f[1]);
      r.planner = planner_from_string(f[2]);
      r.debris_visited = std::stoi(f[3]);
      r.total_delta_v_spent = std::stod(f[4]);
      r.refuel_count = std::stoi(f[5]);
      r.elapsed_mission_time = std::stod(f[6]);
      r.planner_wall_clock = std::stod(f[7]);
      r.done_reason = f[8];
      r.reward_sum = std::stoi(f[9]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error& e) {
      throw std::invalid_argument("results line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

std::string summary_to_json(const CampaignSummary& summary) {
  const auto write_moments = [](JsonWriter& w, const Moments& m) {
    w.begin_object();
    w.field("mean", m.mean);
    w.field("min", m.min);
    w.field("max", m.max);
    w.field("stddev", m.stddev);
    w.end_object();
  };
  JsonWriter w;
  w.begin_object();
  w.key("planners");
  w.begin_object();
  for (const auto& [name, s] : summary) {
    w.key(name);
    w.begin_object();
    w.field("episodes", s.episodes);
    w.key("debris_visited");
    write_moments(w, s.visits);
    w.key("planner_wall_clock");
    write_moments(w, s.wall_clock);
    w.end_object();
  }
  w.end_object();
  w.end_object();
  return w.str();
}

std::vector<std::filesystem::path> write_results(const std::vector<BenchRow>& rows,
                                                 const CampaignSummary& summary,
                                                 const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  const auto emit = [&](const std::filesystem::path& p, const std::string& text) {
    write_text_file(p, text);
    written.push_back(p);
  };
  emit(dir / "results.csv", results_to_csv(rows));
  emit(dir / "summary.json", summary_to_json(summary));

  // Per-planner series: per case, mean over iterations.
  std::map<std::string, std::map<int, std::pair<std::vector<double>, std::vector<double>>>> series;
  for (const auto& r : rows) {
    auto& [v, w] = series[std::string(to_string(r.planner))][r.case_id];
    v.push_back(r.debris_visited);
    w.push_back(r.planner_wall_clock);
  }
  for (const auto& [name, cases] : series) {
    std::string text = "case,mean_debris_visited,mean_planner_wall_clock\n";
    for (const auto& [c, vw] : cases) {
      text += std::to_string(c) + ',' + format_double(moments(vw.first).mean) + ',' +
              format_double(moments(vw.second).mean) + '\n';
    }
    emit(dir / ("series_" + name + ".csv"), text);
  }
  return written;
}

namespace {

void apply_config_json(const nlohmann::json& j, CampaignConfig& cfg) {
  const auto num = [&](const nlohmann::json& obj, const char* key, auto& out) {
    if (obj.contains(key)) out = obj.at(key).get<std::decay_t<decltype(out)>>();
  };
  num(j, "n_cases", cfg.n_cases);
  num(j, "iterations", cfg.iterations_per_case);
  num(j, "base_seed", cfg.base_seed);
  num(j, "threads", cfg.threads);
  if (j.contains("planners")) {
    cfg.planners.clear();
    for (const auto& p : j.at("planners")) cfg.planners.push_back(planner_from_string(p.get<std::string>()));
  }
  if (j.contains("policy_weights")) cfg.policy_weights = j.at("policy_weights").get<std::string>();
  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("scenario")) read_config_overrides(j.at("scenario"), cfg.scenario);
  if (j.contains("greedy")) {
    num(j.at("greedy"), "alpha", cfg.greedy.alpha);
    num(j.at("greedy"), "beta", cfg.greedy.beta);
  }
  if (j.contains("mcts")) {
    const auto& m = j.at("mcts");
    num(m, "exploration_c", cfg.mcts.exploration_c);
    num(m, "simulations_per_step", cfg.mcts.simulations_per_step);
    num(m, "rollout_depth", cfg.mcts.rollout_depth);
    num(m, "select_by_value", cfg.mcts.select_by_value);
  }
}

}  // namespace

void apply_config_file(const std::filesystem::path& path, CampaignConfig& cfg) {
  try {
    apply_config_json(nlohmann::json::parse(read_text_file(path)), cfg);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

}  // namespace adr
