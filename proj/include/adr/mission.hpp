#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "adr/orbital.hpp"

namespace adr {

// Raised when step() is called on a finished episode or with an action
// outside the action space. Distinct from an in-episode violation, which is
// a -1 reward and a terminal state.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Band {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

struct ScenarioConfig {
  int n_debris = 50;
  Band altitude_band{700e3, 800e3};                      // m above earth_radius
  Band inclination_band{deg2rad(90.0), deg2rad(102.0)};  // rad
  Band raan_band{deg2rad(-6.0), deg2rad(6.0)};           // rad, wrapped on sampling
  double station_altitude = 700e3;                       // m
  double station_inclination = deg2rad(96.0);            // rad
  double max_delta_v = 3000.0;                           // m/s
  double max_duration = 604800.0;                        // s
  std::uint64_t seed = 0;
  TransferConfig transfer;
  Constants constants;

  void validate() const;
};

struct Scenario {
  std::vector<OrbitalElements> debris;
  OrbitalElements station;
  ScenarioConfig config;

  int n_debris() const { return static_cast<int>(debris.size()); }
};

/// Draws a scenario with std::mt19937_64 seeded by cfg.seed. Each uniform
/// variate consumes one 64-bit output u and maps it to lo + (hi - lo) * x
/// with x = (u >> 11) * 2^-53. Draw order per debris, in index order:
/// altitude, inclination, raan, arg_periapsis, true_anomaly.
Scenario generate_scenario(const ScenarioConfig& cfg);

enum class DoneReason { Running, AllVisited, FuelExhausted, TimeExhausted, InvalidAction };

std::string_view to_string(DoneReason reason);

struct MissionState {
  OrbitalElements chaser;
  std::vector<bool> visited;
  double remaining_delta_v = 0.0;
  double elapsed_time = 0.0;
  int visits_this_episode = 0;
  int refuel_count = 0;
  bool done = false;
  DoneReason done_reason = DoneReason::Running;

  friend bool operator==(const MissionState&, const MissionState&) = default;
};

/// Index layout of the flat action space: debris 0..n-1, then refuel at n.
struct Action {
  enum class Kind { VisitDebris, Refuel };

  Kind kind = Kind::VisitDebris;
  int index = 0;

  static Action visit(int i) { return {Kind::VisitDebris, i}; }
  static Action refuel() { return {Kind::Refuel, -1}; }

  /// Position in the flat action space of a scenario with n debris.
  int flat(int n_debris) const { return kind == Kind::Refuel ? n_debris : index; }
  static Action from_flat(int flat, int n_debris);

  friend bool operator==(const Action&, const Action&) = default;
};

inline constexpr std::string_view kObservationLayout = "adr-obs-v1";

using Observation = std::vector<double>;

/// n + 2 + 6 + 6n.
constexpr int observation_size(int n_debris) { return n_debris + 2 + 6 + 6 * n_debris; }

struct StepInfo {
  double transfer_delta_v = 0.0;
  double transfer_duration = 0.0;
  DoneReason done_reason = DoneReason::Running;
};

struct StepOutcome {
  Observation observation;
  int reward = 0;
  bool done = false;
  StepInfo info;
};

struct ResetResult {
  MissionState state;
  Observation observation;
};

struct StepResult {
  MissionState state;
  StepOutcome outcome;
};

ResetResult reset(const Scenario& scenario);

std::vector<bool> action_mask(const MissionState& state);

/// Applies one decision. Does not build the observation; see step().
/// Returns the reward and fills info. Throws ContractViolation on a done
/// state or an out-of-range action.
int apply_action(MissionState& state, const Scenario& scenario, const Action& action,
                 StepInfo* info = nullptr);

StepResult step(const MissionState& state, const Scenario& scenario, const Action& action);

Observation observe(const MissionState& state, const Scenario& scenario);

/// Plan the environment would execute for `action` from `state`.
TransferPlan plan_for(const MissionState& state, const Scenario& scenario, const Action& action);

// Scenario files: JSON, doubles written with 17 significant digits.
std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(std::string_view text);
void write_scenario(const Scenario& scenario, const std::filesystem::path& path);
Scenario read_scenario(const std::filesystem::path& path);

/// Convenience wrapper holding one scenario and its live episode.
class MissionEnv {
 public:
  explicit MissionEnv(Scenario scenario);
  explicit MissionEnv(const ScenarioConfig& cfg) : MissionEnv(generate_scenario(cfg)) {}

  const Observation& reset();
  const StepOutcome& step(const Action& action);
  const StepOutcome& step(int flat_action) {
    return step(Action::from_flat(flat_action, scenario_.n_debris()));
  }

  std::vector<bool> action_mask() const { return adr::action_mask(state_); }
  Observation observe() const { return adr::observe(state_, scenario_); }

  const MissionState& state() const { return state_; }
  const Scenario& scenario() const { return scenario_; }
  int n_actions() const { return scenario_.n_debris() + 1; }
  int observation_size() const { return adr::observation_size(scenario_.n_debris()); }

 private:
  Scenario scenario_;
  MissionState state_;
  StepOutcome last_;
};

}  // namespace adr
