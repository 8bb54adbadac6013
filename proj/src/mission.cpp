#include "adr/mission.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "adr/serialize.hpp"

namespace adr {
namespace {

double wrap_two_pi(double angle) {
  double w = std::fmod(angle, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

  double next(double lo, double hi) {
    const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
  }

 private:
  std::mt19937_64 engine_;
};

void require_band(const Band& b, const char* name) {
  if (!(b.hi > b.lo) || !std::isfinite(b.lo) || !std::isfinite(b.hi))
    throw std::invalid_argument(std::string(name) + " must satisfy lo < hi");
}

void terminate(MissionState& state, DoneReason reason) {
  state.done = true;
  state.done_reason = reason;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (n_debris < 1) throw std::invalid_argument("n_debris must be >= 1");
  require_band(altitude_band, "altitude_band");
  require_band(inclination_band, "inclination_band");
  require_band(raan_band, "raan_band");
  if (!(altitude_band.lo > 0.0)) throw std::invalid_argument("altitude_band must be above the surface");
  if (inclination_band.lo < 0.0 || inclination_band.hi > kPi)
    throw std::invalid_argument("inclination_band must lie within [0, pi]");
  if (!(station_altitude > 0.0)) throw std::invalid_argument("station_altitude must be positive");
  if (!(station_inclination >= 0.0 && station_inclination <= kPi))
    throw std::invalid_argument("station_inclination must lie within [0, pi]");
  if (!(max_delta_v > 0.0)) throw std::invalid_argument("max_delta_v must be positive");
  if (!(max_duration > 0.0)) throw std::invalid_argument("max_duration must be positive");
  transfer.validate();
  constants.validate();
}

Scenario generate_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  Scenario s;
  s.config = cfg;
  s.station.semi_major_axis = cfg.constants.earth_radius + cfg.station_altitude;
  s.station.inclination = cfg.station_inclination;

  UniformStream rng(cfg.seed);
  s.debris.reserve(static_cast<std::size_t>(cfg.n_debris));
  for (int i = 0; i < cfg.n_debris; ++i) {
    OrbitalElements d;
    d.semi_major_axis =
        cfg.constants.earth_radius + rng.next(cfg.altitude_band.lo, cfg.altitude_band.hi);
    d.eccentricity = 0.0;
    d.inclination = rng.next(cfg.inclination_band.lo, cfg.inclination_band.hi);
    d.raan = wrap_two_pi(rng.next(cfg.raan_band.lo, cfg.raan_band.hi));
    d.arg_periapsis = rng.next(0.0, kTwoPi);
    d.true_anomaly = rng.next(0.0, kTwoPi);
    s.debris.push_back(d);
  }
  return s;
}

std::string_view to_string(DoneReason reason) {
  switch (reason) {
    case DoneReason::Running: return "Running";
    case DoneReason::AllVisited: return "AllVisited";
    case DoneReason::FuelExhausted: return "FuelExhausted";
    case DoneReason::TimeExhausted: return "TimeExhausted";
    case DoneReason::InvalidAction: return "InvalidAction";
  }
  return "Unknown";
}

Action Action::from_flat(int flat, int n_debris) {
  if (flat < 0 || flat > n_debris) {
    throw ContractViolation("action index " + std::to_string(flat) + " outside [0, " +
                            std::to_string(n_debris) + "]");
  }
  return flat == n_debris ? refuel() : visit(flat);
}

ResetResult reset(const Scenario& scenario) {
  ResetResult out;
  out.state.chaser = scenario.station;
  out.state.visited.assign(scenario.debris.size(), false);
  out.state.remaining_delta_v = scenario.config.max_delta_v;
  out.observation = observe(out.state, scenario);
  return out;
}

std::vector<bool> action_mask(const MissionState& state) {
  std::vector<bool> mask(state.visited.size() + 1);
  for (std::size_t i = 0; i < state.visited.size(); ++i) mask[i] = !state.visited[i];
  mask.back() = state.visits_this_episode >= 1;
  return mask;
}

TransferPlan plan_for(const MissionState& state, const Scenario& scenario, const Action& action) {
  const auto& cfg = scenario.config;
  if (action.kind == Action::Kind::Refuel) {
    return coelliptic_sequence(state.chaser, scenario.station, cfg.transfer, cfg.constants);
  }
  auto plan = coelliptic_sequence(state.chaser, scenario.debris.at(static_cast<std::size_t>(action.index)),
                                  cfg.transfer, cfg.constants);
  plan.target_index = action.index;
  return plan;
}

int apply_action(MissionState& state, const Scenario& scenario, const Action& action,
                 StepInfo* info) {
  if (state.done) throw ContractViolation("step called on a finished episode");
  const int n = scenario.n_debris();
  const bool is_refuel = action.kind == Action::Kind::Refuel;
  if (!is_refuel && (action.index < 0 || action.index >= n)) {
    throw ContractViolation("debris index " + std::to_string(action.index) + " out of range");
  }

  StepInfo local;
  StepInfo& out = info ? *info : local;
  out = {};

  const bool illegal = is_refuel ? state.visits_this_episode == 0
                                 : static_cast<bool>(state.visited[static_cast<std::size_t>(action.index)]);
  if (illegal) {
    terminate(state, DoneReason::InvalidAction);
    out.done_reason = state.done_reason;
    return -1;
  }

  const auto plan = plan_for(state, scenario, action);
  out.transfer_delta_v = plan.total_delta_v;
  out.transfer_duration = plan.total_duration;

  const auto& cfg = scenario.config;
  if (plan.total_delta_v > state.remaining_delta_v) {
    terminate(state, DoneReason::FuelExhausted);
  } else if (state.elapsed_time + plan.total_duration > cfg.max_duration) {
    terminate(state, DoneReason::TimeExhausted);
  }
  if (state.done) {
    out.done_reason = state.done_reason;
    return -1;
  }

  state.remaining_delta_v -= plan.total_delta_v;
  state.elapsed_time += plan.total_duration;
  int reward = 0;
  if (is_refuel) {
    state.chaser = scenario.station;
    state.remaining_delta_v = cfg.max_delta_v;
    ++state.refuel_count;
  } else {
    state.chaser = scenario.debris[static_cast<std::size_t>(action.index)];
    state.visited[static_cast<std::size_t>(action.index)] = true;
    ++state.visits_this_episode;
    reward = 1;
    if (state.visits_this_episode == n) terminate(state, DoneReason::AllVisited);
  }
  out.done_reason = state.done_reason;
  return reward;
}

StepResult step(const MissionState& state, const Scenario& scenario, const Action& action) {
  StepResult out{state, {}};
  out.outcome.reward = apply_action(out.state, scenario, action, &out.outcome.info);
  out.outcome.done = out.state.done;
  out.outcome.observation = observe(out.state, scenario);
  return out;
}

Observation observe(const MissionState& state, const Scenario& scenario) {
  const auto& cfg = scenario.config;
  const int n = scenario.n_debris();
  Observation obs;
  obs.reserve(static_cast<std::size_t>(observation_size(n)));
  for (bool v : state.visited) obs.push_back(v ? 1.0 : 0.0);
  obs.push_back(state.remaining_delta_v / cfg.max_delta_v);
  obs.push_back((cfg.max_duration - state.elapsed_time) / cfg.max_duration);

  const auto push_elements = [&](const OrbitalElements& e) {
    const double altitude = e.semi_major_axis - cfg.constants.earth_radius;
    obs.push_back((altitude - cfg.altitude_band.lo) / cfg.altitude_band.width());
    obs.push_back(e.eccentricity);
    obs.push_back(e.inclination / kPi);
    obs.push_back(e.raan / kTwoPi);
    obs.push_back(e.arg_periapsis / kTwoPi);
    obs.push_back(e.true_anomaly / kTwoPi);
  };
  push_elements(state.chaser);
  for (const auto& d : scenario.debris) push_elements(d);
  return obs;
}

// ---------------------------------------------------------------------------
// Scenario files

namespace {

void write_elements(JsonWriter& w, const OrbitalElements& e) {
  w.begin_object();
  w.field("semi_major_axis", e.semi_major_axis);
  w.field("eccentricity", e.eccentricity);
  w.field("inclination", e.inclination);
  w.field("raan", e.raan);
  w.field("arg_periapsis", e.arg_periapsis);
  w.field("true_anomaly", e.true_anomaly);
  w.end_object();
}

OrbitalElements read_elements(const nlohmann::json& j) {
  OrbitalElements e;
  e.semi_major_axis = j.at("semi_major_axis").get<double>();
  e.eccentricity = j.at("eccentricity").get<double>();
  e.inclination = j.at("inclination").get<double>();
  e.raan = j.at("raan").get<double>();
  e.arg_periapsis = j.at("arg_periapsis").get<double>();
  e.true_anomaly = j.at("true_anomaly").get<double>();
  return e;
}

}  // namespace

void write_config(JsonWriter& w, const ScenarioConfig& c) {
  w.begin_object();
  w.field("n_debris", c.n_debris);
  w.key("altitude_band");
  w.array({c.altitude_band.lo, c.altitude_band.hi});
  w.key("inclination_band");
  w.array({c.inclination_band.lo, c.inclination_band.hi});
  w.key("raan_band");
  w.array({c.raan_band.lo, c.raan_band.hi});
  w.field("station_altitude", c.station_altitude);
  w.field("station_inclination", c.station_inclination);
  w.field("max_delta_v", c.max_delta_v);
  w.field("max_duration", c.max_duration);
  w.field("seed", c.seed);
  w.key("transfer");
  w.begin_object();
  w.field("first_leg_fraction", c.transfer.first_leg_fraction);
  w.field("terminal_offset", c.transfer.terminal_offset);
  w.field("safety_ellipse_dv", c.transfer.safety_ellipse_dv);
  w.field("safety_ellipse_periods", c.transfer.safety_ellipse_periods);
  w.field("station_keep_periods", c.transfer.station_keep_periods);
  w.field("max_phasing_periods", c.transfer.max_phasing_periods);
  w.end_object();
  w.key("constants");
  w.begin_object();
  w.field("mu", c.constants.mu);
  w.field("earth_radius", c.constants.earth_radius);
  w.end_object();
  w.end_object();
}

void read_config_overrides(const nlohmann::json& j, ScenarioConfig& c) {
  const auto band = [&](const char* key, Band& b) {
    if (!j.contains(key)) return;
    const auto& a = j.at(key);
    if (!a.is_array() || a.size() != 2) throw std::invalid_argument(std::string(key) + " must be [lo, hi]");
    b = {a[0].get<double>(), a[1].get<double>()};
  };
  const auto num = [&](const nlohmann::json& obj, const char* key, auto& out) {
    if (obj.contains(key)) out = obj.at(key).get<std::decay_t<decltype(out)>>();
  };
  num(j, "n_debris", c.n_debris);
  band("altitude_band", c.altitude_band);
  band("inclination_band", c.inclination_band);
  band("raan_band", c.raan_band);
  num(j, "station_altitude", c.station_altitude);
  num(j, "station_inclination", c.station_inclination);
  num(j, "max_delta_v", c.max_delta_v);
  num(j, "max_duration", c.max_duration);
  num(j, "seed", c.seed);
  if (j.contains("transfer")) {
    const auto& t = j.at("transfer");
    num(t, "first_leg_fraction", c.transfer.first_leg_fraction);
    num(t, "terminal_offset", c.transfer.terminal_offset);
    num(t, "safety_ellipse_dv", c.transfer.safety_ellipse_dv);
    num(t, "safety_ellipse_periods", c.transfer.safety_ellipse_periods);
    num(t, "station_keep_periods", c.transfer.station_keep_periods);
    num(t, "max_phasing_periods", c.transfer.max_phasing_periods);
  }
  if (j.contains("constants")) {
    const auto& k = j.at("constants");
    num(k, "mu", c.constants.mu);
    num(k, "earth_radius", c.constants.earth_radius);
  }
}

std::string scenario_to_json(const Scenario& scenario) {
  JsonWriter w;
  w.begin_object();
  w.field("format", std::string_view("adr-scenario-v1"));
  w.key("config");
  write_config(w, scenario.config);
  w.key("station");
  write_elements(w, scenario.station);
  w.key("debris");
  w.begin_array();
  for (const auto& d : scenario.debris) write_elements(w, d);
  w.end_array();
  w.end_object();
  return w.str();
}

Scenario scenario_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  if (j.value("format", std::string{}) != "adr-scenario-v1")
    throw std::invalid_argument("not an adr-scenario-v1 document");
  Scenario s;
  read_config_overrides(j.at("config"), s.config);
  s.station = read_elements(j.at("station"));
  for (const auto& d : j.at("debris")) s.debris.push_back(read_elements(d));
  if (s.n_debris() != s.config.n_debris)
    throw std::invalid_argument("debris count does not match config.n_debris");
  s.config.validate();
  return s;
}

void write_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  write_text_file(path, scenario_to_json(scenario));
}

Scenario read_scenario(const std::filesystem::path& path) {
  return scenario_from_json(read_text_file(path));
}

// ---------------------------------------------------------------------------

MissionEnv::MissionEnv(Scenario scenario) : scenario_(std::move(scenario)) { reset(); }

const Observation& MissionEnv::reset() {
  auto r = adr::reset(scenario_);
  state_ = std::move(r.state);
  last_ = {};
  last_.observation = std::move(r.observation);
  return last_.observation;
}

const StepOutcome& MissionEnv::step(const Action& action) {
  auto r = adr::step(state_, scenario_, action);
  state_ = std::move(r.state);
  last_ = std::move(r.outcome);
  return last_;
}

}  // namespace adr
