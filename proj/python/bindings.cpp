#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "adr/mission.hpp"
#include "adr/orbital.hpp"
#include "adr/planners.hpp"

namespace py = pybind11;
using namespace adr;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::array_t<bool> to_array(const std::vector<bool>& v) {
  py::array_t<bool> out(static_cast<py::ssize_t>(v.size()));
  auto* p = out.mutable_data();
  for (std::size_t i = 0; i < v.size(); ++i) p[i] = v[i];
  return out;
}

std::vector<double> from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  return std::vector<double>(a.data(), a.data() + a.size());
}

std::vector<bool> mask_from(const py::array_t<bool, py::array::c_style | py::array::forcecast>& a) {
  return std::vector<bool>(a.data(), a.data() + a.size());
}

py::dict info_dict(const StepInfo& info) {
  py::dict d;
  d["transfer_delta_v"] = info.transfer_delta_v;
  d["transfer_duration"] = info.transfer_duration;
  d["done_reason"] = std::string(to_string(info.done_reason));
  return d;
}

Action action_from(const py::object& a, int n) {
  if (py::isinstance<Action>(a)) return a.cast<Action>();
  return Action::from_flat(a.cast<int>(), n);
}

}  // namespace

PYBIND11_MODULE(_adr, m) {
  m.doc() = "Multi-target debris removal: orbital maneuvers, mission environment and planners";

  py::register_exception<DegenerateGeometryError>(m, "DegenerateGeometryError", PyExc_ArithmeticError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_RuntimeError);
  py::register_exception<NoLegalAction>(m, "NoLegalAction", PyExc_RuntimeError);

  // -------------------------------------------------------------------------
  // Orbital mechanics

  py::class_<Constants>(m, "Constants")
      .def(py::init<>())
      .def_readwrite("mu", &Constants::mu)
      .def_readwrite("earth_radius", &Constants::earth_radius);

  py::class_<OrbitalElements>(m, "OrbitalElements")
      .def(py::init<>())
      .def(py::init([](double a, double e, double i, double raan, double argp, double nu) {
             return OrbitalElements{a, e, i, raan, argp, nu};
           }),
           py::arg("semi_major_axis"), py::arg("eccentricity") = 0.0, py::arg("inclination") = 0.0,
           py::arg("raan") = 0.0, py::arg("arg_periapsis") = 0.0, py::arg("true_anomaly") = 0.0)
      .def_readwrite("semi_major_axis", &OrbitalElements::semi_major_axis)
      .def_readwrite("eccentricity", &OrbitalElements::eccentricity)
      .def_readwrite("inclination", &OrbitalElements::inclination)
      .def_readwrite("raan", &OrbitalElements::raan)
      .def_readwrite("arg_periapsis", &OrbitalElements::arg_periapsis)
      .def_readwrite("true_anomaly", &OrbitalElements::true_anomaly)
      .def("argument_of_latitude", &OrbitalElements::argument_of_latitude)
      .def(py::self == py::self)
      .def("__repr__", [](const OrbitalElements& e) {
        return "OrbitalElements(a=" + std::to_string(e.semi_major_axis) + ", i=" + std::to_string(e.inclination) +
               ", raan=" + std::to_string(e.raan) + ")";
      });

  py::class_<TransferConfig>(m, "TransferConfig")
      .def(py::init<>())
      .def_readwrite("first_leg_fraction", &TransferConfig::first_leg_fraction)
      .def_readwrite("terminal_offset", &TransferConfig::terminal_offset)
      .def_readwrite("safety_ellipse_dv", &TransferConfig::safety_ellipse_dv)
      .def_readwrite("safety_ellipse_periods", &TransferConfig::safety_ellipse_periods)
      .def_readwrite("station_keep_periods", &TransferConfig::station_keep_periods)
      .def_readwrite("max_phasing_periods", &TransferConfig::max_phasing_periods);

  py::class_<HohmannResult>(m, "HohmannResult")
      .def_readonly("dv1", &HohmannResult::dv1)
      .def_readonly("dv2", &HohmannResult::dv2)
      .def_readonly("transfer_time", &HohmannResult::transfer_time)
      .def("total", &HohmannResult::total);

  py::class_<Burn>(m, "Burn")
      .def_readonly("delta_v", &Burn::delta_v)
      .def_readonly("leg_duration", &Burn::leg_duration)
      .def_property_readonly("label", [](const Burn& b) { return std::string(to_string(b.label)); });

  py::class_<TransferPlan>(m, "TransferPlan")
      .def_readonly("burns", &TransferPlan::burns)
      .def_readonly("total_delta_v", &TransferPlan::total_delta_v)
      .def_readonly("total_duration", &TransferPlan::total_duration)
      .def_readonly("target_index", &TransferPlan::target_index);

  m.def("circular_velocity", &circular_velocity, py::arg("radius"), py::arg("constants") = Constants{});
  m.def("orbital_period", &orbital_period, py::arg("semi_major_axis"), py::arg("constants") = Constants{});
  m.def("hohmann", &hohmann, py::arg("r1"), py::arg("r2"), py::arg("constants") = Constants{});
  m.def("plane_change_dv", &plane_change_dv, py::arg("speed"), py::arg("angle"));
  m.def("plane_angle", &plane_angle, py::arg("a"), py::arg("b"));
  m.def("rendezvous_lead_angle", &rendezvous_lead_angle, py::arg("from_radius"), py::arg("target_radius"));
  m.def("synodic_period", &synodic_period, py::arg("r1"), py::arg("r2"), py::arg("constants") = Constants{});
  m.def("phasing_wait", &phasing_wait, py::arg("chaser"), py::arg("target"), py::arg("coelliptic_radius"),
        py::arg("max_phasing_periods") = 0.25, py::arg("constants") = Constants{});
  m.def("coelliptic_sequence", &coelliptic_sequence, py::arg("chaser"), py::arg("target"),
        py::arg("config") = TransferConfig{}, py::arg("constants") = Constants{});

  // -------------------------------------------------------------------------
  // Mission environment

  py::class_<Band>(m, "Band")
      .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
      .def_readwrite("lo", &Band::lo)
      .def_readwrite("hi", &Band::hi);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("n_debris", &ScenarioConfig::n_debris)
      .def_readwrite("altitude_band", &ScenarioConfig::altitude_band)
      .def_readwrite("inclination_band", &ScenarioConfig::inclination_band)
      .def_readwrite("raan_band", &ScenarioConfig::raan_band)
      .def_readwrite("station_altitude", &ScenarioConfig::station_altitude)
      .def_readwrite("station_inclination", &ScenarioConfig::station_inclination)
      .def_readwrite("max_delta_v", &ScenarioConfig::max_delta_v)
      .def_readwrite("max_duration", &ScenarioConfig::max_duration)
      .def_readwrite("seed", &ScenarioConfig::seed)
      .def_readwrite("transfer", &ScenarioConfig::transfer)
      .def_readwrite("constants", &ScenarioConfig::constants);

  py::class_<Scenario>(m, "Scenario")
      .def_readwrite("debris", &Scenario::debris)
      .def_readwrite("station", &Scenario::station)
      .def_readwrite("config", &Scenario::config)
      .def_property_readonly("n_debris", &Scenario::n_debris)
      .def("to_json", &scenario_to_json)
      .def_static("from_json", [](const std::string& s) { return scenario_from_json(s); });

  py::enum_<DoneReason>(m, "DoneReason")
      .value("Running", DoneReason::Running)
      .value("AllVisited", DoneReason::AllVisited)
      .value("FuelExhausted", DoneReason::FuelExhausted)
      .value("TimeExhausted", DoneReason::TimeExhausted)
      .value("InvalidAction", DoneReason::InvalidAction);

  py::class_<MissionState>(m, "MissionState")
      .def_readonly("chaser", &MissionState::chaser)
      .def_readonly("visited", &MissionState::visited)
      .def_readonly("remaining_delta_v", &MissionState::remaining_delta_v)
      .def_readonly("elapsed_time", &MissionState::elapsed_time)
      .def_readonly("visits_this_episode", &MissionState::visits_this_episode)
      .def_readonly("refuel_count", &MissionState::refuel_count)
      .def_readonly("done", &MissionState::done)
      .def_readonly("done_reason", &MissionState::done_reason)
      .def(py::self == py::self);

  py::class_<Action>(m, "Action")
      .def_static("visit", &Action::visit, py::arg("index"))
      .def_static("refuel", &Action::refuel)
      .def_static("from_flat", &Action::from_flat, py::arg("flat"), py::arg("n_debris"))
      .def("flat", &Action::flat, py::arg("n_debris"))
      .def_property_readonly("is_refuel", [](const Action& a) { return a.kind == Action::Kind::Refuel; })
      .def_readonly("index", &Action::index)
      .def(py::self == py::self)
      .def("__repr__", [](const Action& a) {
        return a.kind == Action::Kind::Refuel ? std::string("Action.refuel()")
                                              : "Action.visit(" + std::to_string(a.index) + ")";
      });

  m.attr("OBSERVATION_LAYOUT") = std::string(kObservationLayout);
  m.def("observation_size", &observation_size, py::arg("n_debris"));
  m.def("generate_scenario", &generate_scenario, py::arg("config") = ScenarioConfig{});
  m.def("reset", [](const Scenario& sc) {
    auto r = reset(sc);
    return py::make_tuple(r.state, to_array(r.observation));
  });
  m.def("action_mask", [](const MissionState& s) { return to_array(action_mask(s)); });
  m.def("observe", [](const MissionState& s, const Scenario& sc) { return to_array(observe(s, sc)); });
  m.def(
      "step",
      [](const MissionState& s, const Scenario& sc, const py::object& action) {
        auto r = step(s, sc, action_from(action, sc.n_debris()));
        return py::make_tuple(r.state, to_array(r.outcome.observation), r.outcome.reward, r.outcome.done,
                              info_dict(r.outcome.info));
      },
      py::arg("state"), py::arg("scenario"), py::arg("action"),
      "Returns (state, observation, reward, done, info). The input state is not modified.");
  m.def(
      "plan_for",
      [](const MissionState& s, const Scenario& sc, const py::object& action) {
        return plan_for(s, sc, action_from(action, sc.n_debris()));
      },
      py::arg("state"), py::arg("scenario"), py::arg("action"));
  m.def("write_scenario", &write_scenario, py::arg("scenario"), py::arg("path"));
  m.def("read_scenario", &read_scenario, py::arg("path"));

  py::class_<MissionEnv>(m, "MissionEnv")
      .def(py::init<Scenario>(), py::arg("scenario"))
      .def(py::init<const ScenarioConfig&>(), py::arg("config"))
      .def("reset", [](MissionEnv& e) { return to_array(e.reset()); })
      .def(
          "step",
          [](MissionEnv& e, const py::object& action) {
            const auto& out = e.step(action_from(action, e.scenario().n_debris()));
            return py::make_tuple(to_array(out.observation), out.reward, out.done, info_dict(out.info));
          },
          py::arg("action"), "Returns (observation, reward, done, info).")
      .def("action_mask", [](const MissionEnv& e) { return to_array(e.action_mask()); })
      .def("observe", [](const MissionEnv& e) { return to_array(e.observe()); })
      .def_property_readonly("state", &MissionEnv::state)
      .def_property_readonly("scenario", &MissionEnv::scenario)
      .def_property_readonly("n_actions", &MissionEnv::n_actions)
      .def_property_readonly("observation_size", &MissionEnv::observation_size);

  // -------------------------------------------------------------------------
  // Planners

  py::class_<EpisodeResult>(m, "EpisodeResult")
      .def_readonly("debris_visited", &EpisodeResult::debris_visited)
      .def_readonly("total_delta_v_spent", &EpisodeResult::total_delta_v_spent)
      .def_readonly("refuel_count", &EpisodeResult::refuel_count)
      .def_readonly("elapsed_mission_time", &EpisodeResult::elapsed_mission_time)
      .def_readonly("planner_wall_clock", &EpisodeResult::planner_wall_clock)
      .def_readonly("done_reason", &EpisodeResult::done_reason)
      .def_readonly("reward_sum", &EpisodeResult::reward_sum)
      .def_readonly("actions", &EpisodeResult::actions);

  py::class_<GreedyConfig>(m, "GreedyConfig")
      .def(py::init([](double alpha, double beta) { return GreedyConfig{alpha, beta}; }), py::arg("alpha") = 1.0,
           py::arg("beta") = 0.0)
      .def_readwrite("alpha", &GreedyConfig::alpha)
      .def_readwrite("beta", &GreedyConfig::beta);

  py::class_<MctsConfig>(m, "MctsConfig")
      .def(py::init([](double c, int sims, int depth, std::uint64_t seed, bool by_value) {
             return MctsConfig{c, sims, depth, seed, by_value};
           }),
           py::arg("exploration_c") = 1.5, py::arg("simulations_per_step") = 200, py::arg("rollout_depth") = 15,
           py::arg("rollout_seed") = 0, py::arg("select_by_value") = false)
      .def_readwrite("exploration_c", &MctsConfig::exploration_c)
      .def_readwrite("simulations_per_step", &MctsConfig::simulations_per_step)
      .def_readwrite("rollout_depth", &MctsConfig::rollout_depth)
      .def_readwrite("rollout_seed", &MctsConfig::rollout_seed)
      .def_readwrite("select_by_value", &MctsConfig::select_by_value);

  m.def("run_episode", &run_episode, py::arg("scenario"), py::arg("decide"));
  m.def("greedy_select", &greedy_select, py::arg("state"), py::arg("scenario"), py::arg("config") = GreedyConfig{});
  m.def("greedy_episode", &greedy_episode, py::arg("scenario"), py::arg("config") = GreedyConfig{});
  m.def("ucb_score", &ucb_score, py::arg("q"), py::arg("n_child"), py::arg("n_parent"), py::arg("c"));
  m.def("mcts_select_action", &mcts_select_action, py::arg("state"), py::arg("scenario"),
        py::arg("config") = MctsConfig{});
  m.def("mcts_episode", &mcts_episode, py::arg("scenario"), py::arg("config") = MctsConfig{});

  py::class_<PolicyWeights>(m, "PolicyWeights")
      .def_static("zeros", &PolicyWeights::zeros, py::arg("n_debris"), py::arg("hidden") = 256)
      .def_property_readonly("input_size", &PolicyWeights::input_size)
      .def_property_readonly("output_size", &PolicyWeights::output_size)
      .def("to_json", &policy_to_json)
      .def_static("from_json", [](const std::string& s) { return policy_from_json(s); });

  m.def("read_policy", &read_policy, py::arg("path"));
  m.def("write_policy", &write_policy, py::arg("weights"), py::arg("path"));
  m.def(
      "policy_forward",
      [](const PolicyWeights& w, const py::array_t<double, py::array::c_style | py::array::forcecast>& obs) {
        return to_array(policy_forward(w, from_array(obs)));
      },
      py::arg("weights"), py::arg("observation"));
  m.def(
      "masked_argmax",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& logits,
         const py::array_t<bool, py::array::c_style | py::array::forcecast>& mask) {
        return masked_argmax(from_array(logits), mask_from(mask));
      },
      py::arg("logits"), py::arg("mask"));
  m.def(
      "policy_select",
      [](const PolicyWeights& w, const py::array_t<double, py::array::c_style | py::array::forcecast>& obs,
         const py::array_t<bool, py::array::c_style | py::array::forcecast>& mask) {
        return policy_select(w, from_array(obs), mask_from(mask));
      },
      py::arg("weights"), py::arg("observation"), py::arg("mask"));
  m.def("policy_episode", &policy_episode, py::arg("scenario"), py::arg("weights"));
}
