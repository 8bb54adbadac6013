import math

import numpy as np
import pytest

import adr_planner as adr


def test_maneuver_functions():
    r1, r2 = 7.078137e6, 7.178137e6
    h = adr.hohmann(r1, r2)
    mu = adr.Constants().mu
    a = 0.5 * (r1 + r2)
    assert h.dv1 == pytest.approx(math.sqrt(mu * (2 / r1 - 1 / a)) - math.sqrt(mu / r1), rel=1e-9)
    assert h.transfer_time == pytest.approx(math.pi * math.sqrt(a**3 / mu), rel=1e-12)
    assert adr.plane_change_dv(7500.0, math.pi / 3) == pytest.approx(7500.0)
    with pytest.raises(ValueError):
        adr.circular_velocity(1.0)


def test_reset_step_observe():
    sc = adr.generate_scenario(adr.ScenarioConfig())
    state, obs = adr.reset(sc)
    assert obs.shape == (358,)
    assert obs[50] == 1.0 and obs[51] == 1.0
    mask = adr.action_mask(state)
    assert mask.dtype == np.bool_ and mask.shape == (51,)
    assert mask[:50].all() and not mask[50]

    state2, obs2, reward, done, info = adr.step(state, sc, 3)
    assert reward == 1 and not done
    assert obs2[3] == 1.0
    assert info["transfer_delta_v"] > 0
    assert state.visits_this_episode == 0 and state2.visits_this_episode == 1
    assert np.array_equal(adr.observe(state2, sc), obs2)

    _, _, reward, done, info = adr.step(state2, sc, adr.Action.visit(3))
    assert reward == -1 and done and info["done_reason"] == "InvalidAction"


def test_env_wrapper_and_contract():
    cfg = adr.ScenarioConfig()
    cfg.n_debris = 4
    cfg.seed = 11
    env = adr.MissionEnv(cfg)
    assert env.n_actions == 5
    assert env.reset().shape == (env.observation_size,)
    _, reward, _, _ = env.step(0)
    assert reward == 1
    with pytest.raises(adr.ContractViolation):
        env.step(17)


def test_scenario_round_trip(tmp_path):
    cfg = adr.ScenarioConfig()
    cfg.n_debris = 5
    cfg.seed = 2
    sc = adr.generate_scenario(cfg)
    path = tmp_path / "s.json"
    adr.write_scenario(sc, path)
    back = adr.read_scenario(path)
    assert back.debris == sc.debris
    assert adr.Scenario.from_json(sc.to_json()).to_json() == sc.to_json()


def test_planners():
    sc = adr.generate_scenario(adr.ScenarioConfig())
    g = adr.greedy_episode(sc)
    assert g.debris_visited > 0
    assert g.reward_sum <= g.debris_visited

    m = adr.mcts_episode(sc, adr.MctsConfig(simulations_per_step=20, rollout_seed=1))
    assert m.done_reason != adr.DoneReason.Running

    w = adr.PolicyWeights.zeros(50, hidden=16)
    logits = adr.policy_forward(w, np.zeros(358))
    assert logits.shape == (51,) and not logits.any()
    mask = np.zeros(51, dtype=bool)
    mask[12] = True
    assert adr.policy_select(w, np.zeros(358), mask) == adr.Action.visit(12)
    assert adr.masked_argmax(np.arange(51.0), np.ones(51, dtype=bool)) == 50


def test_custom_decision_function():
    cfg = adr.ScenarioConfig()
    cfg.n_debris = 6
    sc = adr.generate_scenario(cfg)

    def first_legal(state):
        return adr.Action.from_flat(int(np.argmax(adr.action_mask(state))), sc.n_debris)

    r = adr.run_episode(sc, first_legal)
    assert r.actions[0] == 0
