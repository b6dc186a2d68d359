import math
import random
from collections import Counter

import numpy as np
import pytest

from phieb.agent import (
    AgentConfig,
    ConstantEpsilon,
    LinearEpsilon,
    begin_episode,
    default_epsilon,
    epsilon_at,
    load_checkpoint,
    new_agent,
    run_episode,
    save_checkpoint,
    select_boltzmann,
    select_egreedy,
    train_step,
)
from phieb.bonus import BonusConfig
from phieb.envs import Env, SparseChain
from phieb.features import FeatureVector

DRAWS = 100_000


def freqs(draw, n):
    counts = Counter(draw() for _ in range(DRAWS))
    return [counts[a] / DRAWS for a in range(n)]


class OneShot(Env):
    """Terminates on the first step with reward 7."""
    num_actions = 2
    step_cap = 10

    def _reset(self):
        pass

    def _step(self, action):
        return 7.0, True

    def features_tabular(self):
        return FeatureVector((0,))


class Forever(OneShot):
    def _step(self, action):
        return 0.0, False


class TwoState(Env):
    """Action 1 toggles the state, action 0 stays; arriving in state 1 pays 1."""
    num_actions = 2
    step_cap = 100

    def _reset(self):
        self.s = 0

    def _step(self, action):
        if action == 1:
            self.s = 1 - self.s
        return (1.0 if action == 1 and self.s == 1 else 0.0), False

    def features_tabular(self):
        return FeatureVector((self.s,))


# -- action selection ----------------------------------------------------


def test_egreedy_examples():
    rng = random.Random(0)
    assert {select_egreedy([1, 2, 3], 0.0, rng) for _ in range(1000)} == {2}
    for f in freqs(lambda: select_egreedy([1, 2, 3], 1.0, rng), 3):
        assert abs(f - 1 / 3) < 0.02
    for f in freqs(lambda: select_egreedy([2, 2], 0.0, rng), 2):
        assert abs(f - 0.5) < 0.02


def test_boltzmann_examples():
    rng = random.Random(1)
    for f in freqs(lambda: select_boltzmann([0, 0], [0, 0], 1.0, rng), 2):
        assert abs(f - 0.5) < 0.01
    p0 = math.e / (math.e + 1)
    f = freqs(lambda: select_boltzmann([0, 0], [1, 0], 1.0, rng), 2)
    assert abs(f[0] - p0) < 0.01 and abs(f[1] - (1 - p0)) < 0.01
    assert select_boltzmann([5, 0], [0, 4], 0.0, rng) == 0


def test_boltzmann_handles_large_values():
    rng = random.Random(2)
    assert select_boltzmann([0, 0], [1000.0, 0.0], 1.0, rng) == 0


def test_selection_rejects_empty():
    with pytest.raises(ValueError):
        select_egreedy([], 0.1, random.Random())


# -- epsilon schedules ---------------------------------------------------


@pytest.mark.parametrize("step,eps", [(0, 1.0), (100, 0.1), (50, 0.55), (1000, 0.1)])
def test_linear_epsilon_examples(step, eps):
    assert epsilon_at(LinearEpsilon(1.0, 0.1, 100), step) == pytest.approx(eps, abs=1e-12)


def test_schedule_is_nonincreasing_and_bounded():
    sched = default_epsilon("split", 5000)
    values = [epsilon_at(sched, s) for s in range(0, 6000, 7)]
    assert all(b <= a for a, b in zip(values, values[1:]))
    assert min(values) == pytest.approx(0.01) and max(values) == 1.0
    assert epsilon_at(default_epsilon("baseline", 5000), 123) == 0.1


def test_config_validation():
    with pytest.raises(ValueError):
        AgentConfig(architecture="baseline", selection="boltzmann")
    with pytest.raises(ValueError):
        AgentConfig(architecture="dual")  # type: ignore[arg-type]
    with pytest.raises(ValueError):
        LinearEpsilon(1.0, 0.1, 0)


# -- learning ------------------------------------------------------------


def test_baseline_matches_tabular_sarsa0():
    cfg = AgentConfig(alpha=0.5, gamma=0.9, lam=0.0, epsilon=ConstantEpsilon(0.5),
                      architecture="baseline")
    env = TwoState(seed=0)
    state = new_agent(cfg, 2, seed=4)
    begin_episode(state, env.reset(), cfg)
    Q = np.zeros((2, 2))
    s = 0
    for _ in range(10):
        out = train_step(state, env, cfg)
        s2 = env.s
        delta = out.reward + 0.9 * Q[s2, out.next_action] - Q[s, out.action]
        Q[s, out.action] += 0.5 * delta
        s = s2
        got = [[state.q_extrinsic.weight(a, st) for a in range(2)] for st in range(2)]
        assert np.max(np.abs(np.array(got) - Q)) < 1e-12


def action_sequence(arch, selection="egreedy", steps=300):
    cfg = AgentConfig(alpha=0.1, bonus=BonusConfig(beta=0.0), epsilon=ConstantEpsilon(0.0),
                      selection=selection, architecture=arch)
    env = SparseChain(length=6, feature_map="factored", seed=3)
    state = new_agent(cfg, 2, seed=9)
    actions = []
    while len(actions) < steps:
        begin_episode(state, env.reset(), cfg)
        for _ in range(40):
            out = train_step(state, env, cfg)
            actions.append(out.action)
            if out.terminal:
                break
        state.q_extrinsic.clear_traces()
        if state.q_intrinsic is not None:
            state.q_intrinsic.clear_traces()
    return actions, state


def test_zero_beta_architectures_agree():
    base, _ = action_sequence("baseline")
    split, s_state = action_sequence("split")
    combined, _ = action_sequence("combined")
    assert split == combined == base
    assert s_state.q_intrinsic.weights_dict() == {0: {}, 1: {}}


def test_density_tracks_step_count():
    for arch in ("split", "combined"):
        cfg = AgentConfig(architecture=arch)
        state = new_agent(cfg, 2, seed=1)
        env = SparseChain(seed=1)
        for ep in range(3):
            run_episode(state, env, cfg, 50, episode=ep)
        assert state.density.t == state.step_count > 0


def test_first_step_bonus_is_finite():
    cfg = AgentConfig()
    state = new_agent(cfg, 2, seed=0)
    env = SparseChain(seed=0)
    begin_episode(state, env.reset(), cfg)
    out = train_step(state, env, cfg)
    assert 0 < out.n_hat < math.inf and 0 < out.bonus < math.inf


def test_episode_cap_and_terminal():
    cfg = AgentConfig()
    state = new_agent(cfg, 2, seed=0)
    rec = run_episode(state, OneShot(), cfg, 10)
    assert rec.ext_return == 7.0 and rec.steps == 1
    rec = run_episode(state, Forever(), cfg, 5, episode=1)
    assert rec.steps == 5 and rec.global_step == 6
    assert state.q_extrinsic.live_traces() == {}


def run_records(seed):
    cfg = AgentConfig(alpha=0.05, selection="boltzmann", epsilon=LinearEpsilon(1.0, 0.01, 500))
    state = new_agent(cfg, 2, seed=seed)
    env = SparseChain(feature_map="factored", seed=seed)
    recs = [run_episode(state, env, cfg, 200, episode=i) for i in range(8)]
    return recs, state


def test_determinism():
    (r1, s1), (r2, s2) = run_records(5), run_records(5)
    assert r1 == r2
    assert s1.q_extrinsic.weights_dict() == s2.q_extrinsic.weights_dict()
    assert s1.q_intrinsic.weights_dict() == s2.q_intrinsic.weights_dict()
    assert list(s1.density.items()) == list(s2.density.items())
    r3, _ = run_records(6)
    assert r3 != r1


def test_checkpoint_roundtrip(tmp_path):
    _, state = run_records(2)
    save_checkpoint(state, tmp_path / "ckpt.json")
    restored = load_checkpoint(tmp_path / "ckpt.json")
    assert restored.step_count == state.step_count
    assert restored.q_extrinsic.weights_dict() == state.q_extrinsic.weights_dict()
    assert restored.q_intrinsic.weights_dict() == state.q_intrinsic.weights_dict()
    assert list(restored.density.items()) == list(state.density.items())
    assert restored.density.t == state.density.t
    assert restored.rng.random() == state.rng.random()


def test_step_before_begin_raises():
    cfg = AgentConfig()
    with pytest.raises(RuntimeError):
        train_step(new_agent(cfg, 2), SparseChain(), cfg)


class FeatureFlood(Env):
    """Every step shows a few ids drawn from a large pool, so the table keeps growing."""
    num_actions = 3
    step_cap = 1000

    def __init__(self, pool, seed=None):
        super().__init__("tabular", seed)
        self.pool = pool

    def _reset(self):
        self._draw()

    def _step(self, action):
        self._draw()
        return float(action == 0), False

    def _draw(self):
        self.ids = FeatureVector.from_ids(self.rng.randrange(self.pool) for _ in range(4))

    def features_tabular(self):
        return self.ids


@pytest.mark.slow
def test_stress_many_features():
    import os
    full = os.environ.get("PHIEB_FULL_STRESS") == "1"
    steps, pool = (10**6, 2 * 10**5) if full else (20_000, 12_000)
    cfg = AgentConfig(alpha=0.05, epsilon=default_epsilon("split", steps))
    state = new_agent(cfg, 3, seed=0)
    env = FeatureFlood(pool, seed=0)
    bonuses = []
    while state.step_count < steps:
        bonuses.append(run_episode(state, env, cfg, env.step_cap).mean_bonus)
    assert state.distinct_features() >= (10**5 if full else 10**4)
    arrays = [state.density.probabilities()]
    for q in (state.q_extrinsic, state.q_intrinsic):
        arrays += [q.weights[:, : q.num_features], q.traces[:, : q.num_features]]
    assert all(np.all(np.isfinite(x)) for x in arrays)
    assert np.all(np.isfinite(bonuses)) and min(bonuses) > 0
