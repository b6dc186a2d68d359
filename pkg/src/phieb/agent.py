"""SARSA(lambda) agents driven by the feature-space exploration bonus.

Three architectures share one loop:

* ``split``: extrinsic and intrinsic heads, trained on the environment reward
  and on the bonus respectively; actions are greedy in their sum.
* ``combined``: one head trained on reward plus bonus.
* ``baseline``: one head, no density model, plain epsilon-greedy.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, Sequence, Union

from .bonus import BonusConfig, exploration_bonus
from .density import FactorTable
from .features import FeatureVector
from .value import LinearQ, TdStep, td_error

Architecture = Literal["split", "combined", "baseline"]
Selection = Literal["egreedy", "boltzmann"]
ARCHITECTURES = ("split", "combined", "baseline")
SELECTIONS = ("egreedy", "boltzmann")
CHECKPOINT_VERSION = 1


class AgentInvariantError(RuntimeError):
    """A weight, trace, bonus or TD error stopped being finite."""


@dataclass(frozen=True)
class ConstantEpsilon:
    epsilon: float = 0.1

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")


@dataclass(frozen=True)
class LinearEpsilon:
    start: float = 1.0
    end: float = 0.01
    anneal_steps: int = 1000

    def __post_init__(self):
        if not (0.0 <= self.end <= 1.0 and 0.0 <= self.start <= 1.0):
            raise ValueError("epsilon endpoints must lie in [0, 1]")
        if self.anneal_steps <= 0:
            raise ValueError("anneal_steps must be positive")


EpsilonSchedule = Union[ConstantEpsilon, LinearEpsilon]


def epsilon_at(schedule: EpsilonSchedule, step: int) -> float:
    if isinstance(schedule, ConstantEpsilon):
        return schedule.epsilon
    frac = min(1.0, step / schedule.anneal_steps)
    return schedule.start - (schedule.start - schedule.end) * frac


def default_epsilon(architecture: Architecture, budget: int) -> EpsilonSchedule:
    """Annealed 1.0 -> 0.01 over the first tenth of the budget, or 0.1 for the baseline."""
    if architecture == "baseline":
        return ConstantEpsilon(0.1)
    return LinearEpsilon(1.0, 0.01, max(1, budget // 10))


@dataclass(frozen=True)
class AgentConfig:
    alpha: float = 0.01
    gamma: float = 0.99
    lam: float = 0.9
    bonus: BonusConfig = field(default_factory=BonusConfig)
    epsilon: EpsilonSchedule = field(default_factory=lambda: LinearEpsilon(1.0, 0.01, 1000))
    selection: Selection = "egreedy"
    architecture: Architecture = "split"

    def __post_init__(self):
        if self.architecture not in ARCHITECTURES:
            raise ValueError(f"unknown architecture {self.architecture!r}")
        if self.selection not in SELECTIONS:
            raise ValueError(f"unknown action selection {self.selection!r}")
        if self.architecture == "baseline" and self.selection != "egreedy":
            raise ValueError("the baseline agent only supports epsilon-greedy selection")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if not (0.0 <= self.gamma <= 1.0 and 0.0 <= self.lam <= 1.0):
            raise ValueError("gamma and lambda must lie in [0, 1]")


@dataclass
class AgentState:
    q_extrinsic: LinearQ
    q_intrinsic: LinearQ | None
    density: FactorTable | None
    rng: random.Random
    step_count: int = 0
    features: FeatureVector | None = None
    action: int | None = None
    # per-episode accumulators
    ext_return: float = 0.0
    int_return: float = 0.0
    episode_steps: int = 0

    @property
    def num_actions(self) -> int:
        return self.q_extrinsic.num_actions

    def distinct_features(self) -> int:
        if self.density is not None:
            return len(self.density)
        return self.q_extrinsic.num_features


@dataclass(frozen=True)
class StepSummary:
    reward: float
    bonus: float
    n_hat: float
    action: int
    next_action: int | None
    terminal: bool
    epsilon: float


@dataclass(frozen=True)
class EpisodeRecord:
    trial: int
    episode: int
    global_step: int
    ext_return: float
    int_return: float
    steps: int
    distinct_features: int
    mean_bonus: float
    epsilon: float


def new_agent(cfg: AgentConfig, num_actions: int, seed: int | None = None) -> AgentState:
    uses_bonus = cfg.architecture != "baseline"
    return AgentState(
        q_extrinsic=LinearQ(num_actions),
        q_intrinsic=LinearQ(num_actions) if cfg.architecture == "split" else None,
        density=FactorTable() if uses_bonus else None,
        rng=random.Random(seed),
    )


# -- action selection ----------------------------------------------------


def _argmax(q: Sequence[float], rng: random.Random) -> int:
    best = max(q)
    ties = [i for i, x in enumerate(q) if x == best]
    if len(ties) == 1:
        return ties[0]
    return ties[rng.randrange(len(ties))]


def select_egreedy(q_values: Sequence[float], epsilon: float, rng: random.Random) -> int:
    """Uniform random action with probability ``epsilon``, else a random argmax."""
    n = len(q_values)
    if n == 0:
        raise ValueError("cannot select from an empty action set")
    if rng.random() < epsilon:
        return rng.randrange(n)
    return _argmax(q_values, rng)


def select_boltzmann(q_e: Sequence[float], q_i: Sequence[float], epsilon: float,
                     rng: random.Random) -> int:
    """Greedy in ``q_e + q_i``; with probability ``epsilon`` draw from softmax(``q_i``)."""
    n = len(q_e)
    if n == 0:
        raise ValueError("cannot select from an empty action set")
    if len(q_i) != n:
        raise ValueError("extrinsic and intrinsic value vectors differ in length")
    if rng.random() < epsilon:
        top = max(q_i)
        weights = [math.exp(x - top) for x in q_i]
        u = rng.random() * sum(weights)
        acc = 0.0
        for a, w in enumerate(weights):
            acc += w
            if u < acc:
                return a
        return n - 1
    return _argmax([e + i for e, i in zip(q_e, q_i)], rng)


def _select(state: AgentState, cfg: AgentConfig, v: FeatureVector, epsilon: float) -> int:
    q_e = state.q_extrinsic.q_values(v).tolist()
    if cfg.architecture == "split":
        q_i = state.q_intrinsic.q_values(v).tolist()
    elif cfg.selection == "boltzmann":
        # combined head: greedy and Boltzmann draws both use the one head
        q_e, q_i = [0.0] * len(q_e), q_e
    else:
        return select_egreedy(q_e, epsilon, state.rng)
    if cfg.selection == "boltzmann":
        return select_boltzmann(q_e, q_i, epsilon, state.rng)
    return select_egreedy([e + i for e, i in zip(q_e, q_i)], epsilon, state.rng)


# -- learning loop -------------------------------------------------------


def begin_episode(state: AgentState, features: FeatureVector, cfg: AgentConfig) -> None:
    """Store the initial state and pick the first action."""
    state.features = features
    state.action = _select(state, cfg, features, epsilon_at(cfg.epsilon, state.step_count))
    state.ext_return = 0.0
    state.int_return = 0.0
    state.episode_steps = 0


def _learn(q: LinearQ, v: FeatureVector, a: int, delta: float, cfg: AgentConfig) -> None:
    if not math.isfinite(delta):
        raise AgentInvariantError(f"non-finite TD error {delta!r}")
    q.mark_visit(v, a)
    q.apply_update(delta, cfg.alpha)
    q.decay_traces(cfg.gamma, cfg.lam)


def train_step(state: AgentState, env, cfg: AgentConfig) -> StepSummary:
    """Act with the stored action, learn from the transition and pick the next action."""
    v, a = state.features, state.action
    if v is None or a is None:
        raise RuntimeError("train_step before begin_episode")
    q_e, q_i = state.q_extrinsic, state.q_intrinsic
    # re-estimate with the current weights before acting
    cur_e = q_e.q_value(v, a)
    cur_i = q_i.q_value(v, a) if q_i is not None else 0.0

    reward, v_next, terminal = env.step(a)

    bonus = n_hat = 0.0
    if state.density is not None:
        res = exploration_bonus(v, state.density, cfg.bonus)
        bonus, n_hat = res.bonus, res.n_hat
        if not math.isfinite(bonus):
            raise AgentInvariantError(f"non-finite exploration bonus {bonus!r} (n_hat={n_hat!r})")

    eps = epsilon_at(cfg.epsilon, state.step_count + 1)
    if terminal:
        a_next = None
        next_e = next_i = 0.0
    else:
        a_next = _select(state, cfg, v_next, eps)
        next_e = q_e.q_value(v_next, a_next)
        next_i = q_i.q_value(v_next, a_next) if q_i is not None else 0.0

    g = cfg.gamma
    if cfg.architecture == "combined":
        _learn(q_e, v, a, td_error(TdStep(reward + bonus, g, cur_e, next_e, terminal=terminal)), cfg)
    else:
        _learn(q_e, v, a, td_error(TdStep(reward, g, cur_e, next_e, terminal=terminal)), cfg)
        if q_i is not None:
            _learn(q_i, v, a, td_error(TdStep(bonus, g, cur_i, next_i, terminal=terminal)), cfg)

    state.features, state.action = v_next, a_next
    state.step_count += 1
    state.ext_return += reward
    state.int_return += bonus
    state.episode_steps += 1
    return StepSummary(reward, bonus, n_hat, a, a_next, terminal, eps)


def end_episode(state: AgentState) -> None:
    state.q_extrinsic.clear_traces()
    if state.q_intrinsic is not None:
        state.q_intrinsic.clear_traces()
    state.features = state.action = None


def run_episode(state: AgentState, env, cfg: AgentConfig, step_cap: int, *,
                seed: int | None = None, trial: int = 0, episode: int = 0) -> EpisodeRecord:
    """Train for one episode, stopping at a terminal state or after ``step_cap`` steps."""
    if step_cap <= 0:
        raise ValueError("step_cap must be positive")
    begin_episode(state, env.reset(seed), cfg)
    for _ in range(step_cap):
        if train_step(state, env, cfg).terminal:
            break
    steps = state.episode_steps
    record = EpisodeRecord(
        trial=trial,
        episode=episode,
        global_step=state.step_count,
        ext_return=state.ext_return,
        int_return=state.int_return,
        steps=steps,
        distinct_features=state.distinct_features(),
        mean_bonus=state.int_return / steps if steps else 0.0,
        epsilon=epsilon_at(cfg.epsilon, state.step_count),
    )
    end_episode(state)
    return record


def greedy_episode(state: AgentState, env, cfg: AgentConfig, step_cap: int,
                   seed: int | None = None) -> float:
    """Run the frozen greedy policy (epsilon 0, no learning, no density updates).

    Returns the extrinsic return.
    """
    v = env.reset(seed)
    total = 0.0
    for _ in range(step_cap):
        a = _select(state, cfg, v, 0.0)
        reward, v, terminal = env.step(a)
        total += reward
        if terminal:
            break
    return total


# -- checkpoints ---------------------------------------------------------


def _rng_to_json(rng: random.Random) -> list:
    version, internal, gauss = rng.getstate()
    return [version, list(internal), gauss]


def _rng_from_json(data: list) -> random.Random:
    rng = random.Random()
    rng.setstate((data[0], tuple(data[1]), data[2]))
    return rng


def checkpoint_dict(state: AgentState) -> dict:
    return {
        "version": CHECKPOINT_VERSION,
        "step_count": state.step_count,
        "q_extrinsic": state.q_extrinsic.to_dict(),
        "q_intrinsic": state.q_intrinsic.to_dict() if state.q_intrinsic is not None else None,
        "density": state.density.to_dict() if state.density is not None else None,
        "rng": _rng_to_json(state.rng),
    }


def restore_checkpoint(data: dict) -> AgentState:
    if data.get("version") != CHECKPOINT_VERSION:
        raise ValueError(f"unsupported checkpoint version {data.get('version')!r}")
    return AgentState(
        q_extrinsic=LinearQ.from_dict(data["q_extrinsic"]),
        q_intrinsic=LinearQ.from_dict(data["q_intrinsic"]) if data["q_intrinsic"] else None,
        density=FactorTable.from_dict(data["density"]) if data["density"] else None,
        rng=_rng_from_json(data["rng"]),
        step_count=int(data["step_count"]),
    )


def save_checkpoint(state: AgentState, path: str | Path) -> None:
    Path(path).write_text(json.dumps(checkpoint_dict(state)))


def load_checkpoint(path: str | Path) -> AgentState:
    return restore_checkpoint(json.loads(Path(path).read_text()))
