"""Multi-seed experiments, beta sweeps and CSV learning curves."""

from __future__ import annotations

import csv
import dataclasses
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .agent import (
    ARCHITECTURES,
    AgentConfig,
    AgentInvariantError,
    ConstantEpsilon,
    EpisodeRecord,
    LinearEpsilon,
    default_epsilon,
    greedy_episode,
    new_agent,
    run_episode,
)
from .bonus import BonusConfig, NonincreasingDensity
from .envs import ENVIRONMENTS, make_env

log = logging.getLogger(__name__)

CSV_HEADER = [f.name for f in dataclasses.fields(EpisodeRecord)]
SUMMARY_HEADER = ["episode", "trials", "mean_return", "std_return", "min_return", "max_return"]


class ConfigError(ValueError):
    pass


class InvariantBreach(RuntimeError):
    pass


@dataclass
class ExperimentConfig:
    env: str = "sparse_chain"
    env_params: dict = field(default_factory=dict)
    architecture: str = "split"
    alpha: float = 0.01
    gamma: float = 0.99
    lam: float = 0.9
    beta: float = 0.05
    variant: str = "exact"
    selection: str = "egreedy"
    # {"kind": "constant", "epsilon": e} or {"kind": "linear", "start", "end", "anneal_steps"};
    # None picks the architecture default for this frame budget
    epsilon: dict | None = None
    frames: int = 40_000
    episodes: int | None = None
    trials: int = 1
    seed: int = 0
    out: str | None = None
    eval_episodes: int = 10
    workers: int = 1

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.frames <= 0:
            raise ConfigError("frames must be positive")
        if self.episodes is not None and self.episodes <= 0:
            raise ConfigError("episodes must be positive when given")
        if self.eval_episodes < 0:
            raise ConfigError("eval_episodes cannot be negative")
        if self.architecture not in ARCHITECTURES:
            raise ConfigError(f"unknown architecture {self.architecture!r}")
        if self.env.lower().replace("-", "_") not in ENVIRONMENTS:
            raise ConfigError(f"unknown environment {self.env!r}; known: {sorted(ENVIRONMENTS)}")
        try:
            self.agent_config()
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json(cls, path: str | Path) -> ExperimentConfig:
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: config must be a JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def replace(self, **changes) -> ExperimentConfig:
        return dataclasses.replace(self, **changes)

    def agent_config(self) -> AgentConfig:
        eps = self.epsilon
        if eps is None:
            schedule = default_epsilon(self.architecture, self.frames)
        else:
            eps = dict(eps)
            kind = eps.pop("kind", "constant")
            if kind == "constant":
                schedule = ConstantEpsilon(**eps)
            elif kind == "linear":
                schedule = LinearEpsilon(**eps)
            else:
                raise ConfigError(f"unknown epsilon schedule kind {kind!r}")
        return AgentConfig(
            alpha=self.alpha,
            gamma=self.gamma,
            lam=self.lam,
            bonus=BonusConfig(self.beta, self.variant),
            epsilon=schedule,
            selection=self.selection,
            architecture=self.architecture,
        )


@dataclass
class TrialResult:
    trial: int
    seed: int
    records: list[EpisodeRecord]
    eval_returns: list[float]
    steps: int
    distinct_features: int

    @property
    def returns(self) -> list[float]:
        return [r.ext_return for r in self.records]

    def final_quartile(self) -> float:
        return quartile_mean(self.returns, last=True)

    def first_quartile(self) -> float:
        return quartile_mean(self.returns, last=False)

    def eval_score(self) -> float:
        return float(np.mean(self.eval_returns)) if self.eval_returns else float("nan")

    def reached_goal(self) -> bool:
        return any(r > 0 for r in self.returns)


@dataclass
class ExperimentSummary:
    config: ExperimentConfig
    trials: list[TrialResult]
    per_episode: list[dict]

    def final_quartiles(self) -> list[float]:
        return [t.final_quartile() for t in self.trials]

    def eval_scores(self) -> list[float]:
        return [t.eval_score() for t in self.trials]

    def mean_final_quartile(self) -> float:
        return float(np.mean(self.final_quartiles()))

    def mean_eval_score(self) -> float:
        return float(np.mean(self.eval_scores()))

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "final_quartile_returns": self.final_quartiles(),
            "eval_scores": self.eval_scores(),
            "mean_final_quartile_return": self.mean_final_quartile(),
            "mean_eval_score": self.mean_eval_score(),
        }


def quartile_mean(values: Sequence[float], last: bool = True) -> float:
    """Mean of the last (or first) quarter of ``values``, at least one element."""
    if not values:
        return float("nan")
    k = max(1, len(values) // 4)
    part = values[-k:] if last else values[:k]
    return float(np.mean(part))


def trial_seeds(base_seed: int, trial: int) -> tuple[int, int]:
    """Independent (environment, agent) seeds for one trial."""
    env_seed, agent_seed = np.random.SeedSequence(base_seed + trial).generate_state(2)
    return int(env_seed), int(agent_seed)


def run_trial(cfg: ExperimentConfig, trial: int) -> TrialResult:
    acfg = cfg.agent_config()
    env_seed, agent_seed = trial_seeds(cfg.seed, trial)
    env = make_env(cfg.env, seed=env_seed, **cfg.env_params)
    state = new_agent(acfg, env.num_actions, agent_seed)
    records: list[EpisodeRecord] = []
    episode = 0
    try:
        while state.step_count < cfg.frames and (cfg.episodes is None or episode < cfg.episodes):
            cap = min(env.step_cap, cfg.frames - state.step_count)
            records.append(run_episode(state, env, acfg, cap, trial=trial, episode=episode))
            episode += 1
    except (NonincreasingDensity, AgentInvariantError) as exc:
        raise InvariantBreach(
            f"trial {trial} (seed {cfg.seed + trial}), episode {episode}, "
            f"global step {state.step_count}: {type(exc).__name__}: {exc}"
        ) from exc
    eval_returns = [greedy_episode(state, env, acfg, env.step_cap) for _ in range(cfg.eval_episodes)]
    log.info("trial %d: %d episodes, %d steps, eval %.3f",
             trial, len(records), state.step_count, np.mean(eval_returns) if eval_returns else float("nan"))
    return TrialResult(trial, cfg.seed + trial, records, eval_returns, state.step_count,
                       state.distinct_features())


def _run_trial_args(args: tuple[ExperimentConfig, int]) -> TrialResult:
    return run_trial(*args)


def summarize(trials: Sequence[TrialResult]) -> list[dict]:
    """Per-episode-index mean/std/min/max of extrinsic return across trials."""
    longest = max((len(t.records) for t in trials), default=0)
    rows = []
    for ep in range(longest):
        vals = np.array([t.records[ep].ext_return for t in trials if ep < len(t.records)])
        rows.append({
            "episode": ep,
            "trials": len(vals),
            "mean_return": float(vals.mean()),
            "std_return": float(vals.std()),
            "min_return": float(vals.min()),
            "max_return": float(vals.max()),
        })
    return rows


def write_trial_csv(path: Path, records: Sequence[EpisodeRecord]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for r in records:
            writer.writerow(dataclasses.astuple(r))


def write_summary_csv(path: Path, rows: Sequence[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_HEADER)
        writer.writeheader()
        writer.writerows(rows)


def read_trial_csv(path: str | Path) -> list[dict[str, Any]]:
    """Parse a per-trial CSV back into typed rows."""
    ints = {"trial", "episode", "global_step", "steps", "distinct_features"}
    with open(path, newline="") as fh:
        return [
            {k: int(v) if k in ints else float(v) for k, v in row.items()}
            for row in csv.DictReader(fh)
        ]


def run_experiment(cfg: ExperimentConfig) -> ExperimentSummary:
    """Run every trial, write per-trial CSVs and the cross-trial summary."""
    jobs = [(cfg, i) for i in range(cfg.trials)]
    if cfg.workers > 1 and cfg.trials > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            trials = list(pool.map(_run_trial_args, jobs))
    else:
        trials = [run_trial(c, i) for c, i in jobs]
    summary = ExperimentSummary(cfg, trials, summarize(trials))
    if cfg.out is not None:
        out = Path(cfg.out)
        try:
            out.mkdir(parents=True, exist_ok=True)
            for t in trials:
                write_trial_csv(out / f"trial_{t.trial:03d}.csv", t.records)
            write_summary_csv(out / "summary.csv", summary.per_episode)
            (out / "summary.json").write_text(json.dumps(summary.to_dict(), indent=2))
        except OSError as exc:
            raise OSError(f"writing results to {out}: {exc}") from exc
    return summary


@dataclass(frozen=True)
class SweepRow:
    beta: float
    final_quartile_return: float
    eval_score: float


def beta_sweep(cfg: ExperimentConfig, betas: Sequence[float]) -> list[SweepRow]:
    """One experiment per beta; rows sorted by beta."""
    if not betas:
        raise ConfigError("beta sweep needs at least one beta")
    rows = []
    for beta in sorted(betas):
        out = None if cfg.out is None else str(Path(cfg.out) / f"beta_{beta:g}")
        summary = run_experiment(cfg.replace(beta=float(beta), out=out))
        rows.append(SweepRow(float(beta), summary.mean_final_quartile(), summary.mean_eval_score()))
    if cfg.out is not None:
        path = Path(cfg.out) / "sweep.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["beta", "final_quartile_return", "eval_score"])
            for r in rows:
                writer.writerow([r.beta, r.final_quartile_return, r.eval_score])
    return rows


def std_between(values: Sequence[float]) -> float:
    """Population standard deviation; 0 for a single value."""
    return float(np.std(values)) if len(values) else math.nan
