"""Linear action-values over sparse binary features with replacing eligibility traces."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels as _k
from .features import FeatureVector

SNAPSHOT_VERSION = 1
TRACE_EVICTION = 1e-8


@dataclass(frozen=True, slots=True)
class TdStep:
    reward: float
    gamma: float
    q_current: float
    q_next: float
    alpha: float = 0.01
    lam: float = 0.9
    terminal: bool = False


def td_error(step: TdStep) -> float:
    q_next = 0.0 if step.terminal else step.q_next
    return step.reward + step.gamma * q_next - step.q_current


class LinearQ:
    """One sparse weight row and one trace row per action.

    Columns are allocated on first visit of a feature id, so memory grows with
    the number of distinct features observed. Since features are binary,
    ``q_value`` is the sum of the weights at the active ids.
    """

    def __init__(self, num_actions: int, capacity: int = 64):
        if num_actions < 1:
            raise ValueError("need at least one action")
        self.num_actions = num_actions
        self._col: dict[int, int] = {}
        self._ids: list[int] = []
        self.weights = np.zeros((num_actions, capacity))
        self.traces = np.zeros((num_actions, capacity))

    @property
    def num_features(self) -> int:
        return len(self._ids)

    def _check_action(self, a: int) -> None:
        if not 0 <= a < self.num_actions:
            raise IndexError(f"action {a} out of range for {self.num_actions} actions")

    def _known(self, v: FeatureVector) -> np.ndarray:
        col = self._col
        return np.array([col[i] for i in v if i in col], dtype=np.int64)

    def _columns(self, v: FeatureVector) -> np.ndarray:
        col = self._col
        out = []
        for i in v:
            c = col.get(i)
            if c is None:
                c = len(self._ids)
                if c == self.weights.shape[1]:
                    self._grow()
                col[i] = c
                self._ids.append(i)
            out.append(c)
        return np.array(out, dtype=np.int64)

    def _grow(self) -> None:
        cap = max(8, 2 * self.weights.shape[1])
        for name in ("weights", "traces"):
            old = getattr(self, name)
            new = np.zeros((self.num_actions, cap))
            new[:, : old.shape[1]] = old
            setattr(self, name, new)

    def q_value(self, v: FeatureVector, a: int) -> float:
        self._check_action(a)
        return _k.row_sum(self.weights, a, self._known(v))

    def q_values(self, v: FeatureVector) -> np.ndarray:
        """Action-values of every action for the state with features ``v``."""
        return _k.all_row_sums(self.weights, self._known(v))

    def mark_visit(self, v: FeatureVector, a: int) -> None:
        """Replacing traces: set every active feature's trace for ``a`` to 1."""
        self._check_action(a)
        cols = self._columns(v)  # may reallocate the arrays, so resolve it first
        _k.set_traces(self.traces, a, cols)

    def decay_traces(self, gamma: float, lam: float) -> None:
        """Scale every trace by ``gamma * lam``; traces falling below 1e-8 are dropped."""
        _k.decay_traces(self.traces, len(self._ids), gamma * lam, TRACE_EVICTION)

    def apply_update(self, delta: float, alpha: float) -> None:
        # only entries with a live trace are touched
        _k.apply_traces(self.weights, self.traces, len(self._ids), alpha * delta)

    def clear_traces(self) -> None:
        self.traces[:] = 0.0

    def weight(self, a: int, fid: int) -> float:
        c = self._col.get(fid)
        return 0.0 if c is None else float(self.weights[a, c])

    def trace(self, a: int, fid: int) -> float:
        c = self._col.get(fid)
        return 0.0 if c is None else float(self.traces[a, c])

    def weights_dict(self) -> dict[int, dict[int, float]]:
        """``{action: {feature id: weight}}`` for non-zero weights."""
        out: dict[int, dict[int, float]] = {a: {} for a in range(self.num_actions)}
        for fid, c in self._col.items():
            for a in range(self.num_actions):
                w = float(self.weights[a, c])
                if w != 0.0:
                    out[a][fid] = w
        return out

    def live_traces(self) -> dict[tuple[int, int], float]:
        out = {}
        for fid, c in self._col.items():
            for a in range(self.num_actions):
                e = float(self.traces[a, c])
                if e != 0.0:
                    out[(a, fid)] = e
        return out

    def set_weight(self, a: int, fid: int, w: float) -> None:
        self._check_action(a)
        (c,) = self._columns((fid,))
        self.weights[a, c] = w

    # -- snapshots -------------------------------------------------------

    def to_dict(self) -> dict:
        records = [
            [a, fid, float(self.weights[a, self._col[fid]])]
            for fid in sorted(self._col)
            for a in range(self.num_actions)
        ]
        return {
            "version": SNAPSHOT_VERSION,
            "num_actions": self.num_actions,
            "count": len(records),
            "records": records,
        }

    @classmethod
    def from_dict(cls, data: dict) -> LinearQ:
        if data.get("version") != SNAPSHOT_VERSION:
            raise ValueError(f"unsupported weight snapshot version {data.get('version')!r}")
        if len(data["records"]) != data["count"]:
            raise ValueError("weight snapshot count does not match its records")
        q = cls(int(data["num_actions"]))
        for a, fid, w in data["records"]:
            q.set_weight(int(a), int(fid), float(w))
        return q

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()))

    @classmethod
    def load(cls, path: str | Path) -> LinearQ:
        return cls.from_dict(json.loads(Path(path).read_text()))


def q_value(q: LinearQ, v: FeatureVector, a: int) -> float:
    return q.q_value(v, a)


def apply_update(q: LinearQ, delta: float, alpha: float) -> None:
    q.apply_update(delta, alpha)


def mark_visit(q: LinearQ, v: FeatureVector, a: int) -> None:
    q.mark_visit(v, a)


def decay_traces(q: LinearQ, gamma: float, lam: float) -> None:
    q.decay_traces(gamma, lam)
