"""Feature visit-density: a product of independent KT estimators over binary features.

Only features that have been observed at least once are stored. Every other
feature shares the probability of a KT estimator that has seen ``t`` zeros,
``0.5 / (t + 1)``. Densities are returned as natural-log probabilities.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from . import _kernels as _k
from .features import FeatureVector

SNAPSHOT_VERSION = 1


def kt_estimate(n: int, t: int) -> float:
    """KT probability that a binary feature is active after ``n`` hits in ``t`` steps."""
    if n < 0 or t < 0 or n > t:
        raise ValueError(f"KT estimate needs 0 <= n <= t, got n={n}, t={t}")
    return (n + 0.5) / (t + 1)


class FactorTable:
    """Per-feature activation probabilities plus the global timestep.

    ``update`` applies the recursive form of the KT estimator, so no counts are
    kept: every stored factor is scaled by ``(t+1)/(t+2)`` and active ones get
    ``1/(t+2)`` added.

    Evaluation is side-effect free. Unseen active features are scored with the
    prototype probability but only inserted by ``update``.
    """

    def __init__(self, features: Iterable[int] = (), capacity: int = 64):
        self.t = 0
        self._slot: dict[int, int] = {}
        self._ids = np.empty(capacity, dtype=np.int64)
        self._p = np.empty(capacity, dtype=np.float64)
        self._n = 0
        self._flag = np.zeros(capacity, dtype=np.uint8)
        self.declare(features)

    def __len__(self) -> int:
        return self._n

    def __contains__(self, fid: int) -> bool:
        return fid in self._slot

    def prototype(self) -> float:
        return 0.5 / (self.t + 1)

    def declare(self, features: Iterable[int]) -> None:
        """Store ``features`` at the prototype probability without observing them.

        A declared feature is scored as inactive from then on, which is what a
        dense model over a known feature universe does. Already stored ids are
        left alone.
        """
        proto = self.prototype()
        for fid in features:
            if fid not in self._slot:
                self._insert(int(fid), proto)

    def factor(self, fid: int) -> float:
        """Probability that ``fid`` is active; the prototype if never stored."""
        s = self._slot.get(fid)
        return self.prototype() if s is None else float(self._p[s])

    def items(self) -> Iterator[tuple[int, float]]:
        """(id, p_active) pairs sorted by id."""
        ids = self._ids[: self._n]
        order = np.argsort(ids, kind="stable")
        for k in order:
            yield int(ids[k]), float(self._p[k])

    def probabilities(self) -> np.ndarray:
        """View of the stored activation probabilities, in insertion order."""
        return self._p[: self._n]

    def log_visit_density(self, v: FeatureVector) -> float:
        """Log-probability of observing exactly the active set ``v`` next."""
        slot = self._slot
        stored = [slot[i] for i in v if i in slot]
        # one pass over the stored factors; active ones are flagged rather than
        # swapped out of a cached inactive sum, which loses precision
        total = _k.log_density(self._p, self._n, np.array(stored, dtype=np.int64), self._flag)
        unseen = len(v) - len(stored)
        if unseen:
            total += unseen * math.log(self.prototype())
        return total

    def update(self, v: FeatureVector) -> None:
        """Record one observation of ``v`` and advance ``t`` by one."""
        t = self.t
        slot = self._slot
        proto = 0.5 / (t + 1)
        cols = []
        for i in v:
            s = slot.get(i)
            if s is None:
                s = self._insert(i, proto)
            cols.append(s)
        _k.kt_update(self._p, self._n, np.array(cols, dtype=np.int64), t)
        self.t = t + 1

    def _insert(self, fid: int, p: float) -> int:
        if fid < 0:
            raise ValueError(f"negative feature id {fid}")
        n = self._n
        if n == len(self._p):
            cap = max(8, 2 * n)
            self._p = np.resize(self._p, cap)
            self._ids = np.resize(self._ids, cap)
            self._flag = np.zeros(cap, dtype=np.uint8)
        self._p[n] = p
        self._ids[n] = fid
        self._slot[fid] = n
        self._n = n + 1
        return n

    # -- snapshots -------------------------------------------------------

    def to_dict(self) -> dict:
        records = [[fid, p] for fid, p in self.items()]
        return {"version": SNAPSHOT_VERSION, "t": self.t, "count": len(records), "records": records}

    @classmethod
    def from_dict(cls, data: dict) -> FactorTable:
        if data.get("version") != SNAPSHOT_VERSION:
            raise ValueError(f"unsupported factor table snapshot version {data.get('version')!r}")
        records = data["records"]
        if len(records) != data["count"]:
            raise ValueError("factor table snapshot count does not match its records")
        table = cls(capacity=max(64, len(records)))
        table.t = int(data["t"])
        for fid, p in records:
            if not 0.0 < p < 1.0:
                raise ValueError(f"factor for feature {fid} outside (0, 1): {p}")
            table._insert(int(fid), float(p))
        return table

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()))

    @classmethod
    def load(cls, path: str | Path) -> FactorTable:
        return cls.from_dict(json.loads(Path(path).read_text()))


def log_visit_density(table: FactorTable, v: FeatureVector) -> float:
    return table.log_visit_density(v)


def update(table: FactorTable, v: FeatureVector) -> None:
    table.update(v)
