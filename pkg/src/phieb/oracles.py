"""Brute-force reference computations used to cross-check the incremental code.

Nothing here touches the factor table or the log-space evaluation: the KT
estimate is recomputed from raw counts and densities are direct products.
"""

from __future__ import annotations

from collections import Counter
from typing import Hashable, Iterable, Mapping, Sequence


def oracle_kt(history: Mapping[int, Sequence[int]] | Sequence[Sequence[int]]) -> dict[int, float]:
    """KT activation probability of each feature from its raw 0/1 history.

    ``history`` maps a feature to its observed bits (or is a list of bit
    sequences indexed by feature). An empty history gives 0.5.
    """
    items = history.items() if isinstance(history, Mapping) else enumerate(history)
    out = {}
    for fid, bits in items:
        bits = list(bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"feature {fid}: observations must be 0 or 1")
        out[fid] = (sum(bits) + 0.5) / (len(bits) + 1)
    return out


def counts_from_history(vectors: Iterable[Iterable[int]]) -> tuple[dict[int, int], int]:
    """Activation counts of every feature seen in a sequence of active-id sets, plus ``t``."""
    counts: dict[int, int] = {}
    t = 0
    for v in vectors:
        for i in v:
            counts[i] = counts.get(i, 0) + 1
        t += 1
    return counts, t


def oracle_density(counts: Mapping[int, int], t: int, query: Iterable[int]) -> float:
    """Product of per-feature KT probabilities for the active set ``query``.

    Every feature in ``counts`` (zero counts allowed) that is absent from
    ``query`` contributes its inactive probability; active features missing
    from ``counts`` contribute ``0.5 / (t + 1)``.
    """
    active = set(query)
    prob = 1.0
    for fid in set(counts) | active:
        p = (counts.get(fid, 0) + 0.5) / (t + 1)
        prob *= p if fid in active else 1.0 - p
    return prob


def oracle_tabular_counts(trajectory: Iterable[Hashable]) -> Counter:
    """Exact number of visits to each state along a trajectory."""
    return Counter(trajectory)
