"""Sparse binary feature vectors shared by the value head and the density model."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable, NamedTuple, Sequence


class Violation(NamedTuple):
    """First pair of positions breaking the strictly-increasing rule."""

    positions: tuple[int, int]
    message: str


def validate(ids: Sequence[int]) -> Violation | None:
    """Return ``None`` if ``ids`` is strictly increasing and non-negative.

    Otherwise return the first offending ``(i, i + 1)`` pair. A negative id is
    reported as the pair ``(i, i)``.
    """
    prev = None
    for i, x in enumerate(ids):
        if x < 0:
            return Violation((i, i), f"negative feature id {x} at position {i}")
        if prev is not None:
            if x == prev:
                return Violation((i - 1, i), f"duplicate id {x} at positions ({i - 1}, {i})")
            if x < prev:
                return Violation((i - 1, i), f"ids {prev} > {x} out of order at positions ({i - 1}, {i})")
        prev = x
    return None


class FeatureVector(tuple):
    """Immutable, sorted tuple of active feature ids.

    Construct with :meth:`from_ids` when the input may be unsorted or contain
    duplicates; the plain constructor validates and raises ``ValueError``.
    """

    __slots__ = ()

    def __new__(cls, ids: Iterable[int] = ()):
        ids = tuple(int(i) for i in ids)
        bad = validate(ids)
        if bad is not None:
            raise ValueError(bad.message)
        return super().__new__(cls, ids)

    @classmethod
    def from_ids(cls, ids: Iterable[int]) -> FeatureVector:
        return cls(sorted(set(ids)))

    @classmethod
    def _trusted(cls, ids: tuple[int, ...]) -> FeatureVector:
        # hot path for environments that build sorted ids by construction
        return tuple.__new__(cls, ids)

    def __contains__(self, item: object) -> bool:
        # binary search; vectors are short but may not be
        lo, hi = 0, len(self)
        while lo < hi:
            mid = (lo + hi) // 2
            v = tuple.__getitem__(self, mid)
            if v < item:  # type: ignore[operator]
                lo = mid + 1
            else:
                hi = mid
        return lo < len(self) and tuple.__getitem__(self, lo) == item

    def __repr__(self) -> str:
        return f"FeatureVector({list(self)})"


def intersect(a: FeatureVector, b: FeatureVector) -> FeatureVector:
    """Merge-walk intersection of two sorted vectors."""
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        x, y = a[i], b[j]
        if x == y:
            out.append(x)
            i += 1
            j += 1
        elif x < y:
            i += 1
        else:
            j += 1
    return FeatureVector._trusted(tuple(out))


@dataclass(frozen=True)
class FeatureMapSpec:
    """A named, deterministic observation -> FeatureVector map."""

    name: str
    extractor: Callable[[Any], FeatureVector]

    def __call__(self, observation: Any) -> FeatureVector:
        return self.extractor(observation)
