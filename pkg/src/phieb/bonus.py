"""Pseudo-counts and exploration bonuses derived from the feature visit-density."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, NamedTuple

from .density import FactorTable
from .features import FeatureVector

Variant = Literal["exact", "ratio"]
VARIANTS = ("exact", "ratio")


class NonincreasingDensity(ArithmeticError):
    """Recording an observation did not raise its density; the model is broken."""


@dataclass(frozen=True)
class BonusConfig:
    beta: float = 0.05
    variant: Variant = "exact"

    def __post_init__(self):
        if not self.beta >= 0:
            raise ValueError(f"beta must be non-negative, got {self.beta}")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown pseudo-count variant {self.variant!r}")


class PseudoCountResult(NamedTuple):
    log_rho: float
    log_rho_prime: float
    n_hat: float
    bonus: float


def pseudo_count(log_rho: float, log_rho_prime: float, variant: Variant = "exact") -> float:
    """Pseudo-count from the density before and after recording an observation.

    ``exact`` is ``rho (1 - rho') / (rho' - rho)``; ``ratio`` drops the
    ``(1 - rho')`` factor and is ``1 / (rho'/rho - 1)``. Both are evaluated
    from log-probabilities without leaving log space for ``rho`` itself.
    """
    gain = log_rho_prime - log_rho
    if not gain > 0:
        raise NonincreasingDensity(
            f"recoding log-density {log_rho_prime!r} does not exceed log-density {log_rho!r}"
        )
    denom = math.expm1(gain)
    if variant == "exact":
        return -math.expm1(log_rho_prime) / denom
    if variant == "ratio":
        return 1.0 / denom
    raise ValueError(f"unknown pseudo-count variant {variant!r}")


def bonus_from_count(n_hat: float, beta: float) -> float:
    if beta == 0:
        return 0.0
    return beta / math.sqrt(n_hat)


def exploration_bonus(v: FeatureVector, table: FactorTable, cfg: BonusConfig) -> PseudoCountResult:
    """Score ``v``, record it in ``table``, re-score it and turn the gain into a bonus.

    The table is updated exactly once. The bonus depends only on the state's
    features. The one case with no density gain is an empty vector scored
    against a table with no stored factors: the model is certain of it
    (``rho = rho' = 1``), so the count is infinite and the bonus zero.
    """
    log_rho = table.log_visit_density(v)
    table.update(v)
    log_rho_prime = table.log_visit_density(v)
    if log_rho == log_rho_prime == 0.0 and not v and len(table) == 0:
        return PseudoCountResult(0.0, 0.0, math.inf, 0.0)
    n_hat = pseudo_count(log_rho, log_rho_prime, cfg.variant)
    return PseudoCountResult(log_rho, log_rho_prime, n_hat, bonus_from_count(n_hat, cfg.beta))
