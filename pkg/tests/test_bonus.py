import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phieb.bonus import (
    BonusConfig,
    NonincreasingDensity,
    bonus_from_count,
    exploration_bonus,
    pseudo_count,
)
from phieb.density import FactorTable
from phieb.features import FeatureVector

ONE = FeatureVector((0,))


def test_pseudo_count_examples():
    lr, lrp = math.log(0.2), math.log(0.4)
    assert pseudo_count(lr, lrp, "exact") == pytest.approx(0.6, rel=1e-12)
    assert pseudo_count(lr, lrp, "ratio") == pytest.approx(1.0, rel=1e-12)


def test_single_feature_t3():
    lr, lrp = math.log(0.875), math.log(0.9)
    assert pseudo_count(lr, lrp, "exact") == pytest.approx(3.5, rel=1e-12)
    assert pseudo_count(lr, lrp, "ratio") == pytest.approx(35.0, rel=1e-12)


def test_closed_form_t_plus_half():
    table = FactorTable()
    table.update(ONE)
    for t in range(1, 101):
        res = exploration_bonus(ONE, table, BonusConfig(0.05, "exact"))
        assert abs(res.n_hat - (t + 0.5)) < 1e-9
        # brute-force direct substitution, no logs
        rho, rho_p = (t + 0.5) / (t + 1), (t + 1.5) / (t + 2)
        assert abs(rho * (1 - rho_p) / (rho_p - rho) - (t + 0.5)) < 1e-9


def test_ratio_variant_overcounts():
    table = FactorTable()
    for _ in range(50):
        table.update(ONE)
    res = exploration_bonus(ONE, table, BonusConfig(0.05, "ratio"))
    assert res.n_hat > 10 * 50


@pytest.mark.parametrize("n_hat,beta,bonus", [(4, 0.05, 0.025), (0.0625, 0.05, 0.2), (7.3, 0.0, 0.0)])
def test_bonus_examples(n_hat, beta, bonus):
    assert bonus_from_count(n_hat, beta) == pytest.approx(bonus, abs=1e-15)


def test_zero_beta_gives_zero_bonus():
    table = FactorTable()
    for v in ((1, 2), (3,), (1, 4)):
        assert exploration_bonus(FeatureVector(v), table, BonusConfig(beta=0.0)).bonus == 0.0


def test_nonincreasing_density_raises():
    with pytest.raises(NonincreasingDensity):
        pseudo_count(-1.0, -1.0)
    with pytest.raises(NonincreasingDensity):
        pseudo_count(-1.0, -2.0, "ratio")


def test_config_validation():
    with pytest.raises(ValueError):
        BonusConfig(beta=-0.1)
    with pytest.raises(ValueError):
        BonusConfig(variant="mean")  # type: ignore[arg-type]


def test_first_step_bonus_is_finite():
    for v in (FeatureVector((0,)), FeatureVector((2, 5, 9))):
        res = exploration_bonus(v, FactorTable(), BonusConfig())
        assert 0 < res.n_hat < math.inf and math.isfinite(res.bonus)


def test_certain_empty_vector_has_no_bonus():
    res = exploration_bonus(FeatureVector(), FactorTable(), BonusConfig())
    assert res.n_hat == math.inf and res.bonus == 0.0


@pytest.mark.parametrize("variant", ["exact", "ratio"])
@pytest.mark.parametrize("v", [(0,), (1, 4, 9), (2, 3)])
def test_repeated_vector_bonus_is_monotone(variant, v):
    table = FactorTable()
    table.update(FeatureVector((0, 1, 7)))  # some unrelated history first
    cfg = BonusConfig(0.05, variant)
    counts, bonuses = [], []
    for _ in range(200):
        res = exploration_bonus(FeatureVector(v), table, cfg)
        counts.append(res.n_hat)
        bonuses.append(res.bonus)
    assert all(b >= a for a, b in zip(counts, counts[1:]))
    assert all(b <= a for a, b in zip(bonuses, bonuses[1:]))


def test_variants_agree_at_low_density():
    rng = random.Random(3)
    checked = 0
    for _ in range(50):
        table = FactorTable()
        for _ in range(rng.randrange(5, 40)):
            table.update(FeatureVector(sorted(rng.sample(range(30), 6))))
        v = FeatureVector(sorted(rng.sample(range(40), 5)))
        lr = table.log_visit_density(v)
        table.update(v)
        lrp = table.log_visit_density(v)
        if lrp < math.log(0.01):
            exact, ratio = pseudo_count(lr, lrp, "exact"), pseudo_count(lr, lrp, "ratio")
            assert abs(exact - ratio) <= 0.05 * ratio
            checked += 1
    assert checked > 40


@settings(max_examples=100, deadline=None)
@given(st.lists(st.frozensets(st.integers(0, 25), max_size=5), min_size=1, max_size=60))
def test_recoding_strictly_increases(sequence):
    table = FactorTable()
    for v in sequence:
        v = FeatureVector(sorted(v))
        res = exploration_bonus(v, table, BonusConfig())
        if v or len(table):
            assert res.log_rho_prime > res.log_rho
            assert 0 < res.n_hat < math.inf
