import pytest
from hypothesis import given
from hypothesis import strategies as st

from phieb.features import FeatureMapSpec, FeatureVector, intersect, validate

id_sets = st.frozensets(st.integers(0, 60), max_size=20)


def fv(*ids):
    return FeatureVector(ids)


def test_intersect_examples():
    assert intersect(fv(1, 3, 5), fv(3, 5, 7)) == fv(3, 5)
    assert intersect(fv(), fv(1, 2)) == fv()
    assert intersect(fv(2), fv(2)) == fv(2)


def test_validate_examples():
    assert validate([1, 2, 3]) is None
    assert validate([2, 2]).positions == (0, 1)
    assert validate([3, 1]).positions == (0, 1)
    assert validate([0, 4, 9, 9]).positions == (2, 3)


def test_constructor_rejects_bad_input():
    with pytest.raises(ValueError):
        FeatureVector([3, 1])
    with pytest.raises(ValueError):
        FeatureVector([-1])
    assert FeatureVector.from_ids([5, 1, 5, 3]) == fv(1, 3, 5)
    assert FeatureVector() == ()


def test_membership_and_immutability():
    v = fv(2, 4, 8, 1000)
    assert 8 in v and 1000 in v
    assert 3 not in v and 0 not in v and 2000 not in v
    with pytest.raises(TypeError):
        v[0] = 1  # type: ignore[index]


@given(id_sets)
def test_sorted_vectors_validate(ids):
    assert validate(sorted(ids)) is None


@given(st.lists(st.integers(0, 30), min_size=2, max_size=15))
def test_validate_flags_every_bad_list(ids):
    ok = all(a < b for a, b in zip(ids, ids[1:]))
    bad = validate(ids)
    assert (bad is None) == ok
    if bad is not None:
        i, j = bad.positions
        assert j == i + 1 and ids[i] >= ids[j]
        assert all(a < b for a, b in zip(ids[: j], ids[1:j]))


@given(id_sets, id_sets, id_sets)
def test_intersect_laws(a, b, c):
    va, vb, vc = (FeatureVector(sorted(x)) for x in (a, b, c))
    ab = intersect(va, vb)
    assert ab == intersect(vb, va)
    assert intersect(ab, vc) == intersect(va, intersect(vb, vc))
    assert len(ab) <= min(len(va), len(vb))
    assert set(ab) == a & b
    assert validate(ab) is None


def test_feature_map_spec_is_deterministic():
    spec = FeatureMapSpec("parity", lambda obs: FeatureVector.from_ids([obs % 2, 2 + obs // 2]))
    assert spec(7) == spec(7) == fv(1, 5)
    assert spec.name == "parity"
