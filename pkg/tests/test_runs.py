from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from irlattice import (
    BudgetExceeded,
    InvalidRun,
    InvalidScale,
    RunKind,
    canonicalize_set_run,
    enumerate_runs,
    gain_sum,
    make_scale,
    parse_run,
    rank_run,
)


def test_indicator_default():
    s = make_scale(2)
    assert s.gains == (0, 1, 2)
    assert s.is_indicator and s.top_gain == 2


def test_custom_gains_exact():
    s = make_scale(2, ["0", "1/2", 3])
    assert s.gains == (0, Fraction(1, 2), 3)
    assert not s.is_indicator


@pytest.mark.parametrize("c, gains", [
    (0, None),
    (2, [1, 2, 3]),
    (2, [0, 2, 1]),
    (2, [0, 1, 1]),
    (2, [0, 1]),
    (1, [0, 0.5]),
    (1, [0, "0.5"]),
])
def test_bad_scales(c, gains):
    with pytest.raises(InvalidScale):
        make_scale(c, gains)


def test_canonical_set_run():
    r = canonicalize_set_run([0, 2, 1, 1])
    assert r.degrees == (2, 1, 1, 0)
    assert str(r) == "{2,1,1,0}"
    assert str(rank_run([0, 1])) == "(0,1)"


def test_degree_out_of_range():
    with pytest.raises(InvalidRun):
        rank_run([0, 3], make_scale(2))
    with pytest.raises(InvalidRun):
        parse_run("0a1", RunKind.RANK)


@pytest.mark.parametrize("c, n", [(1, 1), (1, 4), (2, 3), (2, 4), (3, 2), (1, 6)])
def test_space_sizes(c, n):
    s = make_scale(c)
    rank = enumerate_runs(s, n, RunKind.RANK)
    sets = enumerate_runs(s, n, RunKind.SET)
    assert len(rank) == (c + 1) ** n
    assert len(sets) == comb(n + c, c)
    for space in (rank, sets):
        assert len(set(space)) == len(space)
        assert space.bottom.degrees == (0,) * n
        assert space.top.degrees == (c,) * n


def test_space_order_and_index():
    space = enumerate_runs(make_scale(1), 2, RunKind.RANK)
    assert [r.literal for r in space] == ["00", "01", "10", "11"]
    assert space.index("10") == 2
    assert space.index([1, 1]) == 3
    assert len(enumerate_runs(make_scale(2), 4, RunKind.SET)) == 15


def test_budget():
    with pytest.raises(BudgetExceeded) as exc:
        enumerate_runs(make_scale(9), 10, RunKind.RANK)
    assert exc.value.required == 10 ** 10


def test_gain_sum():
    s = make_scale(2, [0, 1, 5])
    assert gain_sum(rank_run([2, 1, 0]), s) == 6


runs = st.integers(1, 3).flatmap(
    lambda c: st.lists(st.integers(0, c), min_size=1, max_size=6).map(lambda d: (c, d)))


@given(runs)
def test_canonicalize_idempotent(cd):
    _, d = cd
    r = canonicalize_set_run(d)
    assert canonicalize_set_run(r.degrees) == r


@given(runs, st.randoms())
def test_canonicalize_permutation_invariant(cd, rnd):
    _, d = cd
    shuffled = list(d)
    rnd.shuffle(shuffled)
    assert canonicalize_set_run(shuffled) == canonicalize_set_run(d)
