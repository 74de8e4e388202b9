from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cosetprog import (
    DomainError,
    GroupSet,
    GroupSpec,
    difference_set,
    doubling,
    iterated_sumset,
    plunnecke_check,
    sumset,
)
from cosetprog.generators import gen_random

from conftest import oracle_iterated, oracle_sumset


def _interval(spec, lo, hi):
    return GroupSet.from_coords(spec, [(i % spec.orders[0],) for i in range(lo, hi + 1)])


def test_sumset_progression():
    z8 = GroupSpec((8,))
    a = _interval(z8, 0, 2)
    assert [e.coords[0] for e in sumset(a, a).elements()] == [0, 1, 2, 3, 4]


def test_sumset_subgroup_idempotent():
    g = GroupSpec((2, 2))
    a = GroupSet.full(g)
    assert sumset(a, a) == a


def test_sumset_zero_identity():
    z8 = GroupSpec((8,))
    b = GroupSet.from_coords(z8, [(3,), (5,)])
    zero = GroupSet.from_coords(z8, [(0,)])
    assert sumset(zero, b) == b


def test_iterated_examples():
    z8 = GroupSpec((8,))
    a = _interval(z8, 0, 1)
    got = sorted(e.coords[0] for e in iterated_sumset(a, 2, 2).elements())
    assert got == [0, 1, 2, 6, 7]
    assert iterated_sumset(a, 1, 0) == a
    z16 = GroupSpec((16,))
    b = GroupSet.from_coords(z16, [(0,), (1,), (3,)])
    want = oracle_iterated(b, 2, 1)
    assert {tuple(int(c) for c in r) for r in iterated_sumset(b, 2, 1).coords()} == want


def test_iterated_rejects_empty_folds():
    z8 = GroupSpec((8,))
    a = _interval(z8, 0, 1)
    with pytest.raises(DomainError):
        iterated_sumset(a, 0, 0)


def test_doubling_examples():
    z32 = GroupSpec((32,))
    ap = _interval(z32, 0, 4)
    assert doubling(ap).k == Fraction(9, 5)
    g = GroupSpec((8,))
    sub = GroupSet.from_coords(g, [(0,), (4,)])
    assert doubling(sub).k == 1


def test_doubling_counterexample_instance():
    from cosetprog import gen_counterexample

    report = gen_counterexample([2, 3], 5)
    assert (report.size, report.sumset_size) == (20, 30)
    assert report.doubling == Fraction(3, 2)


def test_doubling_empty_rejected():
    with pytest.raises(DomainError):
        doubling(GroupSet.empty(GroupSpec((4,))))


def test_plunnecke_examples():
    z8 = GroupSpec((8,))
    a = _interval(z8, 0, 1)
    rep = plunnecke_check(a, 2, 2)
    assert rep.holds and rep.lhs == 5
    assert rep.rhs == Fraction(3, 2) ** 4 * 2
    sub = GroupSet.from_coords(z8, [(0,), (4,)])
    rep2 = plunnecke_check(sub, 3, 1)
    assert rep2.holds and rep2.lhs == 2 and rep2.rhs == 2


def test_sumset_matches_oracle_small():
    for seed in range(6):
        spec = GroupSpec((6, 4)) if seed % 2 else GroupSpec((24,))
        a = gen_random(spec, 5, seed)
        b = gen_random(spec, 4, seed + 100)
        got = {tuple(int(c) for c in r) for r in sumset(a, b).coords()}
        assert got == oracle_sumset(a, b)


@pytest.mark.parametrize("orders", [(16,), (4, 4), (2, 2, 2, 2)])
def test_sumset_commutative_associative(orders):
    spec = GroupSpec(orders)
    a = gen_random(spec, 4, 1)
    b = gen_random(spec, 4, 2)
    c = gen_random(spec, 3, 3)
    assert sumset(a, b) == sumset(b, a)
    assert sumset(sumset(a, b), c) == sumset(a, sumset(b, c))


def test_contains_zero_implies_subset():
    spec = GroupSpec((32,))
    a = GroupSet.from_coords(spec, [(0,), (3,), (7,)])
    assert a.is_subset(sumset(a, a))


def test_iterated_recursion_consistency():
    spec = GroupSpec((64,))
    a = gen_random(spec, 6, 9)
    for k in range(2, 4):
        assert iterated_sumset(a, k, 1) == sumset(iterated_sumset(a, k - 1, 1), a)


@given(st.integers(min_value=2, max_value=64), st.integers(min_value=0, max_value=2**30))
@settings(max_examples=120, deadline=None)
def test_plunnecke_property(n, seed):
    spec = GroupSpec((n,))
    size = 1 + seed % min(n, 10)
    a = gen_random(spec, size, seed)
    for k, l in [(1, 1), (2, 0), (2, 1), (2, 2)]:
        assert plunnecke_check(a, k, l).holds


@given(st.integers(min_value=2, max_value=128), st.integers(min_value=0, max_value=2**30))
@settings(max_examples=80, deadline=None)
def test_difference_set_squared_bound(n, seed):
    spec = GroupSpec((n,))
    a = gen_random(spec, 1 + seed % min(n, 12), seed)
    k = doubling(a).k
    assert difference_set(a).size <= k * k * a.size
