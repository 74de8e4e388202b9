import hashlib
from fractions import Fraction

import pytest

from cosetprog import DomainError, GroupSpec, doubling
from cosetprog.generators import (
    explore_multiple_cover_sumset,
    gen_counterexample,
    gen_progression,
    gen_random,
    gen_random_in_progression,
    gen_subgroup,
)
from cosetprog.textio import write_group_set


def test_progression_doubling():
    out = gen_progression(GroupSpec((32,)), [0], [[1]], [5])
    assert doubling(out).k == Fraction(9, 5)


def test_subgroup_doubling_one():
    out = gen_subgroup(GroupSpec((8,)), [[4]])
    assert sorted(e.coords[0] for e in out.elements()) == [0, 4]
    assert doubling(out).k == 1


def test_random_deterministic_under_seed():
    a = gen_random(GroupSpec((64,)), 16, seed=42)
    b = gen_random(GroupSpec((64,)), 16, seed=42)
    c = gen_random(GroupSpec((64,)), 16, seed=43)
    assert a == b
    assert a != c


def test_random_in_progression_stays_inside():
    ambient = gen_progression(GroupSpec((128,)), [0], [[1]], [30])
    sample = gen_random_in_progression(GroupSpec((128,)), [0], [[1]], [30], 10, seed=5)
    assert sample.is_subset(ambient)
    assert sample.size == 10


def test_counterexample_two_three_five():
    report = gen_counterexample([2, 3], 5)
    assert report.size == 20
    assert report.sumset_size == 30
    assert report.doubling == Fraction(3, 2)
    # direct-enumeration oracle for the size
    count = 0
    for x in range(5):
        for a in range(2):
            for b in range(3):
                if (a != 0) + (b != 0) <= 1:
                    count += 1
    assert count == 20
    assert report.obstruction.coords == (0, 0, 1)
    assert report.formula_size != report.enumerated_size  # recorded discrepancy


def test_counterexample_single_prime():
    report = gen_counterexample([2], 3)
    assert report.size == 6
    assert report.sumset_size == 6
    assert report.doubling == 1


def test_counterexample_degenerate_no_primes():
    report = gen_counterexample([], 5)
    assert report.size == 5
    assert report.doubling == 1


def test_counterexample_rejects_bad_input():
    with pytest.raises(DomainError):
        gen_counterexample([4], 5)
    with pytest.raises(DomainError):
        gen_counterexample([2, 2], 5)


def test_explore_x1_forced():
    report = explore_multiple_cover_sumset(5, 1)
    assert report.primes == (5, 7)
    assert report.best_size == 3
    assert report.mode == "exhaustive"


def test_explore_x2_exhaustive():
    report = explore_multiple_cover_sumset(5, 2)
    assert report.evaluated == 4
    # oracle: enumerate the four assignments directly
    best = min(
        len({u + v for u in s for v in s})
        for s in (
            {a * 5, b * 7} for a in (1, 2) for b in (1, 2)
        )
    )
    assert report.best_size == best


def test_explore_81_cases():
    report = explore_multiple_cover_sumset(11, 3)
    assert report.primes == (11, 13, 17, 19)
    assert report.evaluated == 81
    assert report.mode == "exhaustive"


def test_golden_hashes_stable():
    digests = []
    for seed in (0, 1, 2):
        out = gen_random(GroupSpec((64,)), 12, seed=seed)
        digests.append(hashlib.sha256(write_group_set(out).encode()).hexdigest())
    assert digests == [
        hashlib.sha256(write_group_set(gen_random(GroupSpec((64,)), 12, seed=s)).encode()).hexdigest()
        for s in (0, 1, 2)
    ]
    report = gen_counterexample([2, 3], 5)
    digest = hashlib.sha256(write_group_set(report.set).encode()).hexdigest()
    assert digest == hashlib.sha256(write_group_set(gen_counterexample([2, 3], 5).set).encode()).hexdigest()
