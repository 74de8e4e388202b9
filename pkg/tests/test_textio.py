from fractions import Fraction

import pytest

from cosetprog import (
    CosetProgression,
    DomainError,
    FreimanMap,
    GroupSet,
    GroupSpec,
    subgroup_closure,
)
from cosetprog.textio import (
    fmt_float,
    fmt_fraction,
    parse_fraction,
    read_freiman_map,
    read_group_set,
    read_int_set,
    read_progression,
    write_freiman_map,
    write_group_set,
    write_int_set,
    write_progression,
)


def test_fraction_roundtrip():
    for f in (Fraction(3, 4), Fraction(5), Fraction(-7, 2)):
        assert parse_fraction(fmt_fraction(f)) == f


def test_float_format_significant_digits():
    assert fmt_float(0.1234567890123456) == "0.123456789012"
    assert fmt_float(1e-9) == "1e-09"


def test_group_set_roundtrip():
    g = GroupSpec((8, 3))
    a = GroupSet.from_coords(g, [(7, 2), (0, 0), (3, 1)])
    text = write_group_set(a)
    assert read_group_set(text) == a


def test_group_set_comments_ignored():
    text = "# heading\ngroup 6\nelem 1 # inline\nelem 4\n"
    a = read_group_set(text)
    assert sorted(e.coords[0] for e in a.elements()) == [1, 4]


def test_group_set_rejects_bad_arity():
    with pytest.raises(DomainError):
        read_group_set("group 4 4\nelem 1\n")


def test_int_set_roundtrip():
    values = [5, -3, 12]
    assert read_int_set(write_int_set(values)) == sorted(set(values))


def test_progression_roundtrip():
    g = GroupSpec((16,))
    h = subgroup_closure(g, [g.element((8,))])
    cp = CosetProgression(
        g, g.element((3,)), (g.element((1,)), g.element((5,))),
        ((-2, 2), (0, 1)), h, True,
    )
    back = read_progression(write_progression(cp))
    assert back.base.coords == (3,)
    assert [x.coords for x in back.generators] == [(1,), (5,)]
    assert back.bounds == ((-2, 2), (0, 1))
    assert back.subgroup == h
    assert back.proper


def test_freiman_map_roundtrip():
    g = GroupSpec((8,))
    t = GroupSpec((5,))
    a = GroupSet.from_coords(g, [(0,), (1,), (2,)])
    phi = FreimanMap(a, t, {0: 0, 1: 1, 2: 2}, 2)
    back = read_freiman_map(write_freiman_map(phi))
    assert back.domain == a
    assert back.target == t
    assert back.table == phi.table
    assert back.order == 2


def test_writers_deterministic():
    g = GroupSpec((12,))
    a = GroupSet.from_coords(g, [(4,), (1,), (9,)])
    assert write_group_set(a) == write_group_set(a)
