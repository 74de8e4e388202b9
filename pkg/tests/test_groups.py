from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cosetprog import (
    DomainError,
    GroupSpec,
    StructureError,
    char_arg_fraction,
    char_order,
    enumerate_group,
    hom_from_character,
    kernel_of_characters,
    subgroup_closure,
    subgroup_decomposition,
)
from cosetprog.groups import reduce_generators


def test_elem_add_modular():
    g = GroupSpec((8, 3))
    assert (g.element((7, 2)) + g.element((2, 2))).coords == (1, 1)


def test_neg_identity():
    g = GroupSpec((8, 3))
    assert (-g.zero()).coords == (0, 0)


def test_inverse_law():
    g = GroupSpec((8,))
    x = g.element((5,))
    assert (x + (-x)).coords == (0,)


def test_spec_mismatch_raises():
    a = GroupSpec((8,)).element((1,))
    b = GroupSpec((9,)).element((1,))
    with pytest.raises(StructureError):
        a + b


def test_char_arg_fraction_examples():
    z8 = GroupSpec((8,))
    assert char_arg_fraction(z8.character((1,)), z8.element((3,))) == Fraction(3, 8)
    assert char_arg_fraction(z8.trivial_character(), z8.element((5,))) == 0
    g = GroupSpec((2, 3))
    assert char_arg_fraction(g.character((1, 1)), g.element((1, 2))) == Fraction(1, 6)


def test_char_order_examples():
    z8 = GroupSpec((8,))
    assert char_order(z8.character((2,))) == 4
    assert char_order(z8.trivial_character()) == 1
    g = GroupSpec((4, 6))
    gamma = g.character((1, 1))
    assert char_order(gamma) == 12
    # oracle: smallest q >= 1 with q*gamma trivial, by scan
    q = 1
    while not all(q * c % n == 0 for c, n in zip(gamma.coords, g.orders)):
        q += 1
    assert q == 12


def test_hom_from_character_identity_case():
    z8 = GroupSpec((8,))
    psi = hom_from_character(z8.character((1,)))
    assert psi.target.orders == (8,)
    for x in range(8):
        assert psi(z8.element((x,))).coords == (x,)


def test_hom_from_character_agrees_with_arg():
    z8 = GroupSpec((8,))
    gamma = z8.character((2,))
    psi = hom_from_character(gamma)
    assert psi.target.orders == (4,)
    for x in range(8):
        e = z8.element((x,))
        assert Fraction(psi(e).coords[0], 4) == gamma.arg_fraction(e)


def test_hom_from_character_projection():
    g = GroupSpec((2, 3))
    psi = hom_from_character(g.character((0, 1)))
    assert psi.target.orders == (3,)
    for x in range(2):
        for y in range(3):
            assert psi(g.element((x, y))).coords == (y,)


def test_hom_from_trivial_character_rejected():
    with pytest.raises(DomainError):
        hom_from_character(GroupSpec((8,)).trivial_character())


def test_kernel_examples():
    z8 = GroupSpec((8,))
    assert [e.coords for e in kernel_of_characters(z8, [z8.character((1,))]).elements()] == [(0,)]
    assert kernel_of_characters(z8, []).order == 8
    assert [e.coords for e in kernel_of_characters(z8, [z8.character((2,))]).elements()] == [
        (0,),
        (4,),
    ]


def test_enumerate_group():
    g = GroupSpec((2, 2))
    assert [e.coords for e in enumerate_group(g)] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert [e.coords for e in enumerate_group(GroupSpec((1,)))] == [(0,)]
    assert [e.coords for e in enumerate_group(GroupSpec((3,)))] == [(0,), (1,), (2,)]


def test_exponent_annihilates():
    for orders in [(8, 3), (4, 6), (2, 2, 2), (12,)]:
        g = GroupSpec(orders)
        for x in enumerate_group(g):
            assert (g.exponent * x).coords == g.zero().coords


@pytest.mark.parametrize("orders", [(16,), (4, 4), (2, 3, 5), (8, 2), (6, 6)])
def test_char_multiplicativity_exhaustive(orders):
    g = GroupSpec(orders)
    elems = enumerate_group(g)
    for ci in range(g.cardinality):
        gamma = g.character_at(ci)
        for x in elems[:8]:
            for y in elems[:8]:
                lhs = gamma.arg_fraction(x + y)
                rhs = (gamma.arg_fraction(x) + gamma.arg_fraction(y)) % 1
                assert lhs == rhs


@pytest.mark.parametrize("orders", [(12,), (4, 4), (2, 2, 3)])
def test_kernel_size_vs_image(orders):
    g = GroupSpec(orders)
    for ci in range(g.cardinality):
        gamma = g.character_at(ci)
        kernel = kernel_of_characters(g, [gamma])
        image = {gamma.arg_fraction(x) for x in enumerate_group(g)}
        assert kernel.order * len(image) == g.cardinality


def test_subgroup_closure_contains_identity_and_negatives():
    g = GroupSpec((12,))
    sub = subgroup_closure(g, [g.element((8,))])
    assert [e.coords for e in sub.elements()] == [(0,), (4,), (8,)]
    assert g.element((4,)) in sub


def test_reduce_generators_regenerates():
    g = GroupSpec((4, 4))
    sub = kernel_of_characters(g, [g.character((2, 2))])
    regen = subgroup_closure(g, reduce_generators(sub))
    assert regen == sub


@given(st.integers(min_value=2, max_value=30), st.integers(min_value=0, max_value=10**6))
@settings(max_examples=60, deadline=None)
def test_index_roundtrip(n, salt):
    g = GroupSpec((n, (salt % 5) + 1))
    idx = salt % g.cardinality
    assert g.index_of(g.coords_of(idx)) == idx


@pytest.mark.parametrize(
    "orders,gens",
    [
        ((8,), [(2,)]),
        ((4, 4), [(1, 2)]),
        ((4, 4), [(2, 0), (0, 2)]),
        ((2, 4, 8), [(1, 2, 4), (0, 0, 2)]),
        ((6, 6), [(2, 3)]),
        ((9, 3), [(3, 1)]),
    ],
)
def test_subgroup_decomposition_direct_sum(orders, gens):
    g = GroupSpec(orders)
    sub = subgroup_closure(g, [g.element(c) for c in gens])
    dec = subgroup_decomposition(sub)
    assert dec.spec.cardinality == sub.order
    assert len(dec.to_model) == sub.order
    assert sorted(dec.to_model.values()) == list(range(sub.order))
    # invariant factor chain: each order divides the one before
    for a, b in zip(dec.orders, dec.orders[1:]):
        assert a % b == 0
    # the bijection respects addition
    elems = sub.elements()
    for x in elems[:6]:
        for y in elems[:6]:
            mx = dec.spec.element_at(dec.to_model[x.index])
            my = dec.spec.element_at(dec.to_model[y.index])
            assert dec.to_model[(x + y).index] == (mx + my).index


def test_homomorphism_validation():
    from cosetprog import Homomorphism

    g = GroupSpec((4,))
    h = GroupSpec((2,))
    Homomorphism(g, h, ((1,),)).validate()
    bad = Homomorphism(GroupSpec((3,)), h, ((1,),))
    with pytest.raises(DomainError):
        bad.validate()
