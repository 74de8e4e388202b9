"""Exact arithmetic for finite abelian groups given as products of cyclic groups.

A group is presented as Z/n1 x ... x Z/nk.  Elements and characters are
coordinate vectors; an element is also identified with its mixed-radix
index, so that lexicographic order on coordinates equals numeric order on
indices.  All values are immutable after construction and every operation
is a pure function, so everything here can be shared freely between
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product as _cartesian
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, InvariantError, ResourceLimitError, StructureError

DEFAULT_ENUMERATION_CAP = 1 << 20


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class GroupSpec:
    """The group Z/n1 x ... x Z/nk, each order >= 1."""

    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        orders = tuple(int(n) for n in self.orders) or (1,)
        if any(n < 1 for n in orders):
            raise DomainError(f"cyclic orders must be positive, got {orders!r}")
        object.__setattr__(self, "orders", orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @cached_property
    def cardinality(self) -> int:
        return math.prod(self.orders)

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*self.orders)

    @cached_property
    def _orders_arr(self) -> np.ndarray:
        return _frozen(np.array(self.orders, dtype=np.int64))

    @cached_property
    def _weights(self) -> np.ndarray:
        # mixed-radix place values: index = sum(coords[i] * w[i])
        w = np.ones(self.rank, dtype=np.int64)
        for i in range(self.rank - 2, -1, -1):
            w[i] = w[i + 1] * self.orders[i + 1]
        return _frozen(w)

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != self.rank:
            raise StructureError(
                f"expected {self.rank} coordinates, got {len(coords)}"
            )
        return tuple(int(c) % n for c, n in zip(coords, self.orders))

    def element(self, coords: Sequence[int]) -> "GroupElement":
        return GroupElement(self, self.reduce(coords))

    def character(self, coords: Sequence[int]) -> "Character":
        return Character(self, self.reduce(coords))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def trivial_character(self) -> "Character":
        return Character(self, (0,) * self.rank)

    def index_of(self, coords: Sequence[int]) -> int:
        idx = 0
        for c, n, w in zip(coords, self.orders, self._weights):
            idx += (int(c) % n) * int(w)
        return idx

    def coords_of(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.cardinality:
            raise DomainError(f"index {index} out of range for {self}")
        coords = []
        for n, w in zip(self.orders, self._weights):
            coords.append((index // int(w)) % n)
        return tuple(coords)

    def element_at(self, index: int) -> "GroupElement":
        return GroupElement(self, self.coords_of(index))

    def character_at(self, index: int) -> "Character":
        return Character(self, self.coords_of(index))

    # --- vectorized index arithmetic -------------------------------------

    def decode(self, indices: np.ndarray) -> np.ndarray:
        """Indices (m,) -> coordinate rows (m, k)."""
        idx = np.asarray(indices, dtype=np.int64)
        return (idx[:, None] // self._weights[None, :]) % self._orders_arr[None, :]

    def encode(self, coords: np.ndarray) -> np.ndarray:
        """Coordinate rows (m, k) -> indices (m,)."""
        c = np.asarray(coords, dtype=np.int64) % self._orders_arr[None, :]
        return c @ self._weights

    def add_pairwise(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """All sums of one index from `a` with one from `b`, as an (m, n) grid."""
        ca = self.decode(np.asarray(a, dtype=np.int64))
        cb = self.decode(np.asarray(b, dtype=np.int64))
        out = np.zeros((len(ca), len(cb)), dtype=np.int64)
        for i in range(self.rank):
            out += ((ca[:, i : i + 1] + cb[None, :, i]) % self.orders[i]) * int(
                self._weights[i]
            )
        return out

    def add_aligned(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Componentwise sums of two equal-length index arrays."""
        ca = self.decode(a)
        cb = self.decode(b)
        return self.encode(ca + cb)

    def add_scalar(self, a: np.ndarray, index: int) -> np.ndarray:
        ca = self.decode(np.asarray(a, dtype=np.int64))
        cx = np.array(self.coords_of(int(index)), dtype=np.int64)
        return self.encode(ca + cx[None, :])

    def negate_indices(self, a: np.ndarray) -> np.ndarray:
        ca = self.decode(np.asarray(a, dtype=np.int64))
        return self.encode(-ca)

    def scale_indices(self, a: np.ndarray, factor: int) -> np.ndarray:
        ca = self.decode(np.asarray(a, dtype=np.int64))
        return self.encode(ca * int(factor))

    def require_enumerable(self, cap: int = DEFAULT_ENUMERATION_CAP) -> None:
        if self.cardinality > cap:
            raise ResourceLimitError(
                f"group of size {self.cardinality} exceeds enumeration cap {cap}"
            )

    def __str__(self) -> str:
        return " x ".join(f"Z/{n}" for n in self.orders)


def _tuple_order(coords: Sequence[int], orders: Sequence[int]) -> int:
    """Order of a coordinate vector in the product of cyclic groups."""
    q = 1
    for c, n in zip(coords, orders):
        q = math.lcm(q, n // math.gcd(int(c), n))
    return q


@dataclass(frozen=True)
class GroupElement:
    """An element of a GroupSpec, coordinates reduced into [0, n_i)."""

    spec: GroupSpec
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != self.spec.rank:
            raise StructureError(
                f"element has {len(self.coords)} coordinates, group has rank "
                f"{self.spec.rank}"
            )
        if any(not 0 <= c < n for c, n in zip(self.coords, self.spec.orders)):
            raise StructureError(f"coordinates {self.coords} out of range")

    @property
    def index(self) -> int:
        return self.spec.index_of(self.coords)

    def order(self) -> int:
        return _tuple_order(self.coords, self.spec.orders)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def _require_same_spec(self, other: "GroupElement") -> None:
        if self.spec != other.spec:
            raise StructureError(
                f"elements of {self.spec} and {other.spec} cannot be combined"
            )

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._require_same_spec(other)
        return self.spec.element(
            [a + b for a, b in zip(self.coords, other.coords)]
        )

    def __neg__(self) -> "GroupElement":
        return self.spec.element([-c for c in self.coords])

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __rmul__(self, scalar: int) -> "GroupElement":
        return self.spec.element([scalar * c for c in self.coords])

    def __repr__(self) -> str:
        return f"({', '.join(map(str, self.coords))})"


def elem_add(a: GroupElement, b: GroupElement) -> GroupElement:
    return a + b


def elem_neg(a: GroupElement) -> GroupElement:
    return -a


@dataclass(frozen=True)
class Character:
    """A character of a GroupSpec: x -> exp(2*pi*i * sum(c_i x_i / n_i)).

    The dual group is written additively, so ``-gamma`` is the inverse
    character and ``gamma + delta`` the pointwise product.
    """

    spec: GroupSpec
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != self.spec.rank:
            raise StructureError(
                f"character has {len(self.coords)} coordinates, group has rank "
                f"{self.spec.rank}"
            )
        if any(not 0 <= c < n for c, n in zip(self.coords, self.spec.orders)):
            raise StructureError(f"coordinates {self.coords} out of range")

    @property
    def index(self) -> int:
        return self.spec.index_of(self.coords)

    def is_trivial(self) -> bool:
        return all(c == 0 for c in self.coords)

    def order(self) -> int:
        return _tuple_order(self.coords, self.spec.orders)

    def arg_fraction(self, x: GroupElement) -> Fraction:
        """(sum c_i x_i / n_i) mod 1 as an exact rational in [0, 1)."""
        if self.spec != x.spec:
            raise StructureError("character and element live in different groups")
        q = self.order()
        t = 0
        for c, xi, n in zip(self.coords, x.coords, self.spec.orders):
            t += xi * (q * c // n)
        return Fraction(t % q, q)

    def circular_distance(self, x: GroupElement) -> Fraction:
        r = self.arg_fraction(x)
        return min(r, 1 - r)

    def value(self, x: GroupElement) -> complex:
        r = self.arg_fraction(x)
        return complex(np.exp(2j * np.pi * float(r)))

    def phase_vector(self) -> np.ndarray:
        """Integer row m with arg = (m . x mod q) / q, q the character order."""
        q = self.order()
        return np.array(
            [q * c // n for c, n in zip(self.coords, self.spec.orders)],
            dtype=np.int64,
        )

    def arg_numerators(self, coords: np.ndarray) -> np.ndarray:
        """Vectorized arg numerators over coordinate rows, denominator order()."""
        q = self.order()
        return (np.asarray(coords, dtype=np.int64) @ self.phase_vector()) % q

    def _require_same_spec(self, other: "Character") -> None:
        if self.spec != other.spec:
            raise StructureError("characters of different groups cannot be combined")

    def __add__(self, other: "Character") -> "Character":
        self._require_same_spec(other)
        return self.spec.character(
            [a + b for a, b in zip(self.coords, other.coords)]
        )

    def __neg__(self) -> "Character":
        return self.spec.character([-c for c in self.coords])

    def __sub__(self, other: "Character") -> "Character":
        return self + (-other)

    def __repr__(self) -> str:
        return f"chi({', '.join(map(str, self.coords))})"


def char_arg_fraction(gamma: Character, x: GroupElement) -> Fraction:
    return gamma.arg_fraction(x)


def char_order(gamma: Character) -> int:
    return gamma.order()


@dataclass(frozen=True)
class Homomorphism:
    """A group homomorphism given by an integer coordinate matrix.

    Row j of the matrix maps source coordinates to target coordinate j,
    taken mod the j-th target order.
    """

    source: GroupSpec
    target: GroupSpec
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.matrix) != self.target.rank:
            raise StructureError("matrix row count must equal target rank")
        if any(len(row) != self.source.rank for row in self.matrix):
            raise StructureError("matrix column count must equal source rank")
        object.__setattr__(
            self,
            "matrix",
            tuple(tuple(int(v) for v in row) for row in self.matrix),
        )

    def validate(self) -> None:
        """Check that all source relations n_i * e_i -> 0 are respected."""
        for i, n in enumerate(self.source.orders):
            for j, m in enumerate(self.target.orders):
                if (n * self.matrix[j][i]) % m != 0:
                    raise DomainError(
                        f"matrix does not respect relation {n}*e_{i} = 0 "
                        f"in target coordinate {j}"
                    )

    def __call__(self, x: GroupElement) -> GroupElement:
        if x.spec != self.source:
            raise StructureError("argument is not in the source group")
        out = [
            sum(m * c for m, c in zip(row, x.coords)) for row in self.matrix
        ]
        return self.target.element(out)

    @cached_property
    def _matrix_arr(self) -> np.ndarray:
        return _frozen(np.array(self.matrix, dtype=np.int64))

    def apply_indices(self, indices: np.ndarray) -> np.ndarray:
        coords = self.source.decode(np.asarray(indices, dtype=np.int64))
        out = coords @ self._matrix_arr.T
        return self.target.encode(out)


def hom_from_character(gamma: Character) -> Homomorphism:
    """The homomorphism psi: G -> Z/q with arg(gamma(x)) = 2*pi*psi(x)/q."""
    if gamma.is_trivial():
        raise DomainError("the trivial character induces no useful homomorphism")
    q = gamma.order()
    row = tuple(
        q * c // n for c, n in zip(gamma.coords, gamma.spec.orders)
    )
    return Homomorphism(gamma.spec, GroupSpec((q,)), (row,))


def enumerate_group(
    spec: GroupSpec, cap: int = DEFAULT_ENUMERATION_CAP
) -> list[GroupElement]:
    """All elements in lexicographic coordinate order."""
    spec.require_enumerable(cap)
    return [
        GroupElement(spec, coords)
        for coords in _cartesian(*(range(n) for n in spec.orders))
    ]


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup given by generators, with its element list materialized."""

    spec: GroupSpec
    generators: tuple[GroupElement, ...]
    indices: np.ndarray  # sorted element indices

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "indices", _frozen(np.asarray(self.indices, dtype=np.int64))
        )

    @property
    def order(self) -> int:
        return len(self.indices)

    def contains_index(self, index: int) -> bool:
        pos = int(np.searchsorted(self.indices, index))
        return pos < len(self.indices) and int(self.indices[pos]) == index

    def __contains__(self, x: GroupElement) -> bool:
        if x.spec != self.spec:
            raise StructureError("element is not in the ambient group")
        return self.contains_index(x.index)

    def elements(self) -> list[GroupElement]:
        return [self.spec.element_at(int(i)) for i in self.indices]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.spec == other.spec and np.array_equal(
            self.indices, other.indices
        )

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} of {self.spec})"


def _closure_indices(spec: GroupSpec, gen_indices: Sequence[int]) -> np.ndarray:
    closed = {0}
    frontier = [0]
    gens = [int(g) for g in gen_indices]
    while frontier:
        current = np.array(frontier, dtype=np.int64)
        new: set[int] = set()
        for g in gens:
            for idx in spec.add_scalar(current, g):
                i = int(idx)
                if i not in closed:
                    closed.add(i)
                    new.add(i)
        frontier = list(new)
    return np.array(sorted(closed), dtype=np.int64)


def subgroup_closure(
    spec: GroupSpec,
    generators: Iterable[GroupElement],
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Subgroup:
    """Smallest subgroup containing the generators."""
    gens = tuple(generators)
    for g in gens:
        if g.spec != spec:
            raise StructureError("generator is not in the ambient group")
    spec.require_enumerable(cap)
    # closure under addition suffices: -g = (order(g)-1)*g in a finite group
    indices = _closure_indices(spec, [g.index for g in gens])
    return Subgroup(spec, gens, indices)


def reduce_generators(subgroup: Subgroup) -> tuple[GroupElement, ...]:
    """A small deterministic generating set, scanning elements in order."""
    spec = subgroup.spec
    gens: list[GroupElement] = []
    have = np.array([0], dtype=np.int64)
    for idx in subgroup.indices:
        i = int(idx)
        pos = int(np.searchsorted(have, i))
        if pos < len(have) and int(have[pos]) == i:
            continue
        gens.append(spec.element_at(i))
        have = _closure_indices(spec, [g.index for g in gens])
        if len(have) == subgroup.order:
            break
    return tuple(gens)


def kernel_of_characters(
    spec: GroupSpec,
    characters: Iterable[Character],
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Subgroup:
    """All x with gamma(x) = 1 for every gamma in the list."""
    chars = tuple(characters)
    for gamma in chars:
        if gamma.spec != spec:
            raise StructureError("character does not belong to the given group")
    spec.require_enumerable(cap)
    coords = spec.decode(np.arange(spec.cardinality, dtype=np.int64))
    mask = np.ones(spec.cardinality, dtype=bool)
    for gamma in chars:
        mask &= gamma.arg_numerators(coords) == 0
    indices = np.nonzero(mask)[0].astype(np.int64)
    kernel = Subgroup(spec, (), indices)
    return Subgroup(spec, reduce_generators(kernel), indices)


@dataclass(frozen=True, eq=False)
class CyclicDecomposition:
    """An internal direct-sum presentation H = <g1> + ... + <gr>.

    ``spec`` is the product Z/m1 x ... x Z/mr (or Z/1 for the trivial
    subgroup); ``to_model``/``from_model`` are index bijections between the
    subgroup inside its ambient group and the product presentation.
    """

    subgroup: Subgroup
    orders: tuple[int, ...]
    generators: tuple[GroupElement, ...]
    spec: GroupSpec
    to_model: dict[int, int]
    from_model: dict[int, int]


def _max_order_element(spec: GroupSpec, indices: np.ndarray) -> GroupElement:
    best: GroupElement | None = None
    best_order = 0
    for idx in indices:
        e = spec.element_at(int(idx))
        q = e.order()
        if q > best_order:
            best, best_order = e, q
    assert best is not None
    return best


def subgroup_decomposition(
    subgroup: Subgroup, cap: int = DEFAULT_ENUMERATION_CAP
) -> CyclicDecomposition:
    """Present a subgroup as an explicit direct sum of cyclic groups.

    Splits off a maximal-order element g at each step, using the first
    ambient character that is primitive on g to cut out a complement.
    Exhaustive over the ambient dual group, so only suitable below the
    enumeration cap.
    """
    spec = subgroup.spec
    spec.require_enumerable(cap)
    orders: list[int] = []
    gens: list[GroupElement] = []
    rem = subgroup.indices
    while len(rem) > 1:
        g = _max_order_element(spec, rem)
        m = g.order()
        split: Character | None = None
        for cidx in range(spec.cardinality):
            gamma = spec.character_at(cidx)
            if gamma.arg_fraction(g).denominator == m:
                split = gamma
                break
        if split is None:
            raise InvariantError("no character is primitive on a maximal element")
        orders.append(m)
        gens.append(g)
        nums = split.arg_numerators(spec.decode(rem))
        rem = rem[nums == 0]
    model_spec = GroupSpec(tuple(orders) or (1,))
    to_model: dict[int, int] = {}
    from_model: dict[int, int] = {}
    for combo in _cartesian(*(range(m) for m in orders or (1,))):
        point = spec.zero()
        for a, g in zip(combo, gens):
            point = point + a * g
        midx = model_spec.index_of(combo if orders else (0,))
        if point.index in to_model:
            raise InvariantError("cyclic decomposition is not a direct sum")
        to_model[point.index] = midx
        from_model[midx] = point.index
    if len(to_model) != subgroup.order:
        raise InvariantError("cyclic decomposition does not cover the subgroup")
    return CyclicDecomposition(
        subgroup=subgroup,
        orders=tuple(orders),
        generators=tuple(gens),
        spec=model_spec,
        to_model=to_model,
        from_model=from_model,
    )
