"""Bohr sets, lattice successive minima, and progression extraction.

The lattice attached to a Bohr description B(Gamma, rho) is
Lambda = phi(G) + Z^d, where phi maps x to the vector of centered
fractional arguments of the characters.  All minima computations are
exact: arguments are rationals over the common denominator lcm(ord(gamma_j)),
and candidate vectors are enumerated exhaustively (every minimum is at
most 1 because the integer unit vectors lie in the unit cube).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .checks import BoundCheck
from .errors import DomainError, InvariantError, ResourceLimitError, StructureError
from .fourier import BohrSpec
from .groups import (
    DEFAULT_ENUMERATION_CAP,
    Character,
    GroupElement,
    GroupSpec,
    Subgroup,
    kernel_of_characters,
)
from .sumsets import GroupSet, sumset

_CANDIDATE_BUDGET = 1 << 24


def bohr_set(spec_b: BohrSpec, cap: int = DEFAULT_ENUMERATION_CAP) -> GroupSet:
    """Exact membership: circular distance of every argument at most rho."""
    group = spec_b.spec
    group.require_enumerable(cap)
    coords = group.decode(np.arange(group.cardinality, dtype=np.int64))
    mask = np.ones(group.cardinality, dtype=bool)
    num, den = spec_b.rho.numerator, spec_b.rho.denominator
    for gamma in spec_b.chars:
        q = gamma.order()
        t = gamma.arg_numerators(coords)
        circ = np.minimum(t, q - t)
        mask &= circ * den <= num * q
    return GroupSet(group, np.nonzero(mask)[0].astype(np.int64))


def strip_redundant_characters(
    characters: Sequence[Character],
) -> tuple[tuple[Character, ...], tuple[Character, ...]]:
    """Drop trivial and duplicate characters; returns (kept, stripped)."""
    kept: list[Character] = []
    stripped: list[Character] = []
    seen: set[tuple[int, ...]] = set()
    for gamma in characters:
        if gamma.is_trivial() or gamma.coords in seen:
            stripped.append(gamma)
        else:
            kept.append(gamma)
            seen.add(gamma.coords)
    return tuple(kept), tuple(stripped)


@dataclass(frozen=True, eq=False)
class MinimaReport:
    """Successive minima of the unit cube with respect to phi(G) + Z^d."""

    spec: GroupSpec
    chars: tuple[Character, ...]
    stripped: tuple[Character, ...]
    denominator: int
    lambdas: tuple[Fraction, ...]
    vectors: tuple[tuple[Fraction, ...], ...]
    preimages: tuple[GroupElement, ...]
    subgroup: Subgroup
    det: Fraction

    @property
    def dimension(self) -> int:
        return len(self.chars)

    def minkowski_holds(self) -> bool:
        return math.prod(self.lambdas, start=Fraction(1)) <= self.det

    def vectors_independent(self) -> bool:
        return _rational_rank([
            [f for f in vec] for vec in self.vectors
        ]) == len(self.vectors)


def _rational_rank(rows: list[list[Fraction]]) -> int:
    m = [list(map(Fraction, r)) for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for col in range(cols):
        pivot = None
        for r in range(rank, len(m)):
            if m[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pv = m[rank][col]
        m[rank] = [v / pv for v in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [v - factor * p for v, p in zip(m[r], m[rank])]
        rank += 1
    return rank


def _integer_nullspace(rows: list[list[int]], width: int) -> list[list[int]]:
    """Integer basis of the right null space of an integer matrix."""
    m = [[Fraction(v) for v in row] for row in rows]
    pivots: list[int] = []
    rank = 0
    for col in range(width):
        pivot = None
        for r in range(rank, len(m)):
            if m[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pv = m[rank][col]
        m[rank] = [v / pv for v in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [v - factor * p for v, p in zip(m[r], m[rank])]
        pivots.append(col)
        rank += 1
    basis: list[list[int]] = []
    free_cols = [c for c in range(width) if c not in pivots]
    for free in free_cols:
        vec = [Fraction(0)] * width
        vec[free] = Fraction(1)
        for r, col in enumerate(pivots):
            vec[col] = -m[r][free]
        den = math.lcm(*(f.denominator for f in vec))
        basis.append([int(f * den) for f in vec])
    return basis


def successive_minima(
    characters: Sequence[Character],
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> MinimaReport:
    """Exact successive minima, attaining vectors, and group preimages.

    Candidates are the centered lifts of phi(G) together with the integer
    shifts keeping every coordinate within max-norm 1, plus the unit
    vectors; vectors are taken in order of (norm, preimage, shift pattern)
    and kept when rationally independent of those already chosen.
    """
    chars = list(characters)
    if not chars:
        raise DomainError("successive minima need at least one character")
    spec = chars[0].spec
    for c in chars:
        if c.spec != spec:
            raise StructureError("characters of different groups")
    kept, stripped = strip_redundant_characters(chars)
    if not kept:
        raise DomainError("all characters are trivial or redundant")
    d = len(kept)
    spec.require_enumerable(cap)
    subgroup = kernel_of_characters(spec, kept, cap)
    det = Fraction(subgroup.order, spec.cardinality)

    m_den = math.lcm(*(g.order() for g in kept))
    coords = spec.decode(np.arange(spec.cardinality, dtype=np.int64))
    cols = []
    for gamma in kept:
        q = gamma.order()
        t = gamma.arg_numerators(coords) * (m_den // q)
        cols.append(np.where(2 * t > m_den, t - m_den, t))  # centered (-1/2, 1/2]
    table = np.stack(cols, axis=1)

    rows, first = np.unique(table, axis=0, return_index=True)
    preim = first.astype(np.int64)
    nonzero_rows = ~np.all(rows == 0, axis=1)
    rows, preim = rows[nonzero_rows], preim[nonzero_rows]
    if len(rows) + 1 != spec.cardinality // subgroup.order:
        raise InvariantError("image size does not match the kernel index")
    if len(rows) << d > _CANDIDATE_BUDGET:
        raise ResourceLimitError(
            f"minima candidate enumeration too large in dimension {d}"
        )

    # expand each row by the sign selections that keep max-norm <= 1
    cand_rows: list[np.ndarray] = []
    cand_pre: list[np.ndarray] = []
    cand_sel: list[np.ndarray] = []
    alt = np.where(rows > 0, rows - m_den, rows + m_den)
    for bits in range(1 << d):
        sel = np.array([(bits >> j) & 1 for j in range(d)], dtype=bool)
        if len(rows):
            valid = ~np.any(sel[None, :] & (rows == 0), axis=1)
            chosen = np.where(sel[None, :], alt, rows)[valid]
            cand_rows.append(chosen)
            cand_pre.append(preim[valid])
            cand_sel.append(np.full(valid.sum(), bits, dtype=np.int64))
    unit_rows = np.eye(d, dtype=np.int64) * m_den
    cand_rows.append(unit_rows)
    cand_pre.append(np.zeros(d, dtype=np.int64))
    cand_sel.append(np.arange(d, dtype=np.int64) + (1 << d))
    all_rows = np.concatenate(cand_rows)
    all_pre = np.concatenate(cand_pre)
    all_sel = np.concatenate(cand_sel)

    norms = np.abs(all_rows).max(axis=1)
    order = np.lexsort((all_sel, all_pre, norms))
    all_rows, all_pre, all_sel, norms = (
        all_rows[order],
        all_pre[order],
        all_sel[order],
        norms[order],
    )

    chosen_rows: list[list[int]] = []
    lambdas: list[Fraction] = []
    vectors: list[tuple[Fraction, ...]] = []
    preimages: list[GroupElement] = []
    available = np.ones(len(all_rows), dtype=bool)
    while len(chosen_rows) < d:
        if not chosen_rows:
            independent = available
        else:
            basis = _integer_nullspace(chosen_rows, d)
            if not basis:
                raise InvariantError("null space vanished before reaching rank d")
            peak = max(abs(v) for row in basis for v in row) or 1
            if peak * m_den * d < (1 << 62):
                nmat = np.array(basis, dtype=np.int64).T
                dots = all_rows @ nmat
            else:
                nmat = np.array(basis, dtype=object).T
                dots = all_rows.astype(object) @ nmat
            independent = available & np.any(dots != 0, axis=1)
        hits = np.nonzero(independent)[0]
        if not len(hits):
            raise InvariantError("candidate enumeration cannot reach rank d")
        pick = int(hits[0])
        available[pick] = False
        chosen_rows.append([int(v) for v in all_rows[pick]])
        lambdas.append(Fraction(int(norms[pick]), m_den))
        vectors.append(tuple(Fraction(int(v), m_den) for v in all_rows[pick]))
        preimages.append(spec.element_at(int(all_pre[pick])))

    return MinimaReport(
        spec=spec,
        chars=kept,
        stripped=stripped,
        denominator=m_den,
        lambdas=tuple(lambdas),
        vectors=tuple(vectors),
        preimages=tuple(preimages),
        subgroup=subgroup,
        det=det,
    )


@dataclass(frozen=True, eq=False)
class CosetProgression:
    """P + H: base + integer spans of generators, plus a subgroup, direct sum.

    Bounds are inclusive (lo, hi) coefficient ranges per generator; the
    ``proper`` flag records the outcome of a counting check, it is never
    assumed.
    """

    spec: GroupSpec
    base: GroupElement
    generators: tuple[GroupElement, ...]
    bounds: tuple[tuple[int, int], ...]
    subgroup: Subgroup
    proper: bool

    def __post_init__(self) -> None:
        if self.base.spec != self.spec or self.subgroup.spec != self.spec:
            raise StructureError("progression pieces live in different groups")
        for g in self.generators:
            if g.spec != self.spec:
                raise StructureError("generator from a different group")
        if len(self.generators) != len(self.bounds):
            raise StructureError("generator and bound counts differ")
        for lo, hi in self.bounds:
            if lo > hi:
                raise DomainError(f"empty coefficient range [{lo}, {hi}]")

    @property
    def dimension(self) -> int:
        return len(self.generators)

    @property
    def formal_size(self) -> int:
        return self.subgroup.order * math.prod(
            hi - lo + 1 for lo, hi in self.bounds
        )

    @property
    def is_symmetric(self) -> bool:
        return all(lo == -hi for lo, hi in self.bounds)


def materialize(
    cp: CosetProgression, cap: int = DEFAULT_ENUMERATION_CAP
) -> GroupSet:
    """The underlying element set, built layer by layer with dedup."""
    spec = cp.spec
    spec.require_enumerable(cap)
    current = GroupSet(spec, spec.add_scalar(cp.subgroup.indices, cp.base.index))
    for g, (lo, hi) in zip(cp.generators, cp.bounds):
        multiples = GroupSet.from_elements(
            [spec.element([l * c for c in g.coords]) for l in range(lo, hi + 1)]
        )
        current = sumset(current, multiples)
    return current


def properness_check(
    cp: CosetProgression, cap: int = DEFAULT_ENUMERATION_CAP
) -> bool:
    """Proper iff every formal sum is distinct: count equals the formal size."""
    return materialize(cp, cap).size == cp.formal_size


def to_one_sided(cp: CosetProgression) -> CosetProgression:
    """Shift the base so every coefficient range starts at zero."""
    base = cp.base
    for g, (lo, _) in zip(cp.generators, cp.bounds):
        base = base + cp.spec.element([lo * c for c in g.coords])
    return CosetProgression(
        spec=cp.spec,
        base=base,
        generators=cp.generators,
        bounds=tuple((0, hi - lo) for lo, hi in cp.bounds),
        subgroup=cp.subgroup,
        proper=cp.proper,
    )


@dataclass(frozen=True, eq=False)
class BohrExtraction:
    """A verified proper coset progression inside a Bohr set."""

    progression: CosetProgression
    minima: MinimaReport
    bohr_size: int
    checks: tuple[BoundCheck, ...]


def progression_from_bohr(
    spec_b: BohrSpec, cap: int = DEFAULT_ENUMERATION_CAP
) -> BohrExtraction:
    """Extract a proper coset progression P + H inside B(Gamma, rho).

    Coefficient ranges are L_j = floor(rho / (d lambda_j)) on either side of
    zero.  Three guarantees are verified before returning: containment in
    the Bohr set, properness by counting, and the exact size lower bound
    (rho/d)^d |G|.  A failure of any of them raises InvariantError.
    """
    rho = spec_b.rho
    if not Fraction(0) < rho < Fraction(1, 4):
        raise DomainError("extraction requires 0 < rho < 1/4")
    if not spec_b.chars:
        raise DomainError("extraction requires at least one character")
    minima = successive_minima(spec_b.chars, cap)
    d = minima.dimension
    group = spec_b.spec
    # zero-range generators contribute nothing to the set; dropping them
    # keeps the reported dimension equal to what the progression spans
    # (the size bound below still uses the full minima dimension d)
    generators = []
    bounds = []
    for g, lam in zip(minima.preimages, minima.lambdas):
        l_j = math.floor(rho / (d * lam))
        if l_j >= 1:
            generators.append(g)
            bounds.append((-l_j, l_j))
    cp = CosetProgression(
        spec=group,
        base=group.zero(),
        generators=tuple(generators),
        bounds=tuple(bounds),
        subgroup=minima.subgroup,
        proper=False,
    )
    realized = materialize(cp, cap)
    bset = bohr_set(spec_b, cap)
    contained = realized.is_subset(bset)
    proper = realized.size == cp.formal_size
    cp = CosetProgression(
        spec=group,
        base=cp.base,
        generators=cp.generators,
        bounds=cp.bounds,
        subgroup=cp.subgroup,
        proper=proper,
    )
    size_lower = (rho / d) ** d * group.cardinality
    size_ok = realized.size >= size_lower
    checks = (
        BoundCheck.make("bohr_minkowski", minima.minkowski_holds(),
                        math.prod(minima.lambdas, start=Fraction(1)), minima.det),
        BoundCheck.make("bohr_progression_contained", contained,
                        realized.size, bset.size),
        BoundCheck.make("bohr_progression_proper", proper,
                        realized.size, cp.formal_size),
        BoundCheck.make("bohr_progression_size", size_ok,
                        Fraction(realized.size), size_lower),
    )
    for check in checks:
        if not check.passed:
            raise InvariantError(f"guaranteed property failed: {check.line()}")
    return BohrExtraction(
        progression=cp, minima=minima, bohr_size=bset.size, checks=checks
    )
