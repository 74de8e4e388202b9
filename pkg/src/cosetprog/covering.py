"""Covering a set by translates of a progression found inside 2A - 2A.

The iteration keeps adjoining batches of ceil(2K) disjoint translates to
the progression until greedy translate selection stalls, then assembles
the final progression from difference cubes of the selected batches.
Growth is geometric while the iterate stays inside (t+2)A - 2A, which
forces termination; every step of that argument is checked exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bohr import CosetProgression, materialize
from .checks import BoundCheck
from .errors import DomainError, InvariantError
from .groups import DEFAULT_ENUMERATION_CAP
from .sumsets import DoublingReport, GroupSet, doubling, iterated_sumset, sumset


def greedy_disjoint_translates(a: GroupSet, p: GroupSet) -> GroupSet:
    """Maximal subset R of A with {P + x : x in R} pairwise disjoint.

    A is scanned in canonical order; every rejected element collides with
    an earlier translate, so the result is maximal by construction.
    """
    if not p:
        raise DomainError("translates of the empty set are not useful")
    spec = a.spec
    covered = np.zeros(spec.cardinality, dtype=bool)
    keep: list[int] = []
    for x in a.indices:
        translate = spec.add_scalar(p.indices, int(x))
        if not covered[translate].any():
            keep.append(int(x))
            covered[translate] = True
    return GroupSet(spec, np.array(keep, dtype=np.int64))


@dataclass(frozen=True, eq=False)
class CoverInput:
    """A set together with a verified proper progression inside 2A - 2A."""

    set: GroupSet
    progression: CosetProgression
    realized: GroupSet
    eta: Fraction
    dimension: int
    doubling: DoublingReport

    @classmethod
    def build(
        cls,
        a: GroupSet,
        cp: CosetProgression,
        cap: int = DEFAULT_ENUMERATION_CAP,
    ) -> "CoverInput":
        if not a:
            raise DomainError("cannot cover the empty set")
        realized = materialize(cp, cap)
        if realized.size != cp.formal_size:
            raise DomainError("progression is not proper")
        if not realized.is_subset(iterated_sumset(a, 2, 2)):
            raise DomainError("progression is not contained in 2A - 2A")
        return cls(
            set=a,
            progression=cp,
            realized=realized,
            eta=Fraction(realized.size, a.size),
            dimension=cp.dimension,
            doubling=doubling(a),
        )


@dataclass(frozen=True, eq=False)
class CoverTrace:
    """Full record of one covering run, with every bound check."""

    input: CoverInput
    mk: int
    t: int
    r_sets: tuple[GroupSet, ...]
    s_sets: tuple[GroupSet, ...]
    p_sets: tuple[GroupSet, ...]
    q: CosetProgression
    q_materialized: GroupSet
    checks: tuple[BoundCheck, ...]

    @property
    def all_passed(self) -> bool:
        return not any(c.failed for c in self.checks)


def _cover_size_check(
    name: str, lhs: int, d: int, ratio: Fraction, five_k: Fraction, size_a: int
) -> BoundCheck:
    """Compare lhs against 2^d * ratio^(5K) * |A| with outward rounding.

    The exponent need not be an integer, so the comparison brackets the
    true bound between the floor and ceiling integer powers (ratio >= 1);
    only a lhs between the brackets is inconclusive.
    """
    if ratio < 1:
        raise InvariantError("size-bound base below 1; containment was violated")
    low = (1 << d) * ratio ** math.floor(five_k) * size_a
    high = (1 << d) * ratio ** math.ceil(five_k) * size_a
    if lhs <= low:
        return BoundCheck.make(name, True, lhs, low)
    if lhs > high:
        return BoundCheck.make(name, False, lhs, high)
    return BoundCheck.inconclusive(name, lhs, high)


def chang_cover(
    cover_input: CoverInput, cap: int = DEFAULT_ENUMERATION_CAP
) -> CoverTrace:
    """Run the covering iteration and assemble the containing progression.

    Verifies: exact geometric growth |P_{i+1}| = |P_i| |S_i|, the iterate
    staying inside (t+2)A - 2A with its doubling-power size bound, the
    termination bound 2^t <= K^4/eta, the dimension bound, the final
    containment A inside Q + H, and the (possibly inconclusive) size bound.
    Violations of guaranteed facts raise InvariantError.
    """
    a = cover_input.set
    cp = cover_input.progression
    k = cover_input.doubling.k
    eta = cover_input.eta
    mk = math.ceil(2 * k)
    max_rounds = 10
    while eta * Fraction(2) ** max_rounds <= k**4:
        max_rounds += 1

    p_sets = [cover_input.realized]
    r_sets: list[GroupSet] = []
    s_sets: list[GroupSet] = []
    t: int | None = None
    for i in range(max_rounds + 1):
        r_i = greedy_disjoint_translates(a, p_sets[i])
        r_sets.append(r_i)
        if r_i.size <= mk:
            t = i
            break
        s_i = GroupSet(a.spec, r_i.indices[:mk])
        s_sets.append(s_i)
        p_next = sumset(p_sets[i], s_i)
        if p_next.size != p_sets[i].size * s_i.size:
            raise InvariantError("translate disjointness failed: |P_{i+1}| != |P_i||S_i|")
        p_sets.append(p_next)
    if t is None:
        raise InvariantError("covering iteration exceeded its termination bound")

    checks: list[BoundCheck] = []
    predicted = p_sets[0].size * math.prod(s.size for s in s_sets)
    checks.append(
        BoundCheck.make(
            "cover_growth_products",
            p_sets[t].size == predicted,
            p_sets[t].size,
            predicted,
        )
    )
    envelope = iterated_sumset(a, t + 2, 2)
    checks.append(
        BoundCheck.make(
            "cover_iterate_envelope",
            p_sets[t].is_subset(envelope),
            p_sets[t].size,
            envelope.size,
        )
    )
    checks.append(
        BoundCheck.make(
            "cover_iterate_size",
            p_sets[t].size <= k ** (t + 4) * a.size,
            p_sets[t].size,
            k ** (t + 4) * a.size,
        )
    )
    checks.append(
        BoundCheck.make(
            "cover_termination",
            eta * Fraction(2) ** t <= k**4,
            eta * Fraction(2) ** t,
            k**4,
        )
    )

    gens = list(cp.generators)
    bounds = [(lo - hi, hi - lo) for lo, hi in cp.bounds]
    for s_i in s_sets:
        for e in s_i.elements():
            gens.append(e)
            bounds.append((-1, 1))
    for e in r_sets[t].elements():
        gens.append(e)
        bounds.append((-1, 1))
    q = CosetProgression(
        spec=a.spec,
        base=a.spec.zero(),
        generators=tuple(gens),
        bounds=tuple(bounds),
        subgroup=cp.subgroup,
        proper=False,
    )
    q_realized = materialize(q, cap)
    q = CosetProgression(
        spec=q.spec,
        base=q.base,
        generators=q.generators,
        bounds=q.bounds,
        subgroup=q.subgroup,
        proper=q_realized.size == q.formal_size,
    )

    containment = a.is_subset(q_realized)
    checks.append(
        BoundCheck.make("cover_containment", containment, a.size, q_realized.size)
    )
    dim_bound = cover_input.dimension + 2 * mk * (t + 1)
    checks.append(
        BoundCheck.make("cover_dimension", q.dimension <= dim_bound, q.dimension, dim_bound)
    )
    checks.append(
        _cover_size_check(
            "cover_size", q_realized.size, cover_input.dimension, k**4 / eta,
            5 * k, a.size,
        )
    )
    for check in checks:
        if check.failed:
            raise InvariantError(f"guaranteed covering property failed: {check.line()}")
    return CoverTrace(
        input=cover_input,
        mk=mk,
        t=t,
        r_sets=tuple(r_sets),
        s_sets=tuple(s_sets),
        p_sets=tuple(p_sets),
        q=q,
        q_materialized=q_realized,
        checks=tuple(checks),
    )
