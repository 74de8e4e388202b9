"""Freiman homomorphism verification and transport of coset progressions.

The s-fold condition is checked through fibers of the induced map on sums:
phi is an s-homomorphism iff every multiset of s elements with the same sum
has the same image sum.  Fibers are built by a layered dynamic program over
(partial sum, partial image sum) pairs, so an s = 8 check costs a few
dense passes instead of |A|^8 tuple enumerations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .bohr import CosetProgression, materialize
from .errors import DomainError, StructureError
from .groups import GroupElement, GroupSpec, subgroup_closure
from .sumsets import GroupSet, iterated_sumset

_PAIR_BUDGET = 1 << 22


class FreimanMap:
    """A map defined on a finite set, claimed to respect s-fold sums."""

    __slots__ = ("domain", "target", "table", "order")

    def __init__(
        self,
        domain: GroupSet,
        target: GroupSpec,
        table: Mapping[int, int],
        order: int = 2,
    ):
        if order < 1:
            raise DomainError("map order must be at least 1")
        tbl = {int(k): int(v) for k, v in table.items()}
        if set(tbl) != {int(i) for i in domain.indices}:
            raise StructureError("assignment table must cover the domain exactly")
        for v in tbl.values():
            if not 0 <= v < target.cardinality:
                raise StructureError("image index out of range for the target group")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "table", tbl)
        object.__setattr__(self, "order", int(order))

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("FreimanMap is immutable")

    @classmethod
    def identity(cls, domain: GroupSet, order: int = 2) -> "FreimanMap":
        return cls(domain, domain.spec, {int(i): int(i) for i in domain.indices}, order)

    @classmethod
    def translation(cls, domain: GroupSet, shift: GroupElement, order: int = 2) -> "FreimanMap":
        if shift.spec != domain.spec:
            raise StructureError("translation element from a different group")
        moved = domain.spec.add_scalar(domain.indices, shift.index)
        table = {int(i): int(j) for i, j in zip(domain.indices, moved)}
        return cls(domain, domain.spec, table, order)

    def __call__(self, x: GroupElement) -> GroupElement:
        if x.spec != self.domain.spec:
            raise StructureError("argument from a different group")
        try:
            return self.target.element_at(self.table[x.index])
        except KeyError:
            raise DomainError(f"{x!r} is outside the map's domain") from None

    def apply_indices(self, indices: np.ndarray) -> np.ndarray:
        return np.array([self.table[int(i)] for i in indices], dtype=np.int64)

    def image(self) -> GroupSet:
        return GroupSet(self.target, np.array(sorted(self.table.values()), dtype=np.int64))

    def is_injective(self) -> bool:
        return len(set(self.table.values())) == len(self.table)

    def inverse(self) -> "FreimanMap":
        if not self.is_injective():
            raise DomainError("only injective maps can be inverted")
        inv = {v: k for k, v in self.table.items()}
        return FreimanMap(self.image(), self.domain.spec, inv, self.order)

    def restrict(self, subset: GroupSet) -> "FreimanMap":
        if not subset.is_subset(self.domain):
            raise DomainError("restriction set is not inside the domain")
        table = {int(i): self.table[int(i)] for i in subset.indices}
        return FreimanMap(subset, self.target, table, self.order)

    def pairs(self) -> list[tuple[int, int]]:
        return sorted(self.table.items())

    def __repr__(self) -> str:
        return f"FreimanMap({self.domain!r} -> {self.target}, s={self.order})"


def compose(outer: FreimanMap, inner: FreimanMap) -> FreimanMap:
    """outer after inner; the inner image must lie in the outer domain."""
    if inner.target != outer.domain.spec:
        raise StructureError("maps are not composable: group mismatch")
    if not inner.image().is_subset(outer.domain):
        raise DomainError("inner image is not contained in the outer domain")
    table = {k: outer.table[v] for k, v in inner.table.items()}
    return FreimanMap(inner.domain, outer.target, table,
                      min(inner.order, outer.order))


@dataclass(frozen=True)
class FiberWitness:
    """Two image values achieved by one sum; proof of a violated relation."""

    layer: int
    sum_index: int
    image_indices: tuple[int, ...]


@dataclass(frozen=True)
class HomReport:
    ok: bool
    witness: FiberWitness | None


def _layer_extend(
    spec: GroupSpec,
    tspec: GroupSpec,
    sums: np.ndarray,
    images: np.ndarray,
    xs: np.ndarray,
    us: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """All deduplicated (sum + x, image + u) pairs over aligned (xs, us)."""
    t_card = tspec.cardinality
    step = max(1, _PAIR_BUDGET // max(len(xs), 1))
    keys = []
    for i in range(0, len(sums), step):
        g2 = spec.add_pairwise(sums[i : i + step], xs)
        u2 = tspec.add_pairwise(images[i : i + step], us)
        keys.append(np.unique(g2.ravel() * t_card + u2.ravel()))
    key = np.unique(np.concatenate(keys))
    return key // t_card, key % t_card


def _dp_pairs(
    a: GroupSet,
    phi: FreimanMap,
    pos: int,
    neg: int,
    stop_on_violation: bool = False,
) -> tuple[np.ndarray, np.ndarray, FiberWitness | None]:
    """(sum, image-sum) pairs over all (pos, neg)-fold signed combinations."""
    if pos + neg < 1:
        raise DomainError("at least one fold is required")
    if not a.is_subset(phi.domain):
        raise DomainError("set is not inside the map's domain")
    spec, tspec = a.spec, phi.target
    xs = a.indices
    us = phi.apply_indices(xs)
    nxs = spec.negate_indices(xs)
    nus = tspec.negate_indices(us)
    layers = [(xs, us)] * pos + [(nxs, nus)] * neg
    sums, images = layers[0]
    key = np.unique(sums * tspec.cardinality + images)
    sums, images = key // tspec.cardinality, key % tspec.cardinality
    witness: FiberWitness | None = None
    for depth, (lx, lu) in enumerate(layers[1:], start=2):
        sums, images = _layer_extend(spec, tspec, sums, images, lx, lu)
        if witness is None:
            uniq, counts = np.unique(sums, return_counts=True)
            bad = np.nonzero(counts > 1)[0]
            if len(bad):
                s = int(uniq[bad[0]])
                imgs = tuple(int(u) for u in images[sums == s])
                witness = FiberWitness(depth, s, imgs)
                if stop_on_violation:
                    return sums, images, witness
    return sums, images, witness


def s_fold_fibers(a: GroupSet, s: int, phi: FreimanMap) -> dict[int, frozenset[int]]:
    """Map each element of sA to the set of achieved image sums."""
    if s < 1:
        raise DomainError("fold count must be at least 1")
    sums, images, _ = _dp_pairs(a, phi, s, 0)
    fibers: dict[int, set[int]] = {}
    for g, u in zip(sums, images):
        fibers.setdefault(int(g), set()).add(int(u))
    return {g: frozenset(us) for g, us in fibers.items()}


def sum_difference_fibers(
    a: GroupSet, k: int, l: int, phi: FreimanMap
) -> dict[int, frozenset[int]]:
    """Fibers of the induced map on kA - lA."""
    sums, images, _ = _dp_pairs(a, phi, k, l)
    fibers: dict[int, set[int]] = {}
    for g, u in zip(sums, images):
        fibers.setdefault(int(g), set()).add(int(u))
    return {g: frozenset(us) for g, us in fibers.items()}


def is_freiman_hom(phi: FreimanMap, s: int) -> HomReport:
    """Whether phi respects every equality of s-fold sums."""
    if s < 2:
        raise DomainError("the homomorphism condition needs s >= 2")
    _, _, witness = _dp_pairs(phi.domain, phi, s, 0, stop_on_violation=True)
    return HomReport(witness is None, witness)


def is_freiman_iso(phi: FreimanMap, s: int) -> HomReport:
    """Homomorphism in both directions plus injectivity."""
    forward = is_freiman_hom(phi, s)
    if not forward.ok:
        return forward
    if not phi.is_injective():
        return HomReport(False, None)
    return is_freiman_hom(phi.inverse(), s)


def induced_difference_iso(phi: FreimanMap) -> FreimanMap:
    """The map on 2A - 2A induced by an 8-isomorphism on A.

    Well-definedness is established by the fiber computation itself; the
    result is re-verified as a 2-isomorphism before being returned.
    """
    a = phi.domain
    sums, images, witness = _dp_pairs(a, phi, 2, 2)
    if witness is not None:
        raise DomainError(
            f"map does not induce a function on 2A-2A (fiber of {witness.sum_index})"
        )
    domain = GroupSet(a.spec, sums)
    table = {int(g): int(u) for g, u in zip(sums, images)}
    induced = FreimanMap(domain, phi.target, table, 2)
    if domain != iterated_sumset(a, 2, 2):
        raise DomainError("fiber domain does not equal 2A-2A")
    report = is_freiman_iso(induced, 2)
    if not report.ok:
        raise DomainError("induced map is not a 2-isomorphism")
    return induced


def transport_progression(
    psi: FreimanMap,
    cp: CosetProgression,
    assume_verified: bool = False,
) -> CosetProgression:
    """Push a proper coset progression through a 2-isomorphism.

    The image progression keeps the bounds; generators and subgroup are
    transported relative to the base point.  Equality with the pointwise
    image, properness, dimension, and cardinality are all verified.
    """
    if not cp.proper:
        raise DomainError("only proper progressions are transported")
    source = materialize(cp)
    if not source.is_subset(psi.domain):
        raise DomainError("progression is not inside the map's domain")
    if not assume_verified:
        report = is_freiman_iso(psi, 2)
        if not report.ok:
            raise DomainError("transport map is not a 2-isomorphism")
    tspec = psi.target
    base_img = psi(cp.base)
    corner = cp.base
    for g, (lo, _) in zip(cp.generators, cp.bounds):
        corner = corner + cp.spec.element([lo * c for c in g.coords])
    gens_img = []
    for g, (lo, hi) in zip(cp.generators, cp.bounds):
        if lo == hi:
            gens_img.append(tspec.zero())
            continue
        p1 = corner
        p2 = corner + g
        gens_img.append(psi(p2) - psi(p1))
    h_indices = []
    for h in cp.subgroup.indices:
        point = cp.base + cp.spec.element_at(int(h))
        h_indices.append((psi(point) - base_img).index)
    h_set = np.unique(np.array(h_indices, dtype=np.int64))
    h_sub = subgroup_closure(
        tspec, [tspec.element_at(int(i)) for i in h_set]
    )
    if h_sub.order != len(h_set):
        raise DomainError("image of the subgroup is not a subgroup")
    image = CosetProgression(
        spec=tspec,
        base=base_img,
        generators=tuple(gens_img),
        bounds=cp.bounds,
        subgroup=h_sub,
        proper=False,
    )
    realized = materialize(image)
    expected = GroupSet(tspec, psi.apply_indices(source.indices))
    if realized != expected:
        raise DomainError("transported progression does not equal the image set")
    proper = realized.size == image.formal_size
    if not proper or realized.size != source.size:
        raise DomainError("transport did not preserve properness and size")
    return CosetProgression(
        spec=tspec,
        base=image.base,
        generators=image.generators,
        bounds=image.bounds,
        subgroup=image.subgroup,
        proper=True,
    )
