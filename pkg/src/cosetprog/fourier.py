"""Fourier analysis of indicator functions on finite abelian groups.

Transforms use the normalized counting measure: f^(gamma) = E_x f(x) gamma(x),
so the coefficient at the trivial character is the density of the set.
Transforms are floating point with a relative tolerance; every containment
that matters downstream is re-checked exactly elsewhere, so the tolerance
only governs spectrum membership (a guard band keeps borderline characters
in, which can only shrink the Bohr sets built from them).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError, ResourceLimitError, StructureError
from .groups import Character, GroupElement, GroupSpec, _frozen
from .sumsets import DoublingReport, GroupSet, doubling

DEFAULT_TOLERANCE = 1e-9
DISSOCIATIVITY_CAP = 16
_PHASE_BUDGET = 1 << 22


def _phase_matrix(spec: GroupSpec) -> np.ndarray:
    """Integer phase rows over the common denominator exp(G).

    Row c gives gamma_c(x) = exp(2*pi*i * (row . x mod L) / L).
    """
    L = spec.exponent
    chars = spec.decode(np.arange(spec.cardinality, dtype=np.int64))
    scale = np.array([L // n for n in spec.orders], dtype=np.int64)
    return chars * scale[None, :]


class Spectrum:
    """The full table of Fourier coefficients of an indicator function."""

    __slots__ = ("spec", "set_size", "density", "values")

    def __init__(self, spec: GroupSpec, set_size: int, values: np.ndarray):
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "set_size", int(set_size))
        object.__setattr__(self, "density", Fraction(int(set_size), spec.cardinality))
        object.__setattr__(self, "values", _frozen(np.asarray(values, dtype=complex)))

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Spectrum is immutable")

    def value(self, gamma: Character) -> complex:
        if gamma.spec != self.spec:
            raise StructureError("character from a different group")
        return complex(self.values[gamma.index])

    def magnitude(self, gamma: Character) -> float:
        return abs(self.value(gamma))

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.values)

    def plancherel_gap(self) -> float:
        return abs(float(np.sum(self.magnitudes**2)) - float(self.density))

    def validate(self, tol: float = DEFAULT_TOLERANCE) -> None:
        alpha = float(self.density)
        if self.plancherel_gap() > tol * max(alpha, 1e-300):
            raise DomainError("Plancherel identity violated beyond tolerance")
        if abs(complex(self.values[0]) - alpha) > tol * max(alpha, 1e-300):
            raise DomainError("trivial coefficient does not equal the density")
        if float(self.magnitudes.max(initial=0.0)) > alpha * (1 + tol):
            raise DomainError("coefficient magnitude exceeds the density")


def indicator_transform(a: GroupSet, cap: int | None = None) -> Spectrum:
    """Fourier transform of 1_A over the full dual group."""
    spec = a.spec
    if cap is not None:
        spec.require_enumerable(cap)
    L = spec.exponent
    phases = _phase_matrix(spec)
    x = a.coords()
    n = spec.cardinality
    values = np.zeros(n, dtype=complex)
    if a.size:
        step = max(1, _PHASE_BUDGET // max(a.size, 1))
        for i in range(0, n, step):
            t = (phases[i : i + step] @ x.T) % L
            values[i : i + step] = np.exp(2j * np.pi / L * t).sum(axis=1)
    return Spectrum(spec, a.size, values / n)


def inversion_values(spectrum: Spectrum) -> np.ndarray:
    """Reconstruct f(x) = sum_gamma f^(gamma) conj(gamma(x)) over all x."""
    spec = spectrum.spec
    L = spec.exponent
    phases = _phase_matrix(spec)
    x = spec.decode(np.arange(spec.cardinality, dtype=np.int64))
    t = (phases @ x.T) % L
    table = np.exp(-2j * np.pi * t / L)
    return spectrum.values @ table


_DIRECT_CONV_BUDGET = 200_000


def convolution_power_at(
    a: GroupSet, m: int, x: GroupElement, tol: float = DEFAULT_TOLERANCE
) -> float:
    """The m-fold self-convolution of 1_A at x.

    Computed spectrally; on inputs small enough for direct m-fold tuple
    counting (m <= 4) the two routes are cross-checked against each other.
    A positive value certifies x in mA.
    """
    if m < 2:
        raise DomainError("convolution power needs m >= 2")
    if x.spec != a.spec:
        raise StructureError("evaluation point from a different group")
    spectrum = indicator_transform(a)
    spec = a.spec
    L = spec.exponent
    phases = _phase_matrix(spec)
    t = (phases @ np.array(x.coords, dtype=np.int64)) % L
    total = float(np.sum(spectrum.values**m * np.exp(-2j * np.pi * t / L)).real)
    if m <= 4 and a.size**m <= _DIRECT_CONV_BUDGET:
        count = _direct_tuple_count(a, m, x)
        direct = count / spec.cardinality ** (m - 1)
        if abs(direct - total) > tol * max(1.0, abs(direct)):
            raise DomainError("spectral and direct convolution routes disagree")
    return total


def _direct_tuple_count(a: GroupSet, m: int, x: GroupElement) -> int:
    spec = a.spec
    partial = a.indices
    for _ in range(m - 2):
        partial = spec.add_pairwise(partial, a.indices).ravel()
    last = spec.add_pairwise(partial, a.indices).ravel()
    return int(np.count_nonzero(last == x.index))


@dataclass(frozen=True, eq=False)
class SpecThresholdSet:
    """Characters whose coefficient magnitude is at least rho * density."""

    spec: GroupSpec
    rho: float
    alpha: Fraction
    chars: tuple[Character, ...]
    magnitudes: tuple[float, ...]
    includes_trivial: bool


def spec_threshold(
    spectrum: Spectrum, rho: float | Fraction, tol: float = DEFAULT_TOLERANCE
) -> SpecThresholdSet:
    """Threshold the spectrum at rho * density with a guard band.

    Values within relative ``tol`` below the threshold are kept, so the
    output is a superset of the true threshold set; the output is closed
    under inversion and listed in lexicographic character order.
    """
    rho_f = float(rho)
    if not 0 < rho_f <= 1:
        raise DomainError("threshold rho must lie in (0, 1]")
    spec = spectrum.spec
    threshold = rho_f * float(spectrum.density) * (1 - tol)
    keep = np.nonzero(spectrum.magnitudes >= threshold)[0]
    mirrored = spec.negate_indices(keep)
    indices = np.unique(np.concatenate([keep, mirrored]))
    chars = tuple(spec.character_at(int(i)) for i in indices)
    mags = tuple(float(abs(spectrum.values[int(i)])) for i in indices)
    return SpecThresholdSet(
        spec=spec,
        rho=rho_f,
        alpha=spectrum.density,
        chars=chars,
        magnitudes=mags,
        includes_trivial=bool(len(indices) and indices[0] == 0),
    )


def _signed_sums(spec: GroupSpec, char_indices: Sequence[int]) -> np.ndarray:
    """Indices of sum(eps_j * phi_j) for every eps pattern in {-1,0,1}^h.

    Position p holds the pattern whose base-3 digits (little-endian, digit
    0/1/2 meaning eps 0/+1/-1) encode p.
    """
    sums = np.zeros(1, dtype=np.int64)
    for ci in char_indices:
        plus = spec.add_scalar(sums, int(ci))
        minus = spec.add_scalar(sums, int(spec.negate_indices(np.array([ci]))[0]))
        sums = np.concatenate([sums, plus, minus])
    return sums


def _pattern_of(position: int, width: int) -> tuple[int, ...]:
    eps = []
    for _ in range(width):
        position, digit = divmod(position, 3)
        eps.append(0 if digit == 0 else (1 if digit == 1 else -1))
    return tuple(eps)


def signed_combination_count(
    characters: Sequence[Character],
    target: Character | None = None,
    cap: int = DISSOCIATIVITY_CAP,
) -> tuple[int, tuple[int, ...] | None]:
    """Count eps patterns in {-1,0,1}^d with sum(eps_j phi_j) = target.

    Returns the count and one witness pattern (the one with the smallest
    split positions), using a meet-in-the-middle enumeration.
    """
    chars = list(characters)
    d = len(chars)
    if d > cap:
        raise ResourceLimitError(
            f"{d} characters exceed the dissociativity cap {cap}"
        )
    if d == 0:
        trivial = target is None or target.is_trivial()
        return (1 if trivial else 0), (() if trivial else None)
    spec = chars[0].spec
    for c in chars:
        if c.spec != spec:
            raise StructureError("characters of different groups")
    t_idx = 0 if target is None else target.index
    half = d // 2
    left = _signed_sums(spec, [c.index for c in chars[:half]])
    right = _signed_sums(spec, [c.index for c in chars[half:]])
    # need: left + right = target  <=>  left = target - right
    need = spec.add_scalar(spec.negate_indices(right), t_idx)
    order = np.argsort(left, kind="stable")
    left_sorted = left[order]
    lo = np.searchsorted(left_sorted, need, side="left")
    hi = np.searchsorted(left_sorted, need, side="right")
    count = int((hi - lo).sum())
    witness: tuple[int, ...] | None = None
    hits = np.nonzero(hi > lo)[0]
    if len(hits):
        p_right = int(hits[0])
        p_left = int(order[lo[p_right]])
        witness = _pattern_of(p_left, half) + _pattern_of(p_right, d - half)
    return count, witness


def is_dissociated(
    characters: Sequence[Character], cap: int = DISSOCIATIVITY_CAP
) -> bool:
    """True iff only the all-zero pattern solves sum(eps_j phi_j) = 0."""
    count, _ = signed_combination_count(characters, None, cap)
    return count == 1


def dissociation_witness(
    characters: Sequence[Character], cap: int = DISSOCIATIVITY_CAP
) -> tuple[int, ...] | None:
    """A non-trivial vanishing pattern, or None if the set is dissociated."""
    chars = list(characters)
    count, _ = signed_combination_count(chars, None, cap)
    if count == 1:
        return None
    # scan patterns in meet-in-the-middle order for the first non-trivial hit
    spec = chars[0].spec
    half = len(chars) // 2
    left = _signed_sums(spec, [c.index for c in chars[:half]])
    right = _signed_sums(spec, [c.index for c in chars[half:]])
    need = spec.negate_indices(right)
    order = np.argsort(left, kind="stable")
    left_sorted = left[order]
    lo = np.searchsorted(left_sorted, need, side="left")
    hi = np.searchsorted(left_sorted, need, side="right")
    for p_right in range(len(right)):
        for j in sorted(int(order[p]) for p in range(lo[p_right], hi[p_right])):
            if j == 0 and p_right == 0:
                continue
            return _pattern_of(j, half) + _pattern_of(p_right, len(chars) - half)
    return None


def cube_contains(
    characters: Sequence[Character],
    gamma: Character,
    cap: int = DISSOCIATIVITY_CAP,
) -> bool:
    """Whether gamma lies in the cube of {-1,0,1}-combinations of the set."""
    count, _ = signed_combination_count(characters, gamma, cap)
    return count > 0


def max_dissociated(
    threshold_set: SpecThresholdSet, cap: int = DISSOCIATIVITY_CAP
) -> tuple[Character, ...]:
    """Greedy maximal dissociated subset, scanned by descending magnitude.

    Ties are broken lexicographically on character coordinates.  The result
    is maximal (nothing left in the threshold set can be added), though not
    necessarily of maximum cardinality.
    """
    ranked = sorted(
        zip(threshold_set.chars, threshold_set.magnitudes),
        key=lambda cm: (-cm[1], cm[0].coords),
    )
    kept: list[Character] = []
    for gamma, _ in ranked:
        if is_dissociated(kept + [gamma], cap):
            kept.append(gamma)
    return tuple(kept)


@dataclass(frozen=True)
class ChangReport:
    holds: bool
    size: int
    bound: float


def chang_bound_check(
    a: GroupSet | Spectrum,
    rho: float | Fraction,
    phi: Sequence[Character],
    log_base: float = math.e,
    tol: float = DEFAULT_TOLERANCE,
) -> ChangReport:
    """Check |Phi| <= 2 rho^-2 log(1/density) for a dissociated Phi in Spec_rho."""
    spectrum = a if isinstance(a, Spectrum) else indicator_transform(a)
    if not is_dissociated(phi):
        raise DomainError("phi is not dissociated")
    rho_f = float(rho)
    threshold = rho_f * float(spectrum.density) * (1 - tol)
    for gamma in phi:
        if spectrum.magnitude(gamma) < threshold:
            raise DomainError(f"{gamma!r} is below the rho-threshold")
    alpha = float(spectrum.density)
    bound = 0.0 if alpha >= 1 else 2.0 / rho_f**2 * math.log(1 / alpha, log_base)
    size = len(phi)
    return ChangReport(size <= bound + tol * max(1.0, bound), size, bound)


@dataclass(frozen=True, eq=False)
class RieszFunction:
    """f(x) = sum_j c_j Re(omega_j phi_j(x)) with unit phases omega_j."""

    chars: tuple[Character, ...]
    coeffs: tuple[float, ...]
    phases: tuple[complex, ...]

    def __post_init__(self) -> None:
        if not self.chars:
            raise DomainError("a Riesz function needs at least one character")
        if not len(self.chars) == len(self.coeffs) == len(self.phases):
            raise StructureError("chars, coeffs and phases must align")
        for w in self.phases:
            if abs(abs(complex(w)) - 1.0) > 1e-12:
                raise DomainError("phases must have unit modulus")

    @property
    def spec(self) -> GroupSpec:
        return self.chars[0].spec

    def evaluate_all(self) -> np.ndarray:
        """Values of f over the whole group, in element index order."""
        spec = self.spec
        L = spec.exponent
        x = spec.decode(np.arange(spec.cardinality, dtype=np.int64))
        total = np.zeros(spec.cardinality, dtype=float)
        for gamma, c, w in zip(self.chars, self.coeffs, self.phases):
            t = gamma.arg_numerators(x)
            q = gamma.order()
            total += c * np.real(complex(w) * np.exp(2j * np.pi * t / q))
        return total


@dataclass(frozen=True)
class RieszMomentReport:
    mean_square: float
    coeff_half_sum: float
    expected_mean_square: float
    two_torsion_adjusted: bool
    identity_ok: bool
    exp_moment: float
    exp_bound: float
    bernstein_ok: bool


def riesz_moment_check(
    f: RieszFunction, t: float, tol: float = DEFAULT_TOLERANCE
) -> RieszMomentReport:
    """Verify the mean-square identity and E e^{tf} <= e^{t^2 E f^2}.

    Both require the characters to be dissociated; a non-dissociated input
    is rejected since either can then fail.  The mean square equals
    (1/2) sum c_j^2 whenever every character has order above 2; a real
    (order <= 2) character contributes c^2 (1 + Re(omega^2)) / 2 instead,
    since its square is the trivial character.  The check compares against
    the exact value; ``two_torsion_adjusted`` records when the nominal
    half-sum was corrected.
    """
    if not is_dissociated(f.chars):
        raise DomainError("the characters of the Riesz function are not dissociated")
    values = f.evaluate_all()
    mean_square = float(np.mean(values**2))
    half_sum = 0.5 * float(sum(c * c for c in f.coeffs))
    expected = 0.0
    for gamma, c, w in zip(f.chars, f.coeffs, f.phases):
        if gamma.order() <= 2:
            expected += c * c * (1.0 + (complex(w) ** 2).real) / 2.0
        else:
            expected += c * c / 2.0
    identity_ok = abs(mean_square - expected) <= tol * max(1.0, abs(expected))
    exp_moment = float(np.mean(np.exp(t * values)))
    exp_bound = math.exp(t * t * mean_square)
    bernstein_ok = exp_moment <= exp_bound * (1 + tol)
    return RieszMomentReport(
        mean_square,
        half_sum,
        expected,
        abs(expected - half_sum) > tol * max(1.0, half_sum),
        identity_ok,
        exp_moment,
        exp_bound,
        bernstein_ok,
    )


@dataclass(frozen=True)
class BohrSpec:
    """A Bohr set description: characters plus an exact rational radius."""

    spec: GroupSpec
    chars: tuple[Character, ...]
    rho: Fraction

    def __post_init__(self) -> None:
        if self.rho <= 0:
            raise DomainError("Bohr radius must be positive")
        for c in self.chars:
            if c.spec != self.spec:
                raise StructureError("character from a different group")

    @property
    def dimension(self) -> int:
        return len(self.chars)


@dataclass(frozen=True, eq=False)
class BogolyubovReport:
    """Spectral localization of 2A-2A: a Bohr description plus bound records."""

    doubling: DoublingReport
    alpha: Fraction
    threshold_rho: float
    gamma_raw: SpecThresholdSet
    phi: tuple[Character, ...]
    bohr: BohrSpec
    l4_sum: float
    l4_lower: float
    l4_ok: bool
    dim_bound: float
    dim_ok: bool
    radius_lower: float
    radius_ok: bool


def bogolyubov_bohr(
    a: GroupSet,
    doubling_k: Fraction | None = None,
    cap: int | None = None,
    tol: float = DEFAULT_TOLERANCE,
    log_base: float = math.e,
) -> BogolyubovReport:
    """Build the Bohr description whose set is guaranteed to land in 2A-2A.

    Thresholds the spectrum at 1/(2 sqrt K), keeps a greedy maximal
    dissociated subset Phi, and shrinks the radius to 1/(6 |Phi|).  An empty
    Phi means the Bohr set is the whole group.  The containment itself is
    exact and is re-verified by callers; this function records the
    dimension/radius bounds and the fourth-moment lower bound.
    """
    if not a:
        raise DomainError("the empty set has no Bohr localization")
    dbl = doubling(a)
    if doubling_k is not None and doubling_k != dbl.k:
        raise DomainError("supplied doubling constant does not match the set")
    k = dbl.k
    spectrum = indicator_transform(a, cap)
    alpha = spectrum.density
    rho = 1.0 / (2.0 * math.sqrt(float(k)))
    tset = spec_threshold(spectrum, rho, tol)
    phi = max_dissociated(tset)
    d = len(phi)
    bohr = BohrSpec(a.spec, phi, Fraction(1, 6 * max(d, 1)))
    l4_sum = float(np.sum(spectrum.magnitudes**4))
    l4_lower = float(alpha) ** 3 / float(k)
    l4_ok = l4_sum >= l4_lower * (1 - tol)
    logterm = 0.0 if alpha >= 1 else math.log(1 / float(alpha), log_base)
    dim_bound = 8.0 * float(k) * logterm
    dim_ok = d <= dim_bound + tol * max(1.0, dim_bound)
    radius_lower = 0.0 if logterm == 0 else 1.0 / (48.0 * float(k) * logterm)
    radius_ok = float(bohr.rho) >= radius_lower * (1 - tol)
    return BogolyubovReport(
        doubling=dbl,
        alpha=alpha,
        threshold_rho=rho,
        gamma_raw=tset,
        phi=phi,
        bohr=bohr,
        l4_sum=l4_sum,
        l4_lower=l4_lower,
        l4_ok=l4_ok,
        dim_bound=dim_bound,
        dim_ok=dim_ok,
        radius_lower=radius_lower,
        radius_ok=radius_ok,
    )
