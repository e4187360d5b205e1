"""Exact binomial arithmetic, subset masks and the central-binomial inequalities.

Subsets of the ground set ``[n] = {1, ..., n}`` are plain ints: bit ``i - 1`` is
set iff element ``i`` is present.  Every inequality that involves sqrt, pi or e is
evaluated with mpmath at :data:`PRECISION_BITS` bits; binomials stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from mpmath import mp, mpf

PRECISION_BITS = 128
# An inequality only "holds" if its margin beats this fraction of the larger side.
GUARD = mpf(2) ** -40


def binomial(n: int, k: int) -> int:
    """C(n, k) as an exact integer, zero when ``k`` lies outside ``[0, n]``."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


# -- subset masks ----------------------------------------------------------


def mask_of(elements, n: int | None = None) -> int:
    mask = 0
    for e in elements:
        if e < 1 or (n is not None and e > n):
            raise ValueError(f"element {e} outside ground set [1..{n}]")
        mask |= 1 << (e - 1)
    return mask


def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def r_subsets(n: int, r: int) -> list[int]:
    """All r-subsets of [n] as masks, in ascending mask order.

    Empty when ``r`` is outside ``[0, n]`` (the empty Johnson graph).
    """
    if r < 0 or r > n:
        return []
    masks = [sum(1 << i for i in c) for c in combinations(range(n), r)]
    masks.sort()
    return masks


def format_subset(mask: int) -> str:
    return "{" + ",".join(map(str, elements_of(mask))) + "}"


@dataclass(frozen=True)
class SubsetMask:
    """An r-subset of [n] with its ground-set size attached."""

    bits: int
    n: int

    def __post_init__(self):
        if self.n < 0 or self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"mask {self.bits:#x} has bits outside [1..{self.n}]")

    @classmethod
    def from_elements(cls, elements, n: int) -> "SubsetMask":
        return cls(mask_of(elements, n), n)

    @property
    def size(self) -> int:
        return popcount(self.bits)

    @property
    def elements(self) -> tuple[int, ...]:
        return elements_of(self.bits)

    def __str__(self):
        return format_subset(self.bits)


# -- numeric fixtures --------------------------------------------------------


@dataclass(frozen=True)
class InequalityReport:
    """Outcome of ``lhs <= rhs`` checked in extended precision."""

    lhs: object
    rhs: object
    margin: object
    ok: bool


def _leq(lhs, rhs) -> InequalityReport:
    lhs, rhs = mpf(lhs), mpf(rhs)
    margin = rhs - lhs
    scale = max(abs(lhs), abs(rhs))
    return InequalityReport(lhs, rhs, margin, bool(margin > GUARD * scale))


def _central_upper(n: int):
    return mp.sqrt(2 / mp.pi) * mpf(2) ** n / mp.sqrt(n)


@dataclass(frozen=True)
class CentralBoundsReport:
    n: int
    central: int
    lower: InequalityReport
    upper: InequalityReport

    @property
    def lower_ok(self) -> bool:
        return self.lower.ok

    @property
    def upper_ok(self) -> bool:
        return self.upper.ok

    @property
    def ok(self) -> bool:
        return self.lower.ok and self.upper.ok


def check_central_bounds(n: int) -> CentralBoundsReport:
    """Two-sided Stirling bound on C(n, floor(n/2))."""
    if n < 1:
        raise ValueError("n must be at least 1")
    with mp.workprec(PRECISION_BITS):
        c = binomial(n, n // 2)
        upper = _central_upper(n)
        lower = upper * (1 - mpf(1) / n)
        return CentralBoundsReport(n, c, _leq(lower, c), _leq(c, upper))


def check_compare_bound(n: int, m: int) -> InequalityReport:
    """C(n-m, floor((n-m)/2)) <= n/(n-1) * sqrt(n/(n-m)) * 2^-m * C(n, floor(n/2))."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0 <= m < n:
        raise ValueError(f"need 0 <= m < n, got m={m}, n={n}")
    with mp.workprec(PRECISION_BITS):
        lhs = binomial(n - m, (n - m) // 2)
        rhs = (mpf(n) / (n - 1) * mp.sqrt(mpf(n) / (n - m)) * mpf(2) ** (-m)
               * binomial(n, n // 2))
        return _leq(lhs, rhs)


def deviation_ratio(n: int, k: int):
    """C(n, floor(n/2)+k) divided by its Gaussian approximation."""
    if n < 1:
        raise ValueError("n must be positive")
    j = n // 2 + k
    if not 0 <= j <= n:
        raise ValueError(f"floor(n/2)+k = {j} outside [0, {n}]")
    with mp.workprec(PRECISION_BITS):
        approx = mp.sqrt(2 / mp.pi) * mp.exp(-mpf(2 * k * k) / n) * mpf(2) ** n / mp.sqrt(n)
        return mpf(binomial(n, j)) / approx


def f_kappa(kappa):
    """kappa * log2(2e / kappa); logarithms are base 2 throughout."""
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    with mp.workprec(PRECISION_BITS):
        k = mpf(kappa)
        return k * mp.log(2 * mp.e / k, 2)


@dataclass(frozen=True)
class KappaProfile:
    kappa: object
    f_value: object

    @classmethod
    def of(cls, kappa) -> "KappaProfile":
        return cls(mpf(kappa), f_kappa(kappa))


def rank_window(n: int, beta) -> range:
    """Ranks in [0, n] within beta*sqrt(n) of n/2, as an inclusive-exclusive ``range``."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    with mp.workprec(PRECISION_BITS):
        half_width = mpf(beta) * mp.sqrt(n)
        lo = int(mp.ceil(mpf(n) / 2 - half_width))
        hi = int(mp.floor(mpf(n) / 2 + half_width))
    return range(max(lo, 0), min(hi, n) + 1)
