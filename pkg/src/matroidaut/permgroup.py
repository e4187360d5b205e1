"""Permutations of [n] and their action on subsets.

A :class:`Permutation` stores ``image`` with ``image[i] == p(i + 1)``; all public
element arguments are 1-based.  Text form is disjoint cycle notation, e.g.
``"(1 2)(3 4 5)"``; the identity prints as ``"()"``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import reduce
from itertools import permutations as _itertools_permutations
from math import lcm

from .combinatorics import popcount, r_subsets


class SupportClass(str, Enum):
    IDENTITY = "identity"
    TRANSPOSITION = "transposition"
    SUPPORT_GE_3 = "support_ge_3"


@dataclass(frozen=True)
class CycleDecomposition:
    cycles: tuple[tuple[int, ...], ...]

    @property
    def cycle_count(self) -> int:
        return len(self.cycles)

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cycles)

    @property
    def moved(self) -> int:
        return sum(self.lengths)


class Permutation:
    __slots__ = ("image", "_hash")

    def __init__(self, image):
        image = tuple(int(x) for x in image)
        if sorted(image) != list(range(1, len(image) + 1)):
            raise ValueError(f"{image} is not a bijection of [1..{len(image)}]")
        self.image = image
        self._hash = hash(image)

    # -- constructors --

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def from_cycles(cls, cycles, n: int) -> "Permutation":
        image = list(range(1, n + 1))
        seen = set()
        for cyc in cycles:
            cyc = tuple(cyc)
            if len(cyc) < 2:
                raise ValueError(f"cycle {cyc} has length < 2")
            for e in cyc:
                if not 1 <= e <= n:
                    raise ValueError(f"element {e} outside [1..{n}]")
                if e in seen:
                    raise ValueError(f"element {e} appears in more than one cycle")
                seen.add(e)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                image[a - 1] = b
        return cls(image)

    @classmethod
    def parse(cls, text: str, n: int) -> "Permutation":
        """Parse cycle notation such as ``"(1 2)(3 4 5)"`` or ``"()"``."""
        leftover = re.sub(r"\(([^()]*)\)", "", text)
        if leftover.strip() or not text.strip():
            raise ValueError(f"malformed cycle notation: {text!r}")
        cycles = []
        for body in re.findall(r"\(([^()]*)\)", text):
            items = body.replace(",", " ").split()
            if not items:
                continue
            if not all(x.isdigit() for x in items):
                raise ValueError(f"malformed cycle notation: {text!r}")
            cycles.append(tuple(int(x) for x in items))
        return cls.from_cycles(cycles, n)

    @classmethod
    def transposition(cls, e: int, f: int, n: int) -> "Permutation":
        if e == f:
            raise ValueError("a transposition needs two distinct elements")
        return cls.from_cycles([(e, f)], n)

    # -- basics --

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, e: int) -> int:
        return self.image[e - 1]

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.image == other.image

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Permutation.parse({str(self)!r}, {self.n})"

    def __str__(self):
        cycles = self.cycle_decomposition().cycles
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, x in enumerate(self.image):
            inv[x - 1] = i + 1
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(x == i + 1 for i, x in enumerate(self.image))

    def cycle_decomposition(self) -> CycleDecomposition:
        return cycle_decomposition(self)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """p after q: ``compose(p, q)(e) == p(q(e))``."""
    if p.n != q.n:
        raise ValueError(f"cannot compose permutations of [{p.n}] and [{q.n}]")
    return Permutation(p.image[x - 1] for x in q.image)


def cycle_decomposition(p: Permutation) -> CycleDecomposition:
    # Scanning elements in increasing order starts each cycle at its minimum
    # and emits cycles sorted by minimum.
    seen = [False] * p.n
    cycles = []
    for start in range(1, p.n + 1):
        if seen[start - 1] or p(start) == start:
            continue
        cyc = [start]
        seen[start - 1] = True
        e = p(start)
        while e != start:
            cyc.append(e)
            seen[e - 1] = True
            e = p(e)
        cycles.append(tuple(cyc))
    return CycleDecomposition(tuple(cycles))


def order(p: Permutation) -> int:
    return reduce(lcm, cycle_decomposition(p).lengths, 1)


def support(p: Permutation) -> int:
    """Mask of moved elements."""
    mask = 0
    for i, x in enumerate(p.image):
        if x != i + 1:
            mask |= 1 << i
    return mask


def apply_to_set(p: Permutation, mask: int) -> int:
    if mask >> p.n:
        raise ValueError(f"subset {mask:#x} is not over [1..{p.n}]")
    out = 0
    i = 0
    while mask:
        if mask & 1:
            out |= 1 << (p.image[i] - 1)
        mask >>= 1
        i += 1
    return out


def element_table(p: Permutation) -> tuple[int, ...]:
    """0-based image table, handy for tight loops."""
    return tuple(x - 1 for x in p.image)


def orbit_of_set(p: Permutation, mask: int) -> list[int]:
    orbit = [mask]
    nxt = apply_to_set(p, mask)
    while nxt != mask:
        orbit.append(nxt)
        nxt = apply_to_set(p, nxt)
    return orbit


def fixed_r_sets(p: Permutation, r: int) -> list[int]:
    """r-sets mapped onto themselves, built as unions of whole cycles and fixed points."""
    if not 0 <= r <= p.n:
        return []
    blocks = [sum(1 << (e - 1) for e in c) for c in cycle_decomposition(p).cycles]
    sizes = [popcount(b) for b in blocks]
    fixed_points = [1 << i for i, x in enumerate(p.image) if x == i + 1]
    blocks += fixed_points
    sizes += [1] * len(fixed_points)
    out = []

    def walk(i, mask, size):
        if size == r:
            out.append(mask)
            return
        if i == len(blocks) or size > r:
            return
        walk(i + 1, mask | blocks[i], size + sizes[i])
        walk(i + 1, mask, size)

    walk(0, 0, 0)
    out.sort()
    return out


def classify_support(p: Permutation) -> SupportClass:
    m = popcount(support(p))
    if m == 0:
        return SupportClass.IDENTITY
    if m == 2:
        return SupportClass.TRANSPOSITION
    return SupportClass.SUPPORT_GE_3


def all_permutations(n: int):
    """Every permutation of [n] in lexicographic image order."""
    for image in _itertools_permutations(range(1, n + 1)):
        yield Permutation(image)


def transpositions(n: int):
    for e in range(1, n + 1):
        for f in range(e + 1, n + 1):
            yield e, f

