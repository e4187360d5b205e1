"""Matroids stored by their non-bases.

A rank-r matroid on [n] is its family of dependent r-sets; the bases are the
remaining r-sets.  Basis exchange (:func:`validate`) is the only axiom check;
circuits, hyperplanes and minors are all derived from :func:`rank_of`.

Pair minors ``M \\ ef`` and ``M / ef`` live on the n - 2 elements of
[n] - {e, f}, relabelled to [n - 2] in increasing order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import combinations

from . import _kernels, _pykernels
from .combinatorics import elements_of, format_subset, mask_of, popcount, r_subsets
from .errors import AxiomViolation, BudgetExceeded, DomainError, PromiseViolation
from .johnson import JohnsonParams, StableSet
from .permgroup import Permutation, apply_to_set

DEFAULT_AUT_BUDGET = 9


@dataclass(frozen=True)
class Matroid:
    n: int
    r: int
    nonbases: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "nonbases", tuple(sorted(set(self.nonbases))))

    @cached_property
    def bases(self) -> tuple[int, ...]:
        nb = set(self.nonbases)
        return tuple(x for x in r_subsets(self.n, self.r) if x not in nb)

    @cached_property
    def _nonbasis_set(self) -> frozenset:
        return frozenset(self.nonbases)

    def is_basis(self, x: int) -> bool:
        return popcount(x) == self.r and not x >> self.n and x not in self._nonbasis_set

    def __str__(self):
        body = ",".join(format_subset(x) for x in self.nonbases)
        return f"M(n={self.n}, r={self.r}, nonbases=[{body}])"


def uniform(r: int, n: int) -> Matroid:
    return Matroid(n, r, ())


def _check_family(n: int, r: int, family):
    if not 0 <= r <= n:
        raise DomainError(f"rank {r} outside [0, {n}]")
    for x in family:
        if x < 0 or x >> n or popcount(x) != r:
            raise DomainError(f"{format_subset(x)} is not an {r}-subset of [{n}]")


def _exchange_violation(n, bases):
    if n > 20:
        return _pykernels.exchange_violation(bases)
    return _kernels.exchange_violation(bases)


def validate(n: int, r: int, nonbases) -> Matroid:
    """Build the matroid with these non-bases, or raise :class:`AxiomViolation`."""
    nonbases = list(nonbases)
    _check_family(n, r, nonbases)
    m = Matroid(n, r, tuple(nonbases))
    if not m.bases:
        raise AxiomViolation("every r-set is a non-basis; a matroid needs a basis")
    hit = _exchange_violation(n, m.bases)
    if hit is not None:
        b1, b2, x = hit
        raise AxiomViolation(
            f"exchange fails for B1={format_subset(b1)}, B2={format_subset(b2)}, x={x + 1}",
            witness=(b1, b2, x + 1),
        )
    return m


def from_bases(n: int, r: int, bases) -> Matroid:
    bases = set(bases)
    _check_family(n, r, bases)
    return validate(n, r, [x for x in r_subsets(n, r) if x not in bases])


def rank_of(m: Matroid, s: int) -> int:
    if s >> m.n:
        raise ValueError(f"subset {format_subset(s)} not inside [1..{m.n}]")
    return max(popcount(s & b) for b in m.bases)


# -- circuits, hyperplanes, paving -------------------------------------------


@dataclass(frozen=True)
class UWSplit:
    u_part: tuple[int, ...]
    w_part: tuple[int, ...]


def is_circuit(m: Matroid, x: int) -> bool:
    k = popcount(x)
    if rank_of(m, x) != k - 1:
        return False
    return all(rank_of(m, x & ~(1 << e)) == k - 1 for e in range(m.n) if x >> e & 1)


def is_hyperplane(m: Matroid, x: int) -> bool:
    if rank_of(m, x) != m.r - 1:
        return False
    return all(rank_of(m, x | 1 << g) == m.r for g in range(m.n) if not x >> g & 1)


def uw_split(m: Matroid) -> UWSplit:
    """Separate circuit-hyperplanes from the other non-bases."""
    w = tuple(x for x in m.nonbases if is_circuit(m, x) and is_hyperplane(m, x))
    u = tuple(x for x in m.nonbases if x not in set(w))
    return UWSplit(u, w)


def is_sparse_paving(m: Matroid) -> bool:
    return all(popcount(x ^ y) >= 4 for x, y in combinations(m.nonbases, 2))


def is_paving(m: Matroid) -> bool:
    # Every circuit has at least r elements iff every (r-1)-set is independent.
    if m.r == 0:
        return True
    return all(rank_of(m, s) == m.r - 1 for s in r_subsets(m.n, m.r - 1))


def dual(m: Matroid) -> Matroid:
    full = (1 << m.n) - 1
    return Matroid(m.n, m.n - m.r, tuple(full & ~x for x in m.nonbases))


# -- automorphisms -----------------------------------------------------------


class AutKind(str, Enum):
    TRIVIAL = "trivial"
    SINGLE_TRANSPOSITION = "single_transposition"
    OTHER = "other"


@dataclass(frozen=True)
class AutClassification:
    kind: AutKind
    group_order: int
    generator_pair: tuple[int, int] | None = None


def is_automorphism(m: Matroid, p: Permutation) -> bool:
    if p.n != m.n:
        raise ValueError(f"permutation acts on [{p.n}], matroid on [{m.n}]")
    nb = m._nonbasis_set
    return all(apply_to_set(p, x) in nb for x in m.nonbases)


def _aut_budget(m: Matroid, budget: int | None):
    budget = DEFAULT_AUT_BUDGET if budget is None else budget
    if m.n > budget:
        raise BudgetExceeded(f"Aut(M) on {m.n} elements exceeds the budget of {budget}")


def automorphism_group(m: Matroid, budget: int | None = None) -> list[Permutation]:
    """Every automorphism, in lexicographic image order."""
    _aut_budget(m, budget)
    return [Permutation(x + 1 for x in img) for img in _kernels.automorphisms(m.n, m.nonbases, 0)]


def automorphism_classification(m: Matroid, budget: int | None = None) -> AutClassification:
    group = automorphism_group(m, budget)
    if len(group) == 1:
        return AutClassification(AutKind.TRIVIAL, 1)
    if len(group) == 2:
        moved = [i + 1 for i, x in enumerate(group[1].image) if x != i + 1]
        if len(moved) == 2:
            return AutClassification(AutKind.SINGLE_TRANSPOSITION, 2, (moved[0], moved[1]))
    return AutClassification(AutKind.OTHER, len(group))


# -- pair minors -------------------------------------------------------------


def _squeeze(mask: int, e: int, f: int) -> int:
    out = j = 0
    for i in range(mask.bit_length()):
        if i + 1 in (e, f):
            continue
        if mask >> i & 1:
            out |= 1 << j
        j += 1
    return out


def _spread(mask: int, e: int, f: int, n: int) -> int:
    """Inverse of :func:`_squeeze` for a ground set of size n."""
    out = 0
    j = 0
    for i in range(n):
        if i + 1 in (e, f):
            continue
        if mask >> j & 1:
            out |= 1 << i
        j += 1
    return out


def _check_pair(m_n: int, e: int, f: int):
    if e == f:
        raise ValueError("e and f must be distinct")
    for x in (e, f):
        if not 1 <= x <= m_n:
            raise ValueError(f"element {x} outside [1..{m_n}]")


def delete_pair(m: Matroid, e: int, f: int) -> Matroid:
    _check_pair(m.n, e, f)
    pair = (1 << (e - 1)) | (1 << (f - 1))
    rest = [b & ~pair for b in m.bases]
    k = max(popcount(b) for b in rest)
    bases = {_squeeze(b, e, f) for b in rest if popcount(b) == k}
    return Matroid(m.n - 2, k, tuple(x for x in r_subsets(m.n - 2, k) if x not in bases))


def contract_pair(m: Matroid, e: int, f: int) -> Matroid:
    _check_pair(m.n, e, f)
    pair = (1 << (e - 1)) | (1 << (f - 1))
    inside = max(popcount(b & pair) for b in m.bases)
    k = m.r - inside
    bases = {_squeeze(b & ~pair, e, f) for b in m.bases if popcount(b & pair) == inside}
    return Matroid(m.n - 2, k, tuple(x for x in r_subsets(m.n - 2, k) if x not in bases))


def _mixed_nonbases(deleted: Matroid, contracted: Matroid, n: int, r: int, e: int, f: int):
    """Non-bases containing e but not f, from the two minors alone.

    X = Y + e is dependent iff Y + e + f lies in a hyperplane (no (r-2)-subset
    of Y is a basis of the contraction) or Y contains a circuit (no r-set of
    the deletion containing Y is a basis).
    """
    out = []
    for y in r_subsets(n - 2, r - 1):
        spans_nothing = not any(
            contracted.is_basis(y & ~(1 << h)) for h in range(n - 2) if y >> h & 1
        )
        has_circuit = not any(
            deleted.is_basis(y | 1 << g) for g in range(n - 2) if not y >> g & 1
        )
        if spans_nothing or has_circuit:
            out.append(_spread(y, e, f, n) | 1 << (e - 1))
    return out


def reconstruct_from_minors(
    deleted: Matroid, contracted: Matroid, n: int, r: int, e: int, f: int
) -> Matroid:
    """Recover M from ``M \\ ef`` and ``M / ef`` given that (e f) is an automorphism.

    The rank of the contraction tells how {e, f} sits in M: r means two loops,
    r - 1 a parallel pair, r - 2 an independent pair.  In the last case the rank
    of the deletion separates two coloops (r - 2), a series pair (r - 1) and
    the generic case (r), where the mixed non-bases are read off the minors.
    """
    _check_pair(n, e, f)
    if deleted.n != n - 2 or contracted.n != n - 2:
        raise PromiseViolation(f"minors must live on {n - 2} elements")
    be, bf = 1 << (e - 1), 1 << (f - 1)
    rd, rc = deleted.r, contracted.r

    def spread_all(family, extra=0):
        return [_spread(x, e, f, n) | extra for x in family]

    if rc == r and rd == r:
        bases = spread_all(deleted.bases)
    elif rc == r - 1 and rd in (r, r - 1):
        bases = spread_all(contracted.bases, be) + spread_all(contracted.bases, bf)
        if rd == r:
            bases += spread_all(deleted.bases)
    elif rc == r - 2 and rd == r - 2:
        bases = spread_all(contracted.bases, be | bf)
    elif rc == r - 2 and rd == r - 1:
        bases = (spread_all(deleted.bases, be) + spread_all(deleted.bases, bf)
                 + spread_all(contracted.bases, be | bf))
    elif rc == r - 2 and rd == r:
        mixed = _mixed_nonbases(deleted, contracted, n, r, e, f)
        mixed += [x ^ be ^ bf for x in mixed]
        nonbases = set(mixed)
        nonbases.update(spread_all(deleted.nonbases))
        nonbases.update(spread_all(contracted.nonbases, be | bf))
        bases = [x for x in r_subsets(n, r) if x not in nonbases]
    else:
        raise PromiseViolation(
            f"minor ranks (deletion {rd}, contraction {rc}) are impossible for rank {r}"
        )
    try:
        m = from_bases(n, r, bases)
    except DomainError as exc:
        raise PromiseViolation(f"assembled family is not a matroid: {exc}") from None
    if (not is_automorphism(m, Permutation.transposition(e, f, n))
            or delete_pair(m, e, f) != deleted or contract_pair(m, e, f) != contracted):
        raise PromiseViolation("minors do not come from a matroid with (e f) as automorphism")
    return m


# -- sparse paving correspondence ---------------------------------------------


def stable_set_to_matroid(stable: StableSet) -> Matroid:
    """The sparse paving matroid whose non-bases are the members of ``stable``."""
    params = stable.params
    if params.is_empty:
        raise DomainError(f"{params} has no vertices, so there is no matroid")
    if params.num_vertices - len(stable) < 1:
        raise DomainError("a matroid needs at least one basis")
    return Matroid(params.n, params.r, stable.members)


def matroid_to_stable_set(m: Matroid) -> StableSet:
    if not is_sparse_paving(m):
        raise DomainError("matroid is not sparse paving")
    return StableSet._trusted(JohnsonParams(m.n, m.r), m.nonbases)


# -- file format ---------------------------------------------------------------


def to_json(m: Matroid) -> str:
    """Canonical form: ``{"n":4,"r":2,"nonbases":[[1,2]]}``."""
    nonbases = sorted(list(elements_of(x)) for x in m.nonbases)
    return json.dumps({"n": m.n, "r": m.r, "nonbases": nonbases}, separators=(",", ":"))


def from_json(text: str) -> Matroid:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"not valid JSON: {exc}") from None
    if not isinstance(data, dict) or set(data) != {"n", "r", "nonbases"}:
        raise DomainError('matroid file needs exactly the keys "n", "r", "nonbases"')
    n, r, raw = data["n"], data["r"], data["nonbases"]
    if not isinstance(n, int) or not isinstance(r, int) or not isinstance(raw, list):
        raise DomainError("n and r must be integers and nonbases a list")
    if n < 0:
        raise DomainError("n must be nonnegative")
    masks = []
    for item in raw:
        if not isinstance(item, list) or not all(isinstance(x, int) for x in item):
            raise DomainError(f"non-basis {item!r} is not a list of integers")
        if len(set(item)) != len(item) or len(item) != r:
            raise DomainError(f"non-basis {item!r} is not an {r}-subset")
        try:
            masks.append(mask_of(item, n))
        except ValueError as exc:
            raise DomainError(str(exc)) from None
    if len(set(masks)) != len(masks):
        raise DomainError("duplicate non-basis")
    return validate(n, r, masks)


def load(path) -> Matroid:
    with open(path, encoding="utf-8") as fh:
        return from_json(fh.read())


def dump(m: Matroid, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(to_json(m) + "\n")
