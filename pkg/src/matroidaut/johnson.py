"""Johnson graphs J(n, r) and their stable sets.

Vertices are the r-subsets of [n] as element masks, listed in ascending mask
order; a vertex's position in that list is its *index*, and families of vertices
are handled internally as bitmasks over indices.  J(n, r) with r outside
[0, n] is the empty graph, whose only stable set is the empty family.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from . import _kernels
from .combinatorics import binomial, format_subset, mask_of, popcount, r_subsets
from .errors import BudgetExceeded, ClosureNotStable, DomainError, NotInvariantError
from .permgroup import Permutation, apply_to_set, cycle_decomposition, fixed_r_sets, support

DEFAULT_VERTEX_BUDGET = 256


@dataclass(frozen=True)
class JohnsonParams:
    n: int
    r: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"n must be nonnegative, got {self.n}")

    @property
    def is_empty(self) -> bool:
        return self.r < 0 or self.r > self.n

    @property
    def num_vertices(self) -> int:
        return binomial(self.n, self.r)

    @property
    def degree(self) -> int:
        return 0 if self.is_empty else self.r * (self.n - self.r)

    def __str__(self):
        return f"J({self.n},{self.r})"


class JohnsonGraph:
    """Vertex list, index lookup and index-bitmask adjacency of J(n, r)."""

    def __init__(self, params: JohnsonParams):
        self.params = params
        self.vertices = r_subsets(params.n, params.r)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        self.full = (1 << len(self.vertices)) - 1
        n = params.n
        adj = []
        for v in self.vertices:
            nb = 0
            for a in range(n):
                if not v >> a & 1:
                    continue
                for b in range(n):
                    if not v >> b & 1:
                        nb |= 1 << self.index[v ^ (1 << a) ^ (1 << b)]
            adj.append(nb)
        self.adj = adj

    def vertex_mask(self, family) -> int:
        out = 0
        for x in family:
            try:
                out |= 1 << self.index[x]
            except KeyError:
                raise DomainError(
                    f"{format_subset(x)} is not a vertex of {self.params}"
                ) from None
        return out

    def family(self, vmask: int) -> tuple[int, ...]:
        out = []
        while vmask:
            low = vmask & -vmask
            out.append(self.vertices[low.bit_length() - 1])
            vmask ^= low
        return tuple(out)

    def neighbourhood(self, vmask: int) -> int:
        out = 0
        while vmask:
            low = vmask & -vmask
            out |= self.adj[low.bit_length() - 1]
            vmask ^= low
        return out


@lru_cache(maxsize=128)
def johnson_graph(n: int, r: int) -> JohnsonGraph:
    return JohnsonGraph(JohnsonParams(n, r))


def _graph(params: JohnsonParams, budget: int | None) -> JohnsonGraph:
    budget = DEFAULT_VERTEX_BUDGET if budget is None else budget
    if params.num_vertices > budget:
        raise BudgetExceeded(
            f"{params} has {params.num_vertices} vertices; the budget is {budget}"
        )
    return johnson_graph(params.n, params.r)


def adjacent(x: int, y: int) -> bool:
    if popcount(x) != popcount(y):
        raise ValueError("adjacency is only defined between sets of equal size")
    return popcount(x ^ y) == 2


# -- stable sets -------------------------------------------------------------


def format_stable_set(members) -> str:
    """``"{1,2},{3,4}"``; the empty family formats as the empty string."""
    return ",".join(format_subset(x) for x in sorted(members))


@dataclass(frozen=True)
class StableSet:
    """A family of r-sets, pairwise at symmetric-difference distance >= 4."""

    params: JohnsonParams
    members: tuple[int, ...] = field(default=())

    def __post_init__(self):
        members = tuple(sorted(set(self.members)))
        object.__setattr__(self, "members", members)
        n, r = self.params.n, self.params.r
        for x in members:
            if x < 0 or x >> n or popcount(x) != r:
                raise DomainError(f"{format_subset(x)} is not an {r}-subset of [{n}]")
        for x, y in combinations(members, 2):
            if popcount(x ^ y) == 2:
                raise DomainError(
                    f"{format_subset(x)} and {format_subset(y)} are adjacent in {self.params}"
                )

    @classmethod
    def _trusted(cls, params: JohnsonParams, members) -> "StableSet":
        obj = object.__new__(cls)
        object.__setattr__(obj, "params", params)
        object.__setattr__(obj, "members", tuple(sorted(members)))
        return obj

    @classmethod
    def from_elements(cls, params: JohnsonParams, families) -> "StableSet":
        return cls(params, tuple(mask_of(f, params.n) for f in families))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, x):
        return x in self.members

    def __str__(self):
        return format_stable_set(self.members)


def stable_size_profile(params: JohnsonParams, budget: int | None = None) -> list[int]:
    """``profile[k]`` is the number of stable sets with k members."""
    if params.is_empty:
        return [1]
    g = _graph(params, budget)
    return _kernels.stable_size_profile(g.adj, g.full)


def count_stable_sets(params: JohnsonParams, budget: int | None = None) -> int:
    return sum(stable_size_profile(params, budget))


def count_stable_sets_by_size(params: JohnsonParams, k: int, budget: int | None = None) -> int:
    if k < 0:
        raise ValueError("k must be nonnegative")
    profile = stable_size_profile(params, budget)
    return profile[k] if k < len(profile) else 0


def _walk_stable(adj, cand, chosen=0):
    # Each call yields exactly one stable set: chosen plus nothing further.
    yield chosen
    rest = cand
    while rest:
        low = rest & -rest
        rest ^= low
        yield from _walk_stable(adj, rest & ~adj[low.bit_length() - 1], chosen | low)


def iter_stable_sets(params: JohnsonParams, budget: int | None = None):
    """Every stable set of J(n, r), in a fixed depth-first order."""
    if params.is_empty:
        yield StableSet._trusted(params, ())
        return
    g = _graph(params, budget)
    for vmask in _walk_stable(g.adj, g.full):
        yield StableSet._trusted(params, g.family(vmask))


# -- invariant stable sets ---------------------------------------------------


def _check_perm(params: JohnsonParams, p: Permutation):
    if p.n != params.n:
        raise ValueError(f"permutation acts on [{p.n}], graph is {params}")


def _invariant_orbit_graph(g: JohnsonGraph, p: Permutation):
    """Vertex orbits that are themselves stable, and the graph they induce.

    An invariant stable set is a union of orbits; an orbit with an internal edge
    can never take part, and two orbits may be combined iff no edge joins them.
    """
    seen = 0
    orbits = []
    for i, v in enumerate(g.vertices):
        if seen >> i & 1:
            continue
        omask = 0
        x = v
        while True:
            omask |= 1 << g.index[x]
            x = apply_to_set(p, x)
            if x == v:
                break
        seen |= omask
        if not g.neighbourhood(omask) & omask:
            orbits.append(omask)
    nbrs = [g.neighbourhood(o) for o in orbits]
    adj = [
        sum(1 << j for j, other in enumerate(orbits) if nbrs[i] & other)
        for i in range(len(orbits))
    ]
    return orbits, adj


def count_invariant_stable_sets(
    params: JohnsonParams, p: Permutation, budget: int | None = None
) -> int:
    _check_perm(params, p)
    if params.is_empty:
        return 1
    g = _graph(params, budget)
    orbits, adj = _invariant_orbit_graph(g, p)
    return sum(_kernels.stable_size_profile(adj, (1 << len(orbits)) - 1))


def iter_invariant_stable_sets(params: JohnsonParams, p: Permutation, budget: int | None = None):
    """Stable sets I with p(I) = I, in a fixed order."""
    _check_perm(params, p)
    if params.is_empty:
        yield StableSet._trusted(params, ())
        return
    g = _graph(params, budget)
    orbits, adj = _invariant_orbit_graph(g, p)
    for omask in _walk_stable(adj, (1 << len(orbits)) - 1):
        vmask = 0
        while omask:
            low = omask & -omask
            vmask |= orbits[low.bit_length() - 1]
            omask ^= low
        yield StableSet._trusted(params, g.family(vmask))


def enumerate_invariant_stable_sets(params: JohnsonParams, p: Permutation, budget: int | None = None):
    """All p-invariant stable sets together with their count."""
    sets = list(iter_invariant_stable_sets(params, p, budget))
    return sets, len(sets)


def is_invariant(family, p: Permutation) -> bool:
    members = set(family)
    return all(apply_to_set(p, x) in members for x in members)


@dataclass(frozen=True)
class InvariantSplit:
    whole: StableSet
    fixed_part: StableSet
    moved_part: StableSet
    large_orbit_count: int


def split_invariant(stable: StableSet, p: Permutation) -> InvariantSplit:
    """Separate the members fixed by p from those lying in orbits of size >= 2."""
    _check_perm(stable.params, p)
    if not is_invariant(stable.members, p):
        raise NotInvariantError(f"{stable} is not invariant under {p}")
    fixed = tuple(x for x in stable if apply_to_set(p, x) == x)
    moved = tuple(x for x in stable if apply_to_set(p, x) != x)
    orbits = set()
    for x in moved:
        orbit = [x]
        y = apply_to_set(p, x)
        while y != x:
            orbit.append(y)
            y = apply_to_set(p, y)
        orbits.add(min(orbit))
    params = stable.params
    return InvariantSplit(
        stable,
        StableSet._trusted(params, fixed),
        StableSet._trusted(params, moved),
        len(orbits),
    )


def orbit_closure(seed: StableSet, p: Permutation) -> StableSet:
    """Close ``seed`` under images of p; raises if the closure is not stable."""
    _check_perm(seed.params, p)
    closed = set()
    for x in seed:
        while x not in closed:
            closed.add(x)
            x = apply_to_set(p, x)
    try:
        return StableSet(seed.params, tuple(closed))
    except DomainError as exc:
        raise ClosureNotStable(f"closure of {seed} under {p} is not stable: {exc}") from None


# -- cycle blocks ------------------------------------------------------------


@dataclass(frozen=True)
class CheckReport:
    lhs: int
    rhs: int
    ok: bool
    vacuous: bool = False


def _cycle_masks(p: Permutation):
    return [mask_of(c) for c in cycle_decomposition(p).cycles]


def pblock_subgraph(params: JohnsonParams, p: Permutation, cycles) -> JohnsonParams:
    """Johnson parameters of the block of r-sets meeting Supp(p) in exactly the given cycles.

    ``cycles`` holds 1-based positions in the canonical cycle decomposition.
    """
    _check_perm(params, p)
    dec = cycle_decomposition(p)
    chosen = set(cycles)
    if not chosen <= set(range(1, dec.cycle_count + 1)):
        raise ValueError(f"cycle indices {sorted(chosen)} outside 1..{dec.cycle_count}")
    taken = sum(dec.lengths[j - 1] for j in chosen)
    return JohnsonParams(params.n - dec.moved, params.r - taken)


def pblock_vertices(params: JohnsonParams, p: Permutation, cycles) -> list[int]:
    blocks = _cycle_masks(p)
    target = 0
    for j in cycles:
        target |= blocks[j - 1]
    supp = support(p)
    return [x for x in r_subsets(params.n, params.r) if x & supp == target]


def check_pblock_bound(params: JohnsonParams, p: Permutation, budget: int | None = None) -> CheckReport:
    """Stable sets inside Fix(p) versus the product of block stable-set counts."""
    _check_perm(params, p)
    if p.is_identity():
        raise ValueError("the block bound needs a permutation with nonempty support")
    if params.is_empty:
        lhs = 1
    else:
        g = _graph(params, budget)
        fixed = g.vertex_mask(fixed_r_sets(p, params.r))
        lhs = sum(_kernels.stable_size_profile(g.adj, fixed))
    dec = cycle_decomposition(p)
    rhs = 1
    for k in range(dec.cycle_count + 1):
        for chosen in combinations(range(1, dec.cycle_count + 1), k):
            rhs *= count_stable_sets(pblock_subgraph(params, p, chosen), budget)
    return CheckReport(lhs, rhs, lhs <= rhs)


# -- transpositions ----------------------------------------------------------


@dataclass(frozen=True)
class TranspositionPartition:
    v_empty: tuple[int, ...]
    v_e: tuple[int, ...]
    v_f: tuple[int, ...]
    v_ef: tuple[int, ...]


def _check_pair(params: JohnsonParams, e: int, f: int):
    if e == f:
        raise ValueError("e and f must be distinct")
    for x in (e, f):
        if not 1 <= x <= params.n:
            raise ValueError(f"element {x} outside [1..{params.n}]")


def transposition_partition(params: JohnsonParams, e: int, f: int) -> TranspositionPartition:
    _check_pair(params, e, f)
    be, bf = 1 << (e - 1), 1 << (f - 1)
    classes = {0: [], be: [], bf: [], be | bf: []}
    for x in r_subsets(params.n, params.r):
        classes[x & (be | bf)].append(x)
    return TranspositionPartition(
        tuple(classes[0]), tuple(classes[be]), tuple(classes[bf]), tuple(classes[be | bf])
    )


def _squeeze(mask: int, e: int, f: int) -> int:
    """Drop elements e and f and close the gaps, preserving order."""
    out = 0
    j = 0
    i = 0
    while mask >> i:
        if i + 1 not in (e, f):
            if mask >> i & 1:
                out |= 1 << j
            j += 1
        i += 1
    return out


def box_product_graph(params: JohnsonParams):
    """Vertices ``(Y, side)`` and index-bitmask adjacency of J(n, r) box K2."""
    g = johnson_graph(params.n, params.r)
    size = len(g.vertices)
    vertices = [(y, s) for s in (0, 1) for y in g.vertices]
    adj = []
    for s in (0, 1):
        for i in range(size):
            same_side = g.adj[i] << (s * size)
            rung = 1 << ((1 - s) * size + i)
            adj.append(same_side | rung)
    return vertices, adj


def count_box_stable_by_size(params: JohnsonParams, k: int) -> int:
    """Stable sets with k members in J(n, r) box K2."""
    if params.is_empty:
        return 1 if k == 0 else 0
    _, adj = box_product_graph(params)
    profile = _kernels.stable_size_profile(adj, (1 << len(adj)) - 1)
    return profile[k] if k < len(profile) else 0


def check_box_product_iso(params: JohnsonParams, e: int, f: int) -> bool:
    """Verify edge by edge that V_e and V_f induce J(n-2, r-1) box K2."""
    _check_pair(params, e, f)
    if not 1 <= params.r <= params.n - 1:
        raise ValueError("need 1 <= r <= n-1")
    part = transposition_partition(params, e, f)
    source = list(part.v_e) + list(part.v_f)
    be, bf = 1 << (e - 1), 1 << (f - 1)
    phi = {x: (_squeeze(x & ~(be | bf), e, f), 0 if x & be else 1) for x in source}
    target_vertices, target_adj = box_product_graph(JohnsonParams(params.n - 2, params.r - 1))
    target_index = {v: i for i, v in enumerate(target_vertices)}
    if sorted(phi.values()) != sorted(target_vertices) or len(set(phi.values())) != len(source):
        return False
    for x, y in combinations(source, 2):
        i, j = target_index[phi[x]], target_index[phi[y]]
        if adjacent(x, y) != bool(target_adj[i] >> j & 1):
            return False
    return True


def check_product_identity(params: JohnsonParams, e: int, f: int, budget: int | None = None) -> CheckReport:
    """Invariant stable sets under (e f) against i(J(n-2, r-2)) * i(J(n-2, r))."""
    _check_pair(params, e, f)
    lhs = count_invariant_stable_sets(params, Permutation.transposition(e, f, params.n), budget)
    rhs = (count_stable_sets(JohnsonParams(params.n - 2, params.r - 2), budget)
           * count_stable_sets(JohnsonParams(params.n - 2, params.r), budget))
    return CheckReport(lhs, rhs, lhs == rhs)


def filter_map_F(stable: StableSet, extra: StableSet, e: int, f: int) -> StableSet:
    """Add the members of ``extra`` and evict everything adjacent to them.

    ``stable`` must be (e f)-invariant and ``extra`` must lie in V_e and V_f.
    """
    params = stable.params
    _check_pair(params, e, f)
    if extra.params != params:
        raise ValueError("both families must live in the same Johnson graph")
    p = Permutation.transposition(e, f, params.n)
    if not is_invariant(stable.members, p):
        raise NotInvariantError(f"{stable} is not invariant under {p}")
    pair = (1 << (e - 1)) | (1 << (f - 1))
    for x in extra:
        if popcount(x & pair) != 1:
            raise DomainError(f"{format_subset(x)} does not meet {{{e},{f}}} in one element")
    kept = [x for x in stable if not any(popcount(x ^ a) == 2 for a in extra)]
    return StableSet(params, tuple(kept) + extra.members)


def check_kbound(params: JohnsonParams, e: int, f: int, k: int, budget: int | None = None) -> CheckReport:
    """indinv * i_k(box) <= (r(n-r))^k * i(J(n, r)), all exact."""
    _check_pair(params, e, f)
    if k < 0:
        raise ValueError("k must be nonnegative")
    indinv = count_invariant_stable_sets(params, Permutation.transposition(e, f, params.n), budget)
    ik = count_box_stable_by_size(JohnsonParams(params.n - 2, params.r - 1), k)
    total = count_stable_sets(params, budget)
    lhs = indinv * ik
    rhs = (params.r * (params.n - params.r)) ** k * total
    if ik == 0:
        return CheckReport(lhs, rhs, True, vacuous=True)
    return CheckReport(lhs, rhs, lhs <= rhs)
