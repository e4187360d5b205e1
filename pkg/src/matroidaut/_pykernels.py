"""Pure-Python kernels; the reference semantics for ``_ckernels``.

Vertex families are bitmasks over vertex *indices*; element families are
bitmasks over 0-based ground-set elements.  Every function here has a twin with
the identical signature and identical results in the compiled module.
"""

from __future__ import annotations

import sys

sys.setrecursionlimit(max(sys.getrecursionlimit(), 10_000))


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def stable_size_profile(adj, cand):
    """Counts of stable sets inside ``cand`` by cardinality (index = size)."""
    counts = [0] * (bin(cand).count("1") + 1)

    def walk(rest, size):
        counts[size] += 1
        while rest:
            low = rest & -rest
            rest ^= low
            walk(rest & ~adj[low.bit_length() - 1], size + 1)

    walk(cand, 0)
    while len(counts) > 1 and counts[-1] == 0:
        counts.pop()
    return counts


def automorphisms(n, family, limit=0):
    """Permutations of range(n) mapping the element-mask ``family`` onto itself.

    Returns 0-based image tuples in lexicographic order, stopping after ``limit``
    results when ``limit > 0``.  Images are assigned element by element; a
    member is checked as soon as its largest element has an image.
    """
    members = set(family)
    deg = [0] * n
    by_top = [[] for _ in range(n)]
    for m in members:
        for e in _bits(m):
            deg[e] += 1
        if m:
            by_top[m.bit_length() - 1].append(m)
    img = [0] * n
    found = []

    def image_of(m):
        out = 0
        for e in _bits(m):
            out |= 1 << img[e]
        return out

    def walk(k, used):
        if k == n:
            found.append(tuple(img))
            return 0 < limit <= len(found)
        for t in range(n):
            if used >> t & 1 or deg[t] != deg[k]:
                continue
            img[k] = t
            if all(image_of(m) in members for m in by_top[k]):
                if walk(k + 1, used | 1 << t):
                    return True
        return False

    walk(0, 0)
    return found


def classify_family(n, family):
    """0 = trivial group, 1 = generated by one transposition, 2 = anything else."""
    auts = automorphisms(n, family, 3)
    if len(auts) == 1:
        return 0
    if len(auts) == 2:
        moved = sum(1 for i, x in enumerate(auts[1]) if i != x)
        return 1 if moved == 2 else 2
    return 2


def sparse_census_tally(n, vertices, adj, chosen, cand):
    """Tally stable sets ``chosen | T`` (T stable inside ``cand``) by symmetry class.

    Returns ``[total, trivial, single_transposition, other]``.  ``cand`` must
    already exclude ``chosen`` and its neighbours.
    """
    tally = [0, 0, 0, 0]
    stack = [vertices[v] for v in _bits(chosen)]

    def walk(rest):
        tally[0] += 1
        tally[1 + classify_family(n, stack)] += 1
        while rest:
            low = rest & -rest
            rest ^= low
            v = low.bit_length() - 1
            stack.append(vertices[v])
            walk(rest & ~adj[v])
            stack.pop()

    walk(cand)
    return tally


def matroid_families(num_vertices, triggers):
    """Enumerate basis families of r-sets that satisfy every exchange constraint.

    ``triggers[t]`` lists ``(need, cand)`` vertex-mask pairs whose vertices all
    have index <= t: the constraint is violated when every vertex of ``need`` is
    a basis and no vertex of ``cand`` is.  Returns the non-basis vertex masks of
    all surviving complete assignments that have at least one basis, ascending.
    """
    full = (1 << num_vertices) - 1
    out = []

    def walk(t, bases):
        if t == num_vertices:
            if bases:
                out.append(full & ~bases)
            return
        for choice in (bases | 1 << t, bases):
            for need, cand in triggers[t]:
                if choice & need == need and not choice & cand:
                    break
            else:
                walk(t + 1, choice)

    walk(0, 0)
    out.sort()
    return out


def exchange_violation(bases):
    """First ``(B1, B2, x)`` violating basis exchange, or None.

    ``bases`` are element masks; x is a 0-based element of B1 \\ B2 such that no
    y in B2 \\ B1 makes B1 - x + y a basis.  Scan order: B1, B2 in input order,
    x ascending.
    """
    members = set(bases)
    for b1 in bases:
        for b2 in bases:
            diff = b1 & ~b2
            if not diff:
                continue
            ys = list(_bits(b2 & ~b1))
            for x in _bits(diff):
                base = b1 ^ (1 << x)
                if not any(base | 1 << y in members for y in ys):
                    return (b1, b2, x)
    return None
