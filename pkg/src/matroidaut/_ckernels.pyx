# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the functions in ``_pykernels``.

Same signatures, same results.  Vertex bitsets use up to ``MAX_WORDS`` 64-bit
words; element masks are limited to ``MAX_ELEMENTS`` ground-set elements.
"""

from libc.stdint cimport uint64_t, uint32_t, uint8_t
from libc.stdlib cimport malloc, calloc, free

cdef enum:
    MAX_WORDS = 4
    MAX_ELEMENTS = 20
    MAX_AUT_ELEMENTS = 12

MAX_VERTICES = MAX_WORDS * 64


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcount(unsigned int) nogil
    int __builtin_clz(unsigned int) nogil


cdef inline int _ctz(uint64_t x) noexcept nogil:
    return __builtin_ctzll(x)


cdef int _load_words(object mask, uint64_t* out, int words) except -1:
    cdef int w
    if mask < 0 or mask >> (64 * words):
        raise ValueError("vertex mask exceeds the compiled bitset width")
    for w in range(words):
        out[w] = <uint64_t>((mask >> (64 * w)) & 0xFFFFFFFFFFFFFFFF)
    return 0


cdef int _words_for(object adj, object cand) except -1:
    cdef Py_ssize_t nv = len(adj)
    cdef int bits = max(int(nv), int(cand).bit_length())
    cdef int words = (bits + 63) // 64
    if words < 1:
        words = 1
    if words > MAX_WORDS:
        raise ValueError("graph has more vertices than the compiled kernel supports")
    return words


# -- stable sets ------------------------------------------------------------


cdef struct StableCtx:
    int words
    int nv
    uint64_t* adj          # nv * words
    uint64_t* counts       # by size


cdef void _profile_walk(StableCtx* c, uint64_t* rest, int size) noexcept nogil:
    cdef uint64_t nxt[MAX_WORDS]
    cdef uint64_t cur[MAX_WORDS]
    cdef int w, v, k
    cdef uint64_t low
    c.counts[size] += 1
    for w in range(c.words):
        cur[w] = rest[w]
    for w in range(c.words):
        while cur[w]:
            low = cur[w] & (~cur[w] + 1)
            cur[w] ^= low
            v = w * 64 + _ctz(low)
            for k in range(c.words):
                nxt[k] = cur[k] & ~c.adj[v * c.words + k]
            _profile_walk(c, nxt, size + 1)


def stable_size_profile(adj, cand):
    cdef int words = _words_for(adj, cand)
    cdef int nv = len(adj)
    cdef StableCtx c
    cdef uint64_t start[MAX_WORDS]
    cdef int i
    c.words = words
    c.nv = nv
    c.adj = <uint64_t*>calloc(max(nv, 1) * words, sizeof(uint64_t))
    c.counts = <uint64_t*>calloc(words * 64 + 2, sizeof(uint64_t))
    if c.adj == NULL or c.counts == NULL:
        free(c.adj)
        free(c.counts)
        raise MemoryError()
    try:
        for i in range(nv):
            _load_words(adj[i], &c.adj[i * words], words)
        _load_words(cand, start, words)
        with nogil:
            _profile_walk(&c, start, 0)
        top = bin(cand).count("1") + 1
        out = [c.counts[i] for i in range(top)]
    finally:
        free(c.adj)
        free(c.counts)
    while len(out) > 1 and out[len(out) - 1] == 0:
        out.pop()
    return out


# -- automorphisms ----------------------------------------------------------


cdef struct AutCtx:
    int n
    int nfam
    uint32_t* fam          # members, grouped by top element
    int* top_start         # n + 1 offsets into fam
    uint8_t* member        # 2**n membership table
    int deg[MAX_AUT_ELEMENTS]
    int img[MAX_AUT_ELEMENTS]
    int limit
    int found
    int cap
    int* images            # cap * n


cdef inline uint32_t _image(AutCtx* c, uint32_t m) noexcept nogil:
    cdef uint32_t out = 0
    cdef int e
    while m:
        e = _ctz(m)
        m &= m - 1
        out |= (<uint32_t>1) << c.img[e]
    return out


cdef int _aut_walk(AutCtx* c, int k, uint32_t used) noexcept nogil:
    cdef int t, j, ok, i
    if k == c.n:
        if c.found < c.cap:
            for i in range(c.n):
                c.images[c.found * c.n + i] = c.img[i]
        c.found += 1
        return c.limit > 0 and c.found >= c.limit
    for t in range(c.n):
        if (used >> t) & 1 or c.deg[t] != c.deg[k]:
            continue
        c.img[k] = t
        ok = 1
        for j in range(c.top_start[k], c.top_start[k + 1]):
            if not c.member[_image(c, c.fam[j])]:
                ok = 0
                break
        if ok and _aut_walk(c, k + 1, used | ((<uint32_t>1) << t)):
            return 1
    return 0


cdef int _setup_aut(AutCtx* c, int n, uint32_t* members, int nfam) noexcept nogil:
    """Fill degree, grouping and membership table; members must be distinct."""
    cdef int i, e, t
    cdef uint32_t m
    cdef int counts[MAX_AUT_ELEMENTS + 1]
    c.n = n
    c.nfam = nfam
    for e in range(n):
        c.deg[e] = 0
    for t in range(n + 1):
        counts[t] = 0
    for i in range(nfam):
        c.member[members[i]] = 1
        m = members[i]
        while m:
            e = _ctz(m)
            m &= m - 1
            c.deg[e] += 1
        if members[i]:
            counts[31 - __builtin_clz(members[i]) + 1] += 1
    c.top_start[0] = 0
    for t in range(n):
        c.top_start[t + 1] = c.top_start[t] + counts[t + 1]
    for t in range(n):
        counts[t] = c.top_start[t]
    for i in range(nfam):
        if members[i]:
            t = 31 - __builtin_clz(members[i])
            c.fam[counts[t]] = members[i]
            counts[t] += 1
    return 0


cdef void _clear_aut(AutCtx* c, uint32_t* members, int nfam) noexcept nogil:
    cdef int i
    for i in range(nfam):
        c.member[members[i]] = 0


def automorphisms(int n, family, int limit=0):
    if n > MAX_AUT_ELEMENTS:
        raise ValueError("ground set too large for the compiled automorphism kernel")
    members_py = sorted(set(family))
    cdef int nfam = len(members_py)
    cdef int i
    cdef AutCtx c
    cdef uint32_t* members = <uint32_t*>malloc(max(nfam, 1) * sizeof(uint32_t))
    c.fam = <uint32_t*>malloc(max(nfam, 1) * sizeof(uint32_t))
    c.top_start = <int*>malloc((n + 1) * sizeof(int))
    c.member = <uint8_t*>calloc((<size_t>1) << n, 1)
    c.limit = limit
    c.found = 0
    c.cap = limit if limit > 0 else 1
    c.images = NULL
    try:
        for i in range(nfam):
            if members_py[i] < 0 or members_py[i] >> n:
                raise ValueError("family member outside the ground set")
            members[i] = members_py[i]
        _setup_aut(&c, n, members, nfam)
        if limit <= 0:
            # Count first, then allocate and collect.
            c.cap = 0
            with nogil:
                _aut_walk(&c, 0, 0)
            c.cap = c.found
            c.found = 0
        c.images = <int*>malloc(max(c.cap, 1) * n * sizeof(int))
        with nogil:
            _aut_walk(&c, 0, 0)
        out = [tuple(c.images[j * n + i] for i in range(n)) for j in range(min(c.found, c.cap))]
    finally:
        free(members)
        free(c.fam)
        free(c.top_start)
        free(c.member)
        free(c.images)
    return out


cdef int _classify(AutCtx* c, uint32_t* members, int nfam) noexcept nogil:
    cdef int i, moved
    _setup_aut(c, c.n, members, nfam)
    c.limit = 3
    c.cap = 3
    c.found = 0
    _aut_walk(c, 0, 0)
    _clear_aut(c, members, nfam)
    if c.found == 1:
        return 0
    if c.found == 2:
        moved = 0
        for i in range(c.n):
            if c.images[c.n + i] != i:
                moved += 1
        return 1 if moved == 2 else 2
    return 2


def classify_family(int n, family):
    auts = automorphisms(n, family, 3)
    if len(auts) == 1:
        return 0
    if len(auts) == 2:
        moved = sum(1 for i, x in enumerate(auts[1]) if i != x)
        return 1 if moved == 2 else 2
    return 2


# -- sparse census ----------------------------------------------------------


cdef struct CensusCtx:
    int words
    uint64_t* adj
    uint32_t* vertices
    uint32_t* stack
    int depth
    AutCtx aut
    uint64_t tally[4]


cdef void _census_walk(CensusCtx* c, uint64_t* rest) noexcept nogil:
    cdef uint64_t nxt[MAX_WORDS]
    cdef uint64_t cur[MAX_WORDS]
    cdef int w, v, k
    cdef uint64_t low
    c.tally[0] += 1
    c.tally[1 + _classify(&c.aut, c.stack, c.depth)] += 1
    for w in range(c.words):
        cur[w] = rest[w]
    for w in range(c.words):
        while cur[w]:
            low = cur[w] & (~cur[w] + 1)
            cur[w] ^= low
            v = w * 64 + _ctz(low)
            for k in range(c.words):
                nxt[k] = cur[k] & ~c.adj[v * c.words + k]
            c.stack[c.depth] = c.vertices[v]
            c.depth += 1
            _census_walk(c, nxt)
            c.depth -= 1


def sparse_census_tally(int n, vertices, adj, chosen, cand):
    if n > MAX_AUT_ELEMENTS:
        raise ValueError("ground set too large for the compiled automorphism kernel")
    cdef int words = _words_for(adj, cand | chosen)
    cdef int nv = len(adj)
    cdef int i
    cdef CensusCtx c
    cdef uint64_t start[MAX_WORDS]
    c.words = words
    c.depth = 0
    for i in range(4):
        c.tally[i] = 0
    c.adj = <uint64_t*>calloc(max(nv, 1) * words, sizeof(uint64_t))
    c.vertices = <uint32_t*>malloc(max(nv, 1) * sizeof(uint32_t))
    c.stack = <uint32_t*>malloc((nv + 1) * sizeof(uint32_t))
    c.aut.n = n
    c.aut.fam = <uint32_t*>malloc((nv + 1) * sizeof(uint32_t))
    c.aut.top_start = <int*>malloc((n + 1) * sizeof(int))
    c.aut.member = <uint8_t*>calloc((<size_t>1) << n, 1)
    c.aut.images = <int*>malloc(3 * n * sizeof(int) + sizeof(int))
    try:
        for i in range(nv):
            _load_words(adj[i], &c.adj[i * words], words)
            c.vertices[i] = vertices[i]
        for v in range(nv):
            if (chosen >> v) & 1:
                c.stack[c.depth] = vertices[v]
                c.depth += 1
        _load_words(cand, start, words)
        with nogil:
            _census_walk(&c, start)
        out = [c.tally[0], c.tally[1], c.tally[2], c.tally[3]]
    finally:
        free(c.adj)
        free(c.vertices)
        free(c.stack)
        free(c.aut.fam)
        free(c.aut.top_start)
        free(c.aut.member)
        free(c.aut.images)
    return out


# -- all matroids by exchange-constrained search -----------------------------


cdef struct FamCtx:
    int nv
    uint64_t full
    int* start            # nv + 1 offsets
    uint64_t* need
    uint64_t* cand


cdef void _fam_walk(FamCtx* c, int t, uint64_t bases, list out):
    cdef uint64_t choice
    cdef int j, alt, bad
    if t == c.nv:
        if bases:
            out.append(c.full & ~bases)
        return
    for alt in range(2):
        choice = (bases | ((<uint64_t>1) << t)) if alt == 0 else bases
        bad = 0
        for j in range(c.start[t], c.start[t + 1]):
            if (choice & c.need[j]) == c.need[j] and not (choice & c.cand[j]):
                bad = 1
                break
        if not bad:
            _fam_walk(c, t + 1, choice, out)


def matroid_families(int num_vertices, triggers):
    if num_vertices > 64:
        raise ValueError("compiled matroid search supports at most 64 r-subsets")
    cdef FamCtx c
    cdef int total = sum(len(tr) for tr in triggers)
    cdef int t, j, pos = 0
    c.nv = num_vertices
    c.full = ((<uint64_t>1) << num_vertices) - 1 if num_vertices < 64 else <uint64_t>0xFFFFFFFFFFFFFFFF
    c.start = <int*>malloc((num_vertices + 1) * sizeof(int))
    c.need = <uint64_t*>malloc(max(total, 1) * sizeof(uint64_t))
    c.cand = <uint64_t*>malloc(max(total, 1) * sizeof(uint64_t))
    out = []
    try:
        for t in range(num_vertices):
            c.start[t] = pos
            for need, cand in triggers[t]:
                c.need[pos] = need
                c.cand[pos] = cand
                pos += 1
        c.start[num_vertices] = pos
        _fam_walk(&c, 0, 0, out)
    finally:
        free(c.start)
        free(c.need)
        free(c.cand)
    out.sort()
    return out


# -- basis exchange ---------------------------------------------------------


def exchange_violation(bases):
    cdef list blist = list(bases)
    cdef int nb = len(blist)
    cdef int i, j, x, y, ok
    cdef uint32_t b1, b2, diff, ys, base, yy
    if nb == 0:
        return None
    top = max(blist).bit_length()
    if top > MAX_ELEMENTS:
        raise ValueError("ground set too large for the compiled exchange kernel")
    cdef uint32_t* arr = <uint32_t*>malloc(nb * sizeof(uint32_t))
    cdef uint8_t* member = <uint8_t*>calloc((<size_t>1) << top, 1)
    cdef int hit = 0, hi = 0, hj = 0, hx = 0
    try:
        for i in range(nb):
            arr[i] = blist[i]
            member[arr[i]] = 1
        with nogil:
            for i in range(nb):
                if hit:
                    break
                b1 = arr[i]
                for j in range(nb):
                    b2 = arr[j]
                    diff = b1 & ~b2
                    while diff and not hit:
                        x = _ctz(diff)
                        diff &= diff - 1
                        base = b1 ^ ((<uint32_t>1) << x)
                        ys = b2 & ~b1
                        ok = 0
                        while ys:
                            yy = ys & (~ys + 1)
                            ys ^= yy
                            if member[base | yy]:
                                ok = 1
                                break
                        if not ok:
                            hit = 1
                            hi = i
                            hj = j
                            hx = x
                    if hit:
                        break
        if hit:
            return (blist[hi], blist[hj], hx)
        return None
    finally:
        free(arr)
        free(member)
