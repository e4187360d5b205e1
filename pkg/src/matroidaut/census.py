"""Exhaustive censuses by automorphism class, and the finite lemma checks.

Censuses are split into work units by ``(n, r, search prefix)``; each unit
returns an immutable tally and tallies are summed, so the result does not
depend on how many worker processes ran or in which order they finished.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from pathlib import Path

from mpmath import mpf

from . import _kernels
from .combinatorics import (
    binomial,
    check_central_bounds,
    check_compare_bound,
    deviation_ratio,
    f_kappa,
    format_subset,
    rank_window,
    r_subsets,
)
from .errors import BudgetExceeded, MatroidAutError
from .johnson import (
    JohnsonParams,
    _walk_stable,
    check_box_product_iso,
    check_kbound,
    check_pblock_bound,
    check_product_identity,
    count_stable_sets,
    iter_stable_sets,
    johnson_graph,
)
from .matroid import (
    Matroid,
    contract_pair,
    delete_pair,
    is_automorphism,
    reconstruct_from_minors,
    uw_split,
)
from .permgroup import Permutation, all_permutations, transpositions

log = logging.getLogger(__name__)

SPARSE = "sparse_paving"
ALL = "all_matroids"
SPARSE_BUDGET = 8
FULL_BUDGET = 6
DEFAULT_BETA = 0.6
CSV_HEADER = "kind,n,r,total,aut_trivial,aut_single_transposition,aut_other"


@dataclass(frozen=True)
class CensusRecord:
    kind: str
    n: int
    r: int
    total: int
    aut_trivial: int
    aut_single_transposition: int
    aut_other: int

    def __post_init__(self):
        if self.aut_trivial + self.aut_single_transposition + self.aut_other != self.total:
            raise ValueError(f"class counts do not sum to the total in {self}")

    def csv_row(self) -> str:
        return (f"{self.kind},{self.n},{self.r},{self.total},{self.aut_trivial},"
                f"{self.aut_single_transposition},{self.aut_other}")


def to_csv(records) -> str:
    rows = sorted(records, key=lambda rec: (rec.kind, rec.n, rec.r))
    return "\n".join([CSV_HEADER] + [rec.csv_row() for rec in rows]) + "\n"


def from_csv(text: str) -> list[CensusRecord]:
    lines = text.splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("unexpected census CSV header")
    out = []
    for line in lines[1:]:
        kind, *nums = line.split(",")
        out.append(CensusRecord(kind, *map(int, nums)))
    return out


# -- cache -------------------------------------------------------------------

_HASHED_SOURCES = (
    "_pykernels.py", "_ckernels.pyx", "combinatorics.py", "permgroup.py",
    "johnson.py", "matroid.py", "census.py",
)


@lru_cache(maxsize=1)
def code_hash() -> str:
    h = hashlib.sha256()
    here = Path(__file__).parent
    for name in _HASHED_SOURCES:
        path = here / name
        if path.exists():
            h.update(name.encode())
            h.update(path.read_bytes())
    return h.hexdigest()[:16]


def _cache_path(cache_dir, kind, n, r) -> Path:
    return Path(cache_dir) / f"{kind}-n{n}-r{r}.json"


def _cache_load(cache_dir, kind, n, r):
    if cache_dir is None:
        return None
    path = _cache_path(cache_dir, kind, n, r)
    try:
        data = json.loads(path.read_text())
    except (OSError, ValueError):
        return None
    if data.get("code_hash") != code_hash():
        log.info("stale cache entry %s", path)
        return None
    try:
        return CensusRecord(**data["record"])
    except (KeyError, TypeError, ValueError):
        return None


def _cache_store(cache_dir, record: CensusRecord):
    if cache_dir is None:
        return
    path = _cache_path(cache_dir, record.kind, record.n, record.r)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps({"code_hash": code_hash(), "record": asdict(record)}, sort_keys=True))
    os.replace(tmp, path)


# -- work units --------------------------------------------------------------


def sparse_units(n: int, r: int, split: int = 0):
    """Partition the stable sets of J(n, r) by their trace on the first ``split`` vertices."""
    g = johnson_graph(n, r)
    d = min(split, len(g.vertices))
    head = (1 << d) - 1
    tail = g.full & ~head
    return [(n, r, chosen, tail & ~g.neighbourhood(chosen))
            for chosen in _walk_stable(g.adj, head)]


def _sparse_unit_tally(unit):
    n, r, chosen, cand = unit
    g = johnson_graph(n, r)
    return tuple(_kernels.sparse_census_tally(n, g.vertices, g.adj, chosen, cand))


@lru_cache(maxsize=None)
def exchange_triggers(n: int, r: int):
    """Basis-exchange constraints keyed by the last r-set they mention.

    Each ordered pair (A1, A2) of r-sets and x in A1 - A2 yields a constraint:
    if A1 and A2 are bases, some A1 - x + y with y in A2 - A1 must be one.
    """
    vertices = r_subsets(n, r)
    index = {v: i for i, v in enumerate(vertices)}
    triggers = [set() for _ in vertices]
    for a1 in vertices:
        for a2 in vertices:
            diff = a1 & ~a2
            if not diff:
                continue
            ys = [1 << y for y in range(n) if (a2 & ~a1) >> y & 1]
            for x in range(n):
                if not diff >> x & 1:
                    continue
                cands = [index[(a1 ^ (1 << x)) | y] for y in ys]
                need = (1 << index[a1]) | (1 << index[a2])
                trigger = max([index[a1], index[a2]] + cands)
                triggers[trigger].add((need, sum(1 << c for c in set(cands))))
    return tuple(tuple(sorted(t)) for t in triggers)


@lru_cache(maxsize=None)
def all_matroids(n: int, r: int) -> tuple[Matroid, ...]:
    """Every rank-r matroid on [n], found by exchange-constrained search."""
    if not 0 <= r <= n:
        return ()
    vertices = r_subsets(n, r)
    fams = _kernels.matroid_families(len(vertices), exchange_triggers(n, r))
    return tuple(
        Matroid(n, r, tuple(v for i, v in enumerate(vertices) if fam >> i & 1))
        for fam in fams
    )


def _full_unit_tally(unit):
    n, r = unit
    tally = [0, 0, 0, 0]
    for m in all_matroids(n, r):
        tally[0] += 1
        tally[1 + _kernels.classify_family(n, m.nonbases)] += 1
    return tuple(tally)


def _run_units(fn, units, threads):
    if threads <= 1 or len(units) <= 1:
        return [fn(u) for u in units]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, units, chunksize=max(1, len(units) // (4 * threads))))


def _merge(tallies):
    total = [0, 0, 0, 0]
    for t in tallies:
        for i in range(4):
            total[i] += t[i]
    return total


def _census(kind, n_max, budget, threads, cache_dir, unit_builder, unit_fn):
    if n_max > budget:
        raise BudgetExceeded(f"{kind} census up to n={n_max} exceeds the budget n<={budget}")
    records = []
    for n in range(0, n_max + 1):
        for r in range(0, n + 1):
            rec = _cache_load(cache_dir, kind, n, r)
            if rec is None:
                t0 = time.perf_counter()
                tally = _merge(_run_units(unit_fn, unit_builder(n, r), threads))
                rec = CensusRecord(kind, n, r, *tally)
                _cache_store(cache_dir, rec)
                log.info("%s n=%d r=%d total=%d (%.2fs)", kind, n, r, rec.total,
                         time.perf_counter() - t0)
            records.append(rec)
    return records


def sparse_census(n_max: int, threads: int = 1, cache_dir=None, budget: int = SPARSE_BUDGET):
    """Sparse paving matroids on [n], n <= n_max, tallied by automorphism class.

    Each stable set of J(n, r) is read as the non-bases of a sparse paving
    matroid and classified in the compiled (or fallback) kernel.
    """
    split = 10 if threads > 1 else 0
    return _census(SPARSE, n_max, budget, threads, cache_dir,
                   lambda n, r: sparse_units(n, r, split), _sparse_unit_tally)


def full_census(n_max: int, threads: int = 1, cache_dir=None, budget: int = FULL_BUDGET):
    """All matroids on [n], n <= n_max, tallied by automorphism class."""
    return _census(ALL, n_max, budget, threads, cache_dir,
                   lambda n, r: [(n, r)], _full_unit_tally)


def totals_by_n(records):
    out = {}
    for rec in records:
        out[rec.n] = out.get(rec.n, 0) + rec.total
    return out


# -- reports -----------------------------------------------------------------


@dataclass(frozen=True)
class TrendRow:
    n: int
    total: int
    asymmetric: int
    single_transposition: int

    @property
    def asymmetric_fraction(self) -> Fraction:
        return Fraction(self.asymmetric, self.total)

    @property
    def single_transposition_fraction(self) -> Fraction:
        return Fraction(self.single_transposition, self.total)


def trend_report(records) -> list[TrendRow]:
    rows = {}
    for rec in records:
        t, a, s = rows.get(rec.n, (0, 0, 0))
        rows[rec.n] = (t + rec.total, a + rec.aut_trivial, s + rec.aut_single_transposition)
    return [TrendRow(n, *rows[n]) for n in sorted(rows)]


def format_trend(rows) -> str:
    lines = ["n,total,asymmetric,asymmetric_fraction,single_transposition,single_transposition_fraction"]
    for row in rows:
        lines.append(f"{row.n},{row.total},{row.asymmetric},{float(row.asymmetric_fraction):.6f},"
                     f"{row.single_transposition},{float(row.single_transposition_fraction):.6f}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class RankDistribution:
    n: int
    beta: float
    window: range
    fractions: tuple[Fraction, ...]

    @property
    def in_window(self) -> Fraction:
        return sum((self.fractions[r] for r in self.window), Fraction(0))

    @property
    def out_window(self) -> Fraction:
        return 1 - self.in_window


def rank_distribution(n: int, beta=DEFAULT_BETA, records=None) -> RankDistribution:
    """Fractions s(n, r) / s(n) and the mass inside the rank window."""
    if records is not None:
        counts = {rec.r: rec.total for rec in records if rec.kind == SPARSE and rec.n == n}
        if len(counts) != n + 1:
            raise ValueError(f"records do not cover every rank at n={n}")
        counts = [counts[r] for r in range(n + 1)]
    else:
        counts = [count_stable_sets(JohnsonParams(n, r)) for r in range(n + 1)]
    total = sum(counts)
    return RankDistribution(n, beta, rank_window(n, beta), tuple(Fraction(c, total) for c in counts))


# -- lemma reports -----------------------------------------------------------


@dataclass
class LemmaReport:
    lemma_id: str
    grid: str
    checked: int = 0
    failures: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures and self.checked > 0

    def format(self, timing: bool = True) -> str:
        lines = [
            f"lemma_id: {self.lemma_id}",
            f"grid: {self.grid}",
            f"checked: {self.checked}",
            f"failures: {len(self.failures)}",
        ]
        lines += [f"  - {msg}" for msg in self.failures]
        if timing:
            lines.append(f"wall_time: {self.wall_time:.3f}s")
        return "\n".join(lines) + "\n"


class _Timer:
    def __init__(self, report):
        self.report = report

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self.report

    def __exit__(self, *exc):
        self.report.wall_time = time.perf_counter() - self.t0
        return False


def verify_product_identity(max_n: int = 7) -> LemmaReport:
    rep = LemmaReport("product-identity", f"2<=n<={max_n}, 0<=r<=n, all transpositions")
    with _Timer(rep):
        for n in range(2, max_n + 1):
            for r in range(n + 1):
                for e, f in transpositions(n):
                    res = check_product_identity(JohnsonParams(n, r), e, f)
                    rep.checked += 1
                    if not res.ok:
                        rep.failures.append(f"J({n},{r}) ({e} {f}): {res.lhs} != {res.rhs}")
    return rep


def verify_kbound(max_n: int = 6, ks=(0, 1, 2)) -> LemmaReport:
    rep = LemmaReport("kbound", f"2<=n<={max_n}, 0<=r<=n, all transpositions, k in {list(ks)}")
    with _Timer(rep):
        for n in range(2, max_n + 1):
            for r in range(n + 1):
                for e, f in transpositions(n):
                    for k in ks:
                        res = check_kbound(JohnsonParams(n, r), e, f, k)
                        rep.checked += 1
                        if not res.ok:
                            rep.failures.append(
                                f"J({n},{r}) ({e} {f}) k={k}: {res.lhs} > {res.rhs}")
    return rep


def verify_pblocks(max_n: int = 6) -> LemmaReport:
    rep = LemmaReport("pblocks", f"2<=n<={max_n}, all non-identity permutations, 0<=r<=n")
    with _Timer(rep):
        for n in range(2, max_n + 1):
            for p in all_permutations(n):
                if p.is_identity():
                    continue
                for r in range(n + 1):
                    res = check_pblock_bound(JohnsonParams(n, r), p)
                    rep.checked += 1
                    if not res.ok:
                        rep.failures.append(f"J({n},{r}) {p}: {res.lhs} > {res.rhs}")
    return rep


def verify_box_iso(max_n: int = 7) -> LemmaReport:
    rep = LemmaReport("box-iso", f"2<=n<={max_n}, 1<=r<=n-1, all transpositions")
    with _Timer(rep):
        for n in range(2, max_n + 1):
            for r in range(1, n):
                for e, f in transpositions(n):
                    rep.checked += 1
                    if not check_box_product_iso(JohnsonParams(n, r), e, f):
                        rep.failures.append(f"J({n},{r}) ({e} {f})")
    return rep


def verify_w_stable(max_n: int = 6) -> LemmaReport:
    rep = LemmaReport("w-stable", f"all matroids with n<={max_n}")
    with _Timer(rep):
        for n in range(0, max_n + 1):
            for r in range(n + 1):
                for m in all_matroids(n, r):
                    w = uw_split(m).w_part
                    rep.checked += 1
                    for x, y in combinations(w, 2):
                        if bin(x ^ y).count("1") < 4:
                            rep.failures.append(
                                f"{m}: {format_subset(x)} and {format_subset(y)} adjacent")
                            break
    return rep


def _round_trip(rep, m: Matroid):
    for e, f in transpositions(m.n):
        if not is_automorphism(m, Permutation.transposition(e, f, m.n)):
            continue
        rep.checked += 1
        try:
            back = reconstruct_from_minors(delete_pair(m, e, f), contract_pair(m, e, f),
                                           m.n, m.r, e, f)
        except MatroidAutError as exc:
            rep.failures.append(f"{m} ({e} {f}): {exc}")
            continue
        if back != m:
            rep.failures.append(f"{m} ({e} {f}): reconstructed {back}")


def verify_reconstruct(max_n_full: int = 6, max_n_sparse: int = 7) -> LemmaReport:
    rep = LemmaReport(
        "reconstruct",
        f"all matroids n<={max_n_full}; sparse paving n<={max_n_sparse}; "
        "every transposition automorphism",
    )
    with _Timer(rep):
        for n in range(2, max_n_full + 1):
            for r in range(n + 1):
                for m in all_matroids(n, r):
                    _round_trip(rep, m)
        for n in range(max(2, max_n_full + 1), max_n_sparse + 1):
            for r in range(n + 1):
                for stable in iter_stable_sets(JohnsonParams(n, r)):
                    if len(stable) == binomial(n, r):
                        continue
                    _round_trip(rep, Matroid(n, r, stable.members))
    return rep


def verify_binomial(max_n: int = 64) -> LemmaReport:
    rep = LemmaReport(
        "binomial",
        f"central bounds 1<=n<={max_n}; comparison 2<=n<={max_n}, 0<=m<n; "
        f"Pascal n<={max_n}; deviation ratio n={max_n}, |k|<=4",
    )
    with _Timer(rep):
        for n in range(1, max_n + 1):
            res = check_central_bounds(n)
            rep.checked += 1
            if not res.ok:
                rep.failures.append(f"central bounds n={n}: lower={res.lower_ok} upper={res.upper_ok}")
            for k in range(1, n):
                rep.checked += 1
                if binomial(n, k) != binomial(n - 1, k - 1) + binomial(n - 1, k):
                    rep.failures.append(f"Pascal n={n} k={k}")
        for n in range(2, max_n + 1):
            for m in range(n):
                rep.checked += 1
                if not check_compare_bound(n, m).ok:
                    rep.failures.append(f"comparison n={n} m={m}")
        for k in range(-4, 5):
            rep.checked += 1
            ratio = deviation_ratio(max_n, k)
            if not 0.9 <= ratio <= 1.1:
                rep.failures.append(f"deviation ratio n={max_n} k={k}: {float(ratio):.6f}")
    return rep


def verify_f_kappa() -> LemmaReport:
    rep = LemmaReport("f-kappa", "f(1/5) < 1, f(1/13) < 0.48, log base 2")
    with _Timer(rep):
        for denom, bound in ((5, 1.0), (13, 0.48)):
            rep.checked += 1
            value = f_kappa(mpf(1) / denom)
            if not value < bound:
                rep.failures.append(f"f(1/{denom}) = {float(value):.6f} not below {bound}")
    return rep


def t_counts(n: int) -> dict:
    """t(n, r; (e f)) for every r and transposition: matroids with Aut = <(e f)>."""
    counts = {(r, pair): 0 for r in range(n + 1) for pair in transpositions(n)}
    for r in range(n + 1):
        for m in all_matroids(n, r):
            auts = _kernels.automorphisms(n, m.nonbases, 3)
            if len(auts) != 2:
                continue
            moved = [i + 1 for i, x in enumerate(auts[1]) if x != i]
            if len(moved) == 2:
                counts[(r, tuple(moved))] += 1
    return counts


def t_upper_check(n: int) -> LemmaReport:
    """t(n, r; pi) <= m(n-2, r-2) * m(n-2, r) + 3 for each r and transposition."""
    if n > FULL_BUDGET:
        raise BudgetExceeded(f"t-upper needs the full census at n={n} > {FULL_BUDGET}")
    rep = LemmaReport("t-upper", f"n={n}, 0<=r<=n, all transpositions")
    with _Timer(rep):
        small = {rec.r: rec.total for rec in full_census(n - 2) if rec.n == n - 2}

        def m_small(r):
            return small.get(r, 0)

        for (r, (e, f)), t in sorted(t_counts(n).items()):
            rep.checked += 1
            bound = m_small(r - 2) * m_small(r) + 3
            if t > bound:
                rep.failures.append(f"r={r} ({e} {f}): t={t} > {bound}")
    return rep


def verify_t_upper(max_n: int = 6) -> LemmaReport:
    reports = [t_upper_check(n) for n in range(4, max_n + 1)]
    rep = LemmaReport("t-upper", f"4<=n<={max_n}, 0<=r<=n, all transpositions")
    for sub in reports:
        rep.checked += sub.checked
        rep.failures += sub.failures
        rep.wall_time += sub.wall_time
    return rep


LEMMAS = {
    "product-identity": lambda max_n, ks: verify_product_identity(max_n or 7),
    "kbound": lambda max_n, ks: verify_kbound(max_n or 6, ks or (0, 1, 2)),
    "pblocks": lambda max_n, ks: verify_pblocks(max_n or 6),
    "box-iso": lambda max_n, ks: verify_box_iso(max_n or 7),
    "w-stable": lambda max_n, ks: verify_w_stable(max_n or 6),
    "reconstruct": lambda max_n, ks: verify_reconstruct(min(max_n or 6, FULL_BUDGET), max_n or 7),
    "binomial": lambda max_n, ks: verify_binomial(max_n or 64),
    "t-upper": lambda max_n, ks: verify_t_upper(max_n or 6),
    "f-kappa": lambda max_n, ks: verify_f_kappa(),
}


def verify_all(n_max_sparse: int = 7, n_max_full: int = 6, k_list=(0, 1, 2)) -> list[LemmaReport]:
    return [
        verify_product_identity(n_max_sparse),
        verify_kbound(n_max_full, k_list),
        verify_pblocks(n_max_full),
        verify_box_iso(n_max_sparse),
        verify_w_stable(n_max_full),
        verify_reconstruct(n_max_full, n_max_sparse),
        verify_binomial(64),
        verify_t_upper(n_max_full),
        verify_f_kappa(),
    ]
