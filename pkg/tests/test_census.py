import json
from fractions import Fraction

import pytest

import oracles
from matroidaut import census
from matroidaut.census import (
    CSV_HEADER,
    CensusRecord,
    LemmaReport,
    all_matroids,
    from_csv,
    full_census,
    rank_distribution,
    sparse_census,
    sparse_units,
    t_counts,
    t_upper_check,
    to_csv,
    totals_by_n,
    trend_report,
)
from matroidaut.errors import BudgetExceeded
from matroidaut.johnson import JohnsonParams, count_stable_sets

# Frozen [total, trivial, single_transposition, other] sums per n for the sparse census.
SPARSE_BY_N = {
    2: (7, 2, 5, 0),
    3: (12, 0, 6, 6),
    4: (24, 0, 0, 24),
    5: (68, 0, 0, 68),
    6: (441, 0, 0, 441),
    7: (11676, 0, 0, 11676),
}


def _by_n(records):
    out = {}
    for rec in records:
        t = out.get(rec.n, (0, 0, 0, 0))
        out[rec.n] = tuple(a + b for a, b in zip(t, (
            rec.total, rec.aut_trivial, rec.aut_single_transposition, rec.aut_other)))
    return out


def test_record_invariant():
    with pytest.raises(ValueError):
        CensusRecord("sparse_paving", 2, 1, 3, 1, 1, 0)


def test_sparse_census_totals():
    records = sparse_census(7)
    for rec in records:
        assert rec.total == count_stable_sets(JohnsonParams(rec.n, rec.r))
    by_n = _by_n(records)
    for n, want in SPARSE_BY_N.items():
        assert by_n[n] == want
    rec = {(r.n, r.r): r for r in records}
    assert rec[(4, 2)].total == 10 and rec[(2, 1)].total == 3


def test_sparse_census_independent_counter_n_le_6():
    by_n = totals_by_n(sparse_census(6))
    for n in range(0, 7):
        assert by_n[n] == sum(len(oracles.stable_sets(n, r)) for r in range(n + 1))


def test_sparse_classification_against_oracle_n_le_5():
    from matroidaut.johnson import iter_stable_sets
    records = {(r.n, r.r): r for r in sparse_census(5)}
    for n in range(1, 6):
        for r in range(n + 1):
            tally = {"trivial": 0, "single_transposition": 0, "other": 0}
            for s in iter_stable_sets(JohnsonParams(n, r)):
                verts = [frozenset(i + 1 for i in range(n) if x >> i & 1) for x in s]
                # Symmetries of the non-basis family are the symmetries of the matroid.
                tally[oracles.classify(n, verts)] += 1
            rec = records[(n, r)]
            assert (rec.aut_trivial, rec.aut_single_transposition, rec.aut_other) == (
                tally["trivial"], tally["single_transposition"], tally["other"])


def test_prefix_units_cover_everything():
    for n, r in [(6, 3), (7, 2)]:
        units = sparse_units(n, r, split=8)
        assert len(units) > 1
        tallies = [census._sparse_unit_tally(u) for u in units]
        assert sum(t[0] for t in tallies) == count_stable_sets(JohnsonParams(n, r))


def test_determinism_across_threads():
    one = to_csv(sparse_census(6, threads=1))
    two = to_csv(sparse_census(6, threads=2))
    assert one == two
    assert to_csv(full_census(4, threads=1)) == to_csv(full_census(4, threads=3))


def test_full_census_values():
    records = full_census(6)
    by = {(r.n, r.r): r.total for r in records}
    assert by[(1, 0)] == by[(1, 1)] == 1
    assert by[(2, 1)] == 3
    per_n = totals_by_n(records)
    assert [per_n[n] for n in range(7)] == [1, 2, 5, 16, 68, 406, 3807]
    assert all(per_n[n] <= per_n[n + 1] for n in range(6))
    for n in range(0, 5):
        for r in range(n + 1):
            assert by[(n, r)] == len(oracles.all_matroids(n, r))


def test_budgets():
    with pytest.raises(BudgetExceeded):
        sparse_census(9)
    with pytest.raises(BudgetExceeded):
        full_census(7)
    with pytest.raises(BudgetExceeded):
        t_upper_check(7)


def test_csv_format():
    text = to_csv(full_census(3) + sparse_census(3))
    lines = text.split("\n")
    assert lines[0] == CSV_HEADER
    assert text.endswith("\n") and "\r" not in text
    body = [line for line in lines[1:] if line]
    keys = [(x.split(",")[0], int(x.split(",")[1]), int(x.split(",")[2])) for x in body]
    assert keys == sorted(keys)
    assert from_csv(text) == sorted(full_census(3) + sparse_census(3),
                                    key=lambda r: (r.kind, r.n, r.r))


def test_cache_and_resume(tmp_path):
    fresh = to_csv(sparse_census(6))
    cached = to_csv(sparse_census(6, cache_dir=tmp_path))
    assert cached == fresh
    files = sorted(p.name for p in tmp_path.iterdir())
    assert "sparse_paving-n6-r3.json" in files and len(files) == sum(n + 1 for n in range(7))
    # Simulate an interrupted run: drop some entries, tamper with one, resume.
    (tmp_path / "sparse_paving-n6-r3.json").unlink()
    (tmp_path / "sparse_paving-n5-r2.json").unlink()
    assert to_csv(sparse_census(6, cache_dir=tmp_path)) == fresh
    # A cached record is trusted only when its code hash matches.
    path = tmp_path / "sparse_paving-n4-r2.json"
    data = json.loads(path.read_text())
    data["record"]["total"] = 11
    data["record"]["aut_other"] = 11
    path.write_text(json.dumps(data))
    assert to_csv(sparse_census(6, cache_dir=tmp_path)) != fresh
    data["code_hash"] = "stale"
    path.write_text(json.dumps(data))
    assert to_csv(sparse_census(6, cache_dir=tmp_path)) == fresh
    assert json.loads(path.read_text())["record"]["total"] == 10
    path.write_text("{corrupt")
    assert to_csv(sparse_census(6, cache_dir=tmp_path)) == fresh


def test_trend_report():
    rows = trend_report(sparse_census(7))
    row = {r.n: r for r in rows}
    assert row[4].asymmetric_fraction == 0
    assert row[2].single_transposition_fraction == Fraction(5, 7)
    text = census.format_trend(rows)
    assert text.splitlines()[0].startswith("n,total,asymmetric")


def test_t_upper_examples():
    counts = t_counts(4)
    assert all(counts[(0, pair)] == 0 for pair in [(1, 2), (3, 4)])
    for n in (4, 5, 6):
        rep = t_upper_check(n)
        assert rep.ok, rep.failures
    assert sum(t_counts(4).values()) == 12


def test_t_counts_group_equality():
    # t counts Aut(M) equal to <(e f)>, so each matroid is counted at most once.
    for n in (3, 4):
        total = sum(t_counts(n).values())
        single = sum(r.aut_single_transposition for r in full_census(n) if r.n == n)
        assert total == single


def test_rank_distribution():
    d = rank_distribution(4, beta=1)
    assert d.window == range(0, 5) and d.in_window == 1
    assert rank_distribution(4).window == range(1, 4)
    d = rank_distribution(8, 0.6)
    assert sum(d.fractions) == 1
    assert d.in_window >= d.out_window
    assert d.fractions[4] == Fraction(3852576, 4317280)
    d2 = rank_distribution(6, records=sparse_census(6))
    assert d2.fractions == rank_distribution(6).fractions
    with pytest.raises(ValueError):
        rank_distribution(7, records=sparse_census(6))


def test_lemma_report_format():
    rep = LemmaReport("x", "grid", checked=3, failures=["bad"], wall_time=1.5)
    text = rep.format()
    assert text.splitlines() == ["lemma_id: x", "grid: grid", "checked: 3", "failures: 1",
                                 "  - bad", "wall_time: 1.500s"]
    assert "wall_time" not in rep.format(timing=False)
    assert not rep.ok


@pytest.mark.parametrize("name", sorted(census.LEMMAS))
def test_each_lemma_small_grid(name):
    max_n = {"binomial": 16, "t-upper": 5, "reconstruct": 5}.get(name, 5)
    rep = census.LEMMAS[name](max_n, None)
    assert rep.checked > 0 and rep.failures == []


def test_all_matroids_out_of_range():
    assert all_matroids(3, 4) == ()
