from math import e, log2

import pytest
from hypothesis import given
from hypothesis import strategies as st

from matroidaut.combinatorics import (
    KappaProfile,
    SubsetMask,
    binomial,
    check_central_bounds,
    check_compare_bound,
    deviation_ratio,
    elements_of,
    f_kappa,
    format_subset,
    mask_of,
    popcount,
    r_subsets,
    rank_window,
)


@pytest.mark.parametrize("n,k,want", [(4, 2, 6), (7, 0, 1), (5, -1, 0), (5, 6, 0), (0, 0, 1)])
def test_binomial_examples(n, k, want):
    assert binomial(n, k) == want


def test_binomial_rejects_negative_n():
    with pytest.raises(ValueError):
        binomial(-1, 0)


def test_pascal_rule_up_to_64():
    for n in range(1, 65):
        for k in range(1, n):
            assert binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k)


def test_masks_round_trip():
    assert mask_of([1, 3]) == 0b101
    assert elements_of(0b101) == (1, 3)
    assert format_subset(0b101) == "{1,3}"
    assert format_subset(0) == "{}"
    with pytest.raises(ValueError):
        mask_of([4], 3)


def test_subset_mask_invariants():
    s = SubsetMask.from_elements([2, 5], 5)
    assert s.size == popcount(s.bits) == 2
    assert s.elements == (2, 5)
    with pytest.raises(ValueError):
        SubsetMask(0b1000, 3)


@given(st.integers(0, 10), st.integers(-1, 11))
def test_r_subsets_counts_and_order(n, r):
    subs = r_subsets(n, r)
    assert len(subs) == binomial(n, r)
    assert subs == sorted(set(subs))
    assert all(popcount(x) == r and x >> n == 0 for x in subs)


def test_central_bounds_examples():
    rep = check_central_bounds(2)
    assert rep.ok and rep.central == 2
    assert float(rep.upper.rhs) == pytest.approx(2.25676, abs=1e-5)
    rep = check_central_bounds(1)
    assert rep.ok and rep.lower.lhs == 0
    rep = check_central_bounds(5)
    assert rep.ok and rep.central == 10
    assert float(rep.upper.rhs) == pytest.approx(11.41839, abs=1e-5)


def test_central_bounds_grid():
    for n in range(1, 65):
        rep = check_central_bounds(n)
        assert rep.lower_ok and rep.upper_ok, n


def test_compare_bound_examples():
    rep = check_compare_bound(4, 2)
    assert rep.ok and rep.lhs == 2 and float(rep.rhs) == pytest.approx(2.8284, abs=1e-4)
    rep = check_compare_bound(3, 1)
    assert rep.ok and rep.lhs == 2 and float(rep.rhs) == pytest.approx(2.7557, abs=1e-4)
    rep = check_compare_bound(5, 0)
    assert rep.ok and float(rep.rhs) == pytest.approx(10 * 5 / 4)


def test_compare_bound_grid_and_domain():
    for n in range(2, 65):
        for m in range(n):
            assert check_compare_bound(n, m).ok, (n, m)
    with pytest.raises(ValueError):
        check_compare_bound(4, 4)
    with pytest.raises(ValueError):
        check_compare_bound(1, 0)


def test_deviation_ratio():
    # k = 0 reduces to the central coefficient over the upper bound of the central estimate.
    rep = check_central_bounds(64)
    assert float(deviation_ratio(64, 0)) == pytest.approx(float(rep.central / rep.upper.rhs), rel=1e-12)
    assert 0.95 <= deviation_ratio(64, 1) <= 1.05
    for k in range(-4, 5):
        assert 0.90 <= deviation_ratio(64, k) <= 1.10
    # Frozen from a 200-bit evaluation.
    assert float(deviation_ratio(64, 3)) == pytest.approx(1.00005, abs=1e-5)
    with pytest.raises(ValueError):
        deviation_ratio(4, 3)


def test_f_kappa_values():
    assert f_kappa(0.2) < 1
    assert f_kappa(1 / 13) < 0.48
    assert float(f_kappa(0.2)) == pytest.approx(0.952924627, abs=1e-9)
    assert float(f_kappa(1 / 13)) == pytest.approx(0.472548828, abs=1e-9)
    assert float(f_kappa(0.3)) == pytest.approx(0.3 * log2(2 * e / 0.3), rel=1e-12)
    for bad in (0, -1):
        with pytest.raises(ValueError):
            f_kappa(bad)


@given(st.floats(0.001, 5.43))
def test_f_kappa_positive_below_2e(kappa):
    assert f_kappa(kappa) > 0


@given(st.floats(0.001, 2.0), st.floats(0.001, 2.0))
def test_f_kappa_increasing_up_to_2(a, b):
    # The derivative is log2(2 / kappa), so f peaks at kappa = 2, not at 2e.
    lo, hi = sorted((a, b))
    if hi - lo > 1e-9:
        assert f_kappa(lo) < f_kappa(hi)


def test_f_kappa_decreases_past_2():
    assert f_kappa(2) > f_kappa(3) > f_kappa(5)


def test_kappa_profile():
    prof = KappaProfile.of(0.2)
    assert prof.f_value == f_kappa(0.2)


@pytest.mark.parametrize("n,beta,lo,hi", [(16, 1, 4, 12), (4, 1, 0, 4), (100, 1, 40, 60)])
def test_rank_window(n, beta, lo, hi):
    w = rank_window(n, beta)
    assert (w.start, w.stop - 1) == (lo, hi)


def test_rank_window_rejects_nonpositive_beta():
    with pytest.raises(ValueError):
        rank_window(4, 0)
