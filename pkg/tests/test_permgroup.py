from itertools import combinations, permutations
from math import lcm

import pytest
from hypothesis import given
from hypothesis import strategies as st

from matroidaut.combinatorics import mask_of, popcount, r_subsets
from matroidaut.permgroup import (
    Permutation,
    SupportClass,
    all_permutations,
    apply_to_set,
    classify_support,
    compose,
    cycle_decomposition,
    fixed_r_sets,
    orbit_of_set,
    order,
    support,
    transpositions,
)


def P(text, n):
    return Permutation.parse(text, n)


@st.composite
def perms(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    return Permutation(draw(st.permutations(range(1, n + 1))))


def test_compose_examples():
    assert compose(P("(1 2)", 3), P("(1 2)", 3)).is_identity()
    assert compose(P("(1 2 3)", 3), P("(1 2 3)", 3)) == P("(1 3 2)", 3)
    p = P("(1 3)(2 4)", 5)
    assert compose(p, Permutation.identity(5)) == p


def test_compose_applies_right_factor_first():
    p, q = P("(1 2)", 3), P("(2 3)", 3)
    assert compose(p, q)(2) == p(q(2)) == 3
    assert compose(p, q)(1) == 2


def test_compose_mismatched_n():
    with pytest.raises(ValueError):
        compose(P("(1 2)", 2), P("(1 2)", 3))


@given(perms(6), st.data())
def test_group_laws(p, data):
    q = Permutation(data.draw(st.permutations(range(1, p.n + 1))))
    s = Permutation(data.draw(st.permutations(range(1, p.n + 1))))
    assert compose(compose(p, q), s) == compose(p, compose(q, s))
    assert compose(p, p.inverse()).is_identity()
    assert p * Permutation.identity(p.n) == p


@pytest.mark.parametrize("text,n,want", [("(1 2 3)(4 5)", 5, 6), ("()", 4, 1), ("(1 2)", 2, 2)])
def test_order_examples(text, n, want):
    assert order(P(text, n)) == want


def test_support_examples():
    assert support(P("(1 2 3)(4 5)", 7)) == mask_of([1, 2, 3, 4, 5])
    assert support(Permutation.identity(7)) == 0
    assert support(P("(2 7)", 7)) == mask_of([2, 7])


def test_cycle_decomposition_examples():
    dec = cycle_decomposition(P("(4 5)(1 2 3)", 5))
    assert dec.cycles == ((1, 2, 3), (4, 5))
    dec = cycle_decomposition(Permutation.identity(3))
    assert dec.cycles == () and dec.moved == 0 and dec.cycle_count == 0
    dec = cycle_decomposition(P("(1 2)", 2))
    assert dec.cycles == ((1, 2),) and dec.moved == 2 and dec.cycle_count == 1


def test_canonical_rotation():
    assert str(P("(3 1 2)(5 4)", 5)) == "(1 2 3)(4 5)"
    assert str(Permutation.identity(3)) == "()"


def test_parse_is_whitespace_insensitive():
    assert P(" ( 1  2 ) (3 4 5) ", 5) == P("(1 2)(3 4 5)", 5)


@pytest.mark.parametrize("bad", ["(1 2)(2 3)", "(1)", "(1 9)", "1 2", "(1 2", "(a b)", ""])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        P(bad, 4)


def test_invalid_image():
    with pytest.raises(ValueError):
        Permutation([1, 1, 2])


def test_apply_to_set_examples():
    assert apply_to_set(P("(1 2)", 3), mask_of([1, 3])) == mask_of([2, 3])
    x = mask_of([2, 3])
    assert apply_to_set(Permutation.identity(3), x) == x
    assert apply_to_set(P("(1 2 3)", 3), mask_of([1, 2, 3])) == mask_of([1, 2, 3])
    with pytest.raises(ValueError):
        apply_to_set(P("(1 2)", 2), mask_of([3]))


def test_orbit_examples():
    assert orbit_of_set(P("(1 2 3)", 3), mask_of([1, 2])) == [
        mask_of([1, 2]), mask_of([2, 3]), mask_of([1, 3])]
    x = mask_of([1, 2])
    assert orbit_of_set(P("(1 2)", 4), x) == [x]
    assert orbit_of_set(P("(1 2)(3 4)", 4), mask_of([1, 3])) == [mask_of([1, 3]), mask_of([2, 4])]


@given(perms(8), st.data())
def test_orbit_size_divides_order(p, data):
    x = data.draw(st.integers(0, (1 << p.n) - 1))
    orb = orbit_of_set(p, x)
    assert order(p) % len(orb) == 0
    assert len(set(orb)) == len(orb)
    assert all(popcount(y) == popcount(x) for y in orb)


def test_fixed_r_sets_examples():
    assert fixed_r_sets(P("(1 2)", 4), 2) == [mask_of([1, 2]), mask_of([3, 4])]
    assert fixed_r_sets(Permutation.identity(5), 2) == r_subsets(5, 2)
    assert fixed_r_sets(P("(1 2 3)", 3), 2) == []


def test_fixed_r_sets_brute_force_n_le_6():
    for n in range(0, 7):
        for p in all_permutations(n):
            for r in range(n + 1):
                brute = [x for x in r_subsets(n, r) if apply_to_set(p, x) == x]
                assert fixed_r_sets(p, r) == brute, (p, r)


def test_decomposition_exhaustive_n_le_8():
    for n in range(0, 9):
        for img in permutations(range(1, n + 1)):
            p = Permutation(img)
            dec = cycle_decomposition(p)
            assert sum(dec.lengths) == dec.moved == popcount(support(p))
            assert dec.cycle_count <= dec.moved // 2
            assert all(len(c) >= 2 and c[0] == min(c) for c in dec.cycles)
            assert [c[0] for c in dec.cycles] == sorted(c[0] for c in dec.cycles)
            flat = [e for c in dec.cycles for e in c]
            assert len(flat) == len(set(flat))
            assert Permutation.from_cycles(dec.cycles, n) == p
            assert order(p) == lcm(*dec.lengths) if dec.lengths else order(p) == 1


@given(perms(8))
def test_string_round_trip(p):
    assert Permutation.parse(str(p), p.n) == p


def test_classify_support():
    assert classify_support(P("(1 2)", 3)) is SupportClass.TRANSPOSITION
    assert classify_support(P("(1 2 3)", 3)) is SupportClass.SUPPORT_GE_3
    assert classify_support(Permutation.identity(3)) is SupportClass.IDENTITY
    assert classify_support(P("(1 2)(3 4)", 4)) is SupportClass.SUPPORT_GE_3


def test_enumerators():
    assert len(list(all_permutations(4))) == 24
    assert list(transpositions(4)) == list(combinations(range(1, 5), 2))
