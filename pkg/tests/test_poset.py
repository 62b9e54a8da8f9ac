import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from gluenerve.errors import CycleDetected, DuplicateElement, InvalidSquare, NotComparable, SizeBudgetExceeded, UnknownElement
from gluenerve.poset import (
    Poset,
    chain,
    factor_exact_pullbacks,
    factorization_suite,
    grid,
    interval,
    is_distributive,
    is_exact_square,
    is_pullback_in_poset,
    is_pushout_in_poset,
    lattice_ops,
    lattices,
    posets_up_to_iso,
    random_poset,
    upset_lattice,
    upsets,
)


def closure(elements, pairs):
    rel = {(x, x) for x in elements} | set(pairs)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), repeat=2):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    return rel


def brute_upsets(P):
    E = P.elements
    out = []
    for r in range(len(E) + 1):
        for S in itertools.combinations(E, r):
            S = set(S)
            if all(y in S for x in S for y in E if P.leq(x, y)):
                out.append(frozenset(S))
    return out


@st.composite
def dags(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=12))
    return n, [(a, b) for a, b in pairs if a < b]


@given(dags())
@settings(max_examples=60, deadline=None)
def test_closure_matches_fixpoint(data):
    n, pairs = data
    P = Poset(range(n), pairs)
    assert P.relation() == closure(range(n), pairs)


@given(dags(6))
@settings(max_examples=40, deadline=None)
def test_upsets_match_subset_filter(data):
    n, pairs = data
    P = Poset(range(n), pairs)
    assert set(upsets(P, include_empty=True)) == set(brute_upsets(P))


@given(dags(6))
@settings(max_examples=40, deadline=None)
def test_meet_join_match_bounds(data):
    n, pairs = data
    P = Poset(range(n), pairs)
    for x, y in itertools.product(range(n), repeat=2):
        lower = [z for z in range(n) if P.leq(z, x) and P.leq(z, y)]
        greatest = [z for z in lower if all(P.leq(w, z) for w in lower)]
        assert P.meet(x, y) == (greatest[0] if greatest else None)
        upper = [z for z in range(n) if P.leq(x, z) and P.leq(y, z)]
        least = [z for z in upper if all(P.leq(z, w) for w in upper)]
        assert P.join(x, y) == (least[0] if least else None)


def test_cycle_rejected():
    with pytest.raises(CycleDetected) as e:
        Poset("abc", [("a", "b"), ("b", "c"), ("c", "a")])
    assert set(e.value.witness) <= set("abc")


def test_bad_input():
    with pytest.raises(DuplicateElement):
        Poset(["a", "a"])
    with pytest.raises(UnknownElement):
        Poset(["a"], [("a", "b")])
    with pytest.raises(UnknownElement):
        chain(2).leq(0, 9)


def test_singleton_and_chain_covers():
    assert Poset(["x"]).covers() == []
    assert chain(3).covers() == [(0, 1), (1, 2), (2, 3)]


def test_grid_is_distributive_lattice():
    G = grid(1)
    assert G.is_lattice() and is_distributive(G)
    ops = lattice_ops(G, (0, 1), (1, 0), check_distributive=True)
    assert ops.meet == (0, 0) and ops.join == (1, 1) and ops.distributive_witness


def test_n5_and_m3_not_distributive():
    N5 = Poset("0abc1", [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")])
    M3 = Poset("0abc1", [("0", x) for x in "abc"] + [(x, "1") for x in "abc"])
    assert N5.is_lattice() and M3.is_lattice()
    assert not is_distributive(N5) and not is_distributive(M3)


def test_enumeration_counts():
    assert [len(posets_up_to_iso(k)) for k in range(7)] == [1, 1, 2, 5, 16, 63, 318]
    assert [len(lattices(n)) for n in range(1, 9)] == [1, 1, 1, 2, 5, 15, 53, 222]
    assert all(L.is_lattice() for L in lattices(6))


def test_interval_and_upsets_budget():
    I = interval(chain(4), 1, 3)
    assert I.elements == (1, 2, 3)
    assert len(interval(chain(4), 3, 1)) == 0
    with pytest.raises(SizeBudgetExceeded):
        upsets(chain(30))


def test_upset_lattice_embedding_is_order_embedding():
    U = upset_lattice(grid(1))
    assert len(U.lattice) == 5
    for x, y in itertools.product(grid(1).elements, repeat=2):
        assert grid(1).leq(x, y) == U.lattice.leq(U(x), U(y))


def test_exact_squares_in_grid():
    G = grid(1)
    assert is_exact_square(G, ((0, 0), (0, 1), (1, 0), (1, 1)))
    degenerate = ((0, 0), (0, 0), (0, 0), (1, 1))
    assert is_pullback_in_poset(G, degenerate) and not is_pushout_in_poset(G, degenerate)
    with pytest.raises(InvalidSquare):
        is_exact_square(G, ((1, 1), (0, 1), (1, 0), (0, 0)))


def test_factorization_single_step():
    P = chain(1)
    steps = factor_exact_pullbacks(P, {0, 1}, {1})
    assert len(steps) == 1 and steps[0].removed == 0


def test_factorization_identity_and_errors():
    P = chain(2)
    assert factor_exact_pullbacks(P, {1, 2}, {1, 2}) == []
    with pytest.raises(NotComparable):
        factor_exact_pullbacks(P, {2}, {1, 2})
    with pytest.raises(InvalidSquare):
        factor_exact_pullbacks(P, {0}, set())


def test_factorization_squares_exact_on_random_posets():
    checked, bad = factorization_suite(count=30, seed=7)
    assert checked == 150 and bad == []


def test_random_poset_is_seeded():
    a = random_poset(6, 0.4, random.Random(3))
    b = random_poset(6, 0.4, random.Random(3))
    assert a == b
