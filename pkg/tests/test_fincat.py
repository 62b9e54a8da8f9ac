import itertools

import pytest

from gluenerve.errors import HypothesisFailed, IllTypedComposite, MissingIdentity, MissingPullback
from gluenerve.fincat import (
    EdgeClass,
    FinSetCategory,
    Morphism,
    PosetCategory,
    Square,
    TableCategory,
    check_admissible,
    check_cofiltered,
    check_overcategory_limits,
    diagonal,
    truncation_level,
    validate_category,
)
from gluenerve.poset import Poset, chain, grid, lattices


def finset(max_size):
    return FinSetCategory({k: tuple(range(k)) for k in range(max_size + 1)})


def N_poset():
    return Poset("abcd", [("a", "c"), ("b", "c"), ("b", "d")])


def test_finset_axioms():
    finset(2).check_axioms()


def test_table_category_rejects_missing_composite():
    with pytest.raises(IllTypedComposite):
        TableCategory(["x", "y", "z"],
                      [("1x", "x", "x"), ("1y", "y", "y"), ("1z", "z", "z"), ("f", "x", "y"), ("g", "y", "z")],
                      {"x": "1x", "y": "1y", "z": "1z"}, [])
    with pytest.raises(MissingIdentity):
        TableCategory(["x"], [("f", "x", "x")], {}, [])


def test_table_category_composition():
    C = TableCategory(["x", "y", "z"],
                      [("1x", "x", "x"), ("1y", "y", "y"), ("1z", "z", "z"),
                       ("f", "x", "y"), ("g", "y", "z"), ("h", "x", "z")],
                      {"x": "1x", "y": "1y", "z": "1z"}, [("g", "f", "h")])
    assert C.compose(C.morphism("g"), C.morphism("f")) == C.morphism("h")


def test_validate_category_finset_doc():
    C = validate_category({"kind": "finset", "sets": {"A": ["a"], "B": ["b", "c"]}})
    assert len(C.hom("A", "B")) == 2 and len(C.hom("B", "A")) == 1


def test_finset_pullback_is_universal():
    # the fiber product agrees with the exhaustive universal-property scan
    C = finset(4)
    small = [k for k in range(3)]
    for a, b, w in itertools.product(small, small, [1, 2]):
        for f in C.hom(a, w):
            for g in C.hom(b, w):
                v, p, q = C.pullback(f, g)
                assert C.is_pullback_square(Square(p, q, f, g))
                fiber = [(i, j) for i in range(a) for j in range(b) if f.label[i] == g.label[j]]
                assert C.size(v) == len(fiber)


def test_poset_pullbacks_are_meets():
    for L in lattices(5):
        C = PosetCategory(L)
        for x, y, z, w in itertools.product(L.elements, repeat=4):
            if L.leq(x, y) and L.leq(x, z) and L.leq(y, w) and L.leq(z, w):
                sq = C.square(x, y, z, w)
                assert C.is_pullback_square(sq) == (L.meet(y, z) == x)


def test_missing_pullback_in_n_poset():
    C = PosetCategory(N_poset())
    with pytest.raises(MissingPullback):
        C.pullback(C.arrow("a", "c"), C.arrow("b", "c"))


def test_truncation_levels_in_finset():
    C = finset(9)
    for a, b in itertools.product(range(4), repeat=2):
        for f in C.hom(a, b):
            lv = truncation_level(C, f)
            if C.is_iso(f):
                assert lv == -2
            elif C.is_injective(f):
                assert lv == -1
            else:
                assert lv == 0


def test_constant_map_level_zero():
    C = finset(9)
    f = C.function(2, 1, [0, 0])
    assert truncation_level(C, f) == 0
    d = diagonal(C, f)
    assert C.is_injective(d) and not C.is_iso(d)


def test_truncation_stable_under_pullback_and_composition():
    C = finset(81)
    small = range(4)
    for a, b, w in itertools.product(small, small, range(1, 4)):
        for f in C.hom(a, w):
            lf = truncation_level(C, f)
            for g in C.hom(b, w):
                _, _, q = C.pullback(f, g)
                assert truncation_level(C, q) <= lf
    for a, b, c in itertools.product(range(3), repeat=3):
        for f in C.hom(a, b):
            for g in C.hom(b, c):
                assert truncation_level(C, C.compose(g, f)) <= max(truncation_level(C, f), truncation_level(C, g))


def test_admissibility():
    C = finset(3)
    assert check_admissible(C, EdgeClass.where(C, C.is_injective))
    assert check_admissible(C, EdgeClass.identities(C))
    bad = check_admissible(C, EdgeClass.where(C, C.is_surjective))
    assert not bad and bad.reason == "right-cancellation"
    p, q = bad.counterexample
    assert C.is_surjective(C.compose(p, q)) and not C.is_surjective(q)
    P = PosetCategory(grid(2))
    assert check_admissible(P, EdgeClass.everything(P))


def test_cofiltered():
    assert check_cofiltered(PosetCategory(chain(2)))
    anti = check_cofiltered(PosetCategory(Poset("ab")))
    assert not anti and anti.reason == "pair"
    assert check_cofiltered(PosetCategory(Poset("ab")).__class__(Poset("xab", [("x", "a"), ("x", "b")])))


def test_cofiltered_parallel_pair():
    # two parallel arrows with no equalizing cone
    C = TableCategory(["x", "y"], [("1x", "x", "x"), ("1y", "y", "y"), ("f", "x", "y"), ("g", "x", "y")],
                      {"x": "1x", "y": "1y"}, [])
    r = check_cofiltered(C)
    assert not r and r.reason == "parallel-pair"


def test_overcategory_limits_on_lattices():
    for L in lattices(5):
        C = PosetCategory(L)
        for c in L.elements:
            rep = check_overcategory_limits(C, c)
            assert rep.ok, rep.failures()[:1]


def test_overcategory_limits_grid():
    C = PosetCategory(grid(1))
    rep = check_overcategory_limits(C, (1, 1))
    assert rep.ok and rep.terminal == C.identity((1, 1))
    assert len(rep.checks) == 72


def test_overcategory_limits_n_poset_fails_with_cospan():
    C = PosetCategory(N_poset())
    with pytest.raises(HypothesisFailed) as e:
        check_overcategory_limits(C, "c")
    f, g = e.value.witness
    assert {f.source, g.source} == {"a", "b"} and f.target == g.target == "c"


def test_overcategory_products_follow_meets():
    P = Poset(["a", "b", "t"], [("a", "t"), ("b", "t")])
    C = PosetCategory(P)
    rep = check_overcategory_limits(C, "t", require_pullbacks=False)
    fa, fb = C.arrow("a", "t"), C.arrow("b", "t")
    assert rep.products[(fa, fb)] is None
    assert rep.products[(fa, fa)] == fa
