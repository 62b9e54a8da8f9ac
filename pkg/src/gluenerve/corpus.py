"""Small named instances (C, E1, E2, g, i_max) used by the tests and the CLI.

``good`` instances satisfy admissibility, factorization and truncation;
``broken`` ones each violate exactly one of them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .fincat import EdgeClass, FinSetCategory, PosetCategory, column_edges, row_edges
from .gluing import from_functor, from_poset_map
from .grids import CART
from .poset import Poset, chain, grid


@dataclass
class Instance:
    name: str
    C: object
    E1: EdgeClass
    E2: EdgeClass
    g: object
    i_max: int
    broken: str | None = None
    note: str = ""


def _rank_chain(k):
    return PosetCategory(chain(k))


def square11():
    C = PosetCategory(grid(1))
    E1, E2 = column_edges(C), row_edges(C)
    D = _rank_chain(2)
    g = from_poset_map(C, E1, E2, CART, D, lambda x: x[0] + x[1])
    return Instance("square11", C, E1, E2, g, -2, note="[1]x[1] with coordinate classes")


def square11_rows_only():
    C = PosetCategory(grid(1))
    E1, E2 = EdgeClass.identities(C), EdgeClass.everything(C)
    D = _rank_chain(2)
    g = from_poset_map(C, E1, E2, CART, D, lambda x: x[0] + x[1])
    return Instance("square11-rows", C, E1, E2, g, -2, note="E1 identities, E2 everything")


def grid21_all():
    C = PosetCategory(grid(2, 1))
    E = EdgeClass.everything(C)
    D = _rank_chain(3)
    g = from_poset_map(C, E, E, CART, D, lambda x: x[0] + x[1])
    return Instance("grid21-all", C, E, E, g, -1, note="[2]x[1], both classes everything")


def diamond_to_chain():
    P = Poset(["b", "l", "r", "t"], [("b", "l"), ("b", "r"), ("l", "t"), ("r", "t")])
    C = PosetCategory(P)
    E = EdgeClass.everything(C)
    D = _rank_chain(1)
    g = from_poset_map(C, E, E, CART, D, {"b": 0, "l": 0, "r": 1, "t": 1})
    return Instance("diamond", C, E, E, g, -1, note="four-element Boolean lattice onto [1]")


def injections(sizes=(0, 1, 2)):
    sets = {k: tuple(range(k)) for k in sizes}
    funcs = []
    for a in sizes:
        for b in sizes:
            for t in itertools.permutations(range(b), a):
                funcs.append((a, b, list(t)))
    return FinSetCategory(sets, funcs)


def finset_injections():
    C = injections()
    E = EdgeClass.everything(C)
    g = from_functor(C, E, E, CART, C, lambda x: x, lambda f: f)
    return Instance("finset-inj", C, E, E, g, -1, note="injections among sets of size <= 2; gaps are -1")


def finset_injections_size():
    C = injections()
    E = EdgeClass.everything(C)
    D = _rank_chain(2)
    g = from_poset_map(C, E, E, CART, D, lambda x: x)
    return Instance("finset-inj-size", C, E, E, g, -1, note="cardinality functor into [2]")


def broken_factorization():
    C = PosetCategory(grid(1))
    E1, E2 = column_edges(C), EdgeClass.identities(C)
    g = from_poset_map(C, E1, E2, CART, _rank_chain(2), lambda x: x[0] + x[1])
    return Instance("no-factorization", C, E1, E2, g, -2, broken="factorization",
                    note="row morphisms cannot be factored")


def broken_admissibility():
    C = FinSetCategory({1: (0,), 2: (0, 1)})
    E1 = EdgeClass.where(C, C.is_surjective)
    E2 = EdgeClass.everything(C)
    g = from_functor(C, E1, E2, CART, C, lambda x: x, lambda f: f)
    return Instance("surjections", C, E1, E2, g, 0, broken="admissibility",
                    note="surjections are not right-cancellative")


def broken_truncation():
    C = PosetCategory(grid(1))
    E = EdgeClass.everything(C)
    g = from_poset_map(C, E, E, CART, _rank_chain(2), lambda x: x[0] + x[1])
    return Instance("too-truncated", C, E, E, g, -2, broken="truncation",
                    note="monomorphisms are -1-truncated, not -2")


GOOD = {f().name: f for f in (square11, square11_rows_only, grid21_all, diamond_to_chain,
                              finset_injections, finset_injections_size)}
BROKEN = {f().name: f for f in (broken_factorization, broken_admissibility, broken_truncation)}


def instance(name):
    from .errors import UsageError

    table = {**GOOD, **BROKEN}
    if name not in table:
        raise UsageError(f"unknown instance {name!r}; known: {', '.join(sorted(table))}")
    return table[name]()
