import pytest

from gluenerve.errors import EdgeClassViolation, NotFunctorial, ShapeMismatch, TilingViolation, UsageError
from gluenerve.fincat import EdgeClass, FinSetCategory, PosetCategory, column_edges, row_edges
from gluenerve.grids import (
    CART,
    COMM,
    GridSample,
    Representable,
    Trunc,
    enumerate_grid_simplices,
    gap,
    grid_simplex,
    parse_discipline,
    reshape,
    tiling_level,
)
from gluenerve.nerve import nerve
from gluenerve.poset import Poset, chain, grid


def square_cat():
    C = PosetCategory(grid(1))
    return C, column_edges(C), row_edges(C)


def test_grid_simplex_accepts_coordinate_square():
    C, E1, E2 = square_cat()
    g = grid_simplex(C, [[(0, 0), (0, 1)], [(1, 0), (1, 1)]], E1, E2, CART)
    assert g.long_diagonal() == C.arrow((0, 0), (1, 1))
    assert g.diagonal() == ((0, 0), (1, 1))


def test_grid_simplex_rejects_wrong_direction():
    C, E1, E2 = square_cat()
    # the row edge (0,0) -> (1,0) changes the first coordinate
    with pytest.raises(EdgeClassViolation) as e:
        grid_simplex(C, [[(0, 0), (1, 0)], [(0, 1), (1, 1)]], E1, E2)
    assert e.value.direction == 2


def test_grid_simplex_rejects_non_monotone_and_bad_shape():
    C, E1, E2 = square_cat()
    with pytest.raises(NotFunctorial):
        grid_simplex(C, [[(1, 1), (0, 0)], [(1, 1), (1, 1)]], E1, E2)
    with pytest.raises(ShapeMismatch):
        grid_simplex(C, [[(0, 0), (0, 1)]], E1, E2)


def test_cart_rejects_non_pullback():
    C = PosetCategory(chain(1))
    E = EdgeClass.everything(C)
    with pytest.raises(TilingViolation):
        grid_simplex(C, [[0, 1], [1, 1]], E, E, CART)
    assert grid_simplex(C, [[0, 1], [1, 1]], E, E, COMM)


def test_enumeration_counts_on_chain():
    # over [1] with every arrow in both classes the 1-simplices are monotone 2x2 grids
    C = PosetCategory(chain(1))
    E = EdgeClass.everything(C)
    comm = enumerate_grid_simplices(C, E, E, 1, COMM)
    assert len(comm) == 6
    cart = enumerate_grid_simplices(C, E, E, 1, CART)
    assert all(C.is_pullback_square(g.square(0, 0)) for g in cart)
    assert len(cart) == 5


def test_zero_simplices_are_objects():
    C, E1, E2 = square_cat()
    assert len(enumerate_grid_simplices(C, E1, E2, 0)) == 4


def test_gap_and_tiling_level_in_finset():
    C = FinSetCategory({k: tuple(range(k)) for k in range(5)})
    E = EdgeClass.where(C, C.is_injective)
    top = C.function(1, 2, [0])
    ident = C.identity(2)
    sq_top, sq_left = top, top
    from gluenerve.fincat import Square

    sq = Square(sq_top, sq_left, ident, ident)
    cone, d = gap(C, sq)
    assert C.is_injective(d) and not C.is_iso(d)
    assert tiling_level(C, sq, E, E) == -1


def test_disciplines():
    assert parse_discipline("Trunc(-1)") == Trunc(-1)
    assert parse_discipline("cart") == CART
    with pytest.raises(UsageError):
        Trunc(-3)
    with pytest.raises(UsageError):
        parse_discipline("bogus")


def test_reshape():
    R = Representable(1, 1)
    assert reshape(R, "diagonal") == nerve(grid(1))
    s = GridSample((("a", "b"), ("c", "d")))
    assert reshape(s, "diagonal") == ("a", "d")
    assert reshape(s, "partial_op", {1}).objects == (("c", "d"), ("a", "b"))
    assert reshape(reshape(s, "partial_op", {1, 2}), "partial_op", {1, 2}) == s
    assert reshape(s, "restrict", 2).objects == (("a", "b"),)
    with pytest.raises(ShapeMismatch):
        reshape(GridSample((("a", "b"),)), "diagonal")
