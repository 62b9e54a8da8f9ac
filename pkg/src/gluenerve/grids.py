"""Grid simplices: functors [m] x [m] -> C with marked rows and columns.

Direction 1 is the column direction, (i, j) -> (i+1, j), and its edges must
lie in E1. Direction 2 is the row direction, (i, j) -> (i, j+1), with edges
in E2. A grid is stored as its object matrix plus the unit row and column
edges; every other morphism is a composite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    EdgeClassViolation,
    GapNotInBothClasses,
    MissingPullback,
    NotFunctorial,
    ShapeMismatch,
    SizeBudgetExceeded,
    TilingViolation,
    UsageError,
)
from .fincat import EdgeClass, Morphism, PosetCategory, Square, truncation_level
from .nerve import nerve
from .poset import grid as grid_poset

GRID_BUDGET = 200_000


@dataclass(frozen=True)
class Discipline:
    kind: str
    level: int | None = None

    def __repr__(self):
        return f"Trunc({self.level})" if self.kind == "trunc" else self.kind.capitalize()


COMM = Discipline("comm")
CART = Discipline("cart")


def Trunc(i):
    if i < -2:
        raise UsageError("truncation levels start at -2")
    return Discipline("trunc", i)


def parse_discipline(text):
    t = text.strip().lower()
    if t == "comm":
        return COMM
    if t == "cart":
        return CART
    if t.startswith("trunc"):
        return Trunc(int(t[5:].strip("()= ")))
    raise UsageError(f"unknown discipline {text!r}")


@dataclass(frozen=True)
class GridSimplex:
    objects: tuple
    rows: tuple
    cols: tuple
    category: object = field(compare=False, hash=False, repr=False, default=None)

    @property
    def m(self):
        return len(self.objects) - 1

    def obj(self, i, j):
        return self.objects[i][j]

    def morphism(self, a, b):
        """The composite (i, j) -> (k, l): along row i, then down column l."""
        (i, j), (k, l) = a, b
        if k < i or l < j:
            raise UsageError(f"{a} is not below {b}")
        C = self.category
        f = C.identity(self.objects[i][j])
        for c in range(j, l):
            f = C.compose(self.rows[i][c], f)
        for r in range(i, k):
            f = C.compose(self.cols[r][l], f)
        return f

    def square(self, i, j):
        return Square(self.rows[i][j], self.cols[i][j], self.cols[i][j + 1], self.rows[i + 1][j])

    def squares(self):
        for i in range(self.m):
            for j in range(self.m):
                yield (i, j), self.square(i, j)

    def diagonal(self):
        return tuple(self.objects[i][i] for i in range(self.m + 1))

    def diagonal_morphisms(self):
        return tuple(self.morphism((i, i), (i + 1, i + 1)) for i in range(self.m))

    def long_diagonal(self):
        return self.morphism((0, 0), (self.m, self.m))

    def sub(self, idx):
        """The grid on a monotone sub-sequence of [m] in both directions."""
        idx = list(idx)
        objs = tuple(tuple(self.objects[a][b] for b in idx) for a in idx)
        rows = tuple(tuple(self.morphism((a, idx[b]), (a, idx[b + 1])) for b in range(len(idx) - 1)) for a in idx)
        cols = tuple(tuple(self.morphism((idx[a], b), (idx[a + 1], b)) for b in idx) for a in range(len(idx) - 1))
        return GridSimplex(objs, rows, cols, self.category)

    def face(self, k):
        return self.sub([i for i in range(self.m + 1) if i != k])

    def edges(self):
        return self.sub([0, self.m]) if self.m else self


def grid_from_poset(C, objects):
    """Grid over a PosetCategory from its object matrix alone."""
    objects = tuple(tuple(r) for r in objects)
    n = len(objects)
    if any(len(r) != n for r in objects):
        raise ShapeMismatch("assignment is not square")
    try:
        rows = tuple(tuple(C.arrow(objects[i][j], objects[i][j + 1]) for j in range(n - 1)) for i in range(n))
        cols = tuple(tuple(C.arrow(objects[i][j], objects[i + 1][j]) for j in range(n)) for i in range(n - 1))
    except UsageError as e:
        raise NotFunctorial("assignment is not monotone", e.witness) from None
    return GridSimplex(objects, rows, cols, C)


def _square_ok(C, sq, E1, E2, discipline):
    if discipline.kind == "comm":
        return True
    if discipline.kind == "cart":
        return C.is_pullback_square(sq)
    try:
        lv = tiling_level(C, sq, E1, E2)
    except (MissingPullback, GapNotInBothClasses):
        return False
    return lv is not None and lv <= discipline.level


def grid_simplex(C, assignment, E1, E2, discipline=COMM, rows=None, cols=None):
    """Validate a grid. Over posets ``rows``/``cols`` may be omitted."""
    if rows is None and cols is None and isinstance(C, PosetCategory):
        g = grid_from_poset(C, assignment)
    else:
        objects = tuple(tuple(r) for r in assignment)
        n = len(objects)
        if any(len(r) != n for r in objects):
            raise ShapeMismatch("assignment is not square")
        rows = tuple(tuple(r) for r in rows or ())
        cols = tuple(tuple(c) for c in cols or ())
        if len(rows) != n or any(len(r) != n - 1 for r in rows) or len(cols) != max(n - 1, 0) or any(len(c) != n for c in cols):
            raise ShapeMismatch("edge matrices have the wrong shape")
        for i in range(n):
            for j in range(n - 1):
                e = rows[i][j]
                if e.source != objects[i][j] or e.target != objects[i][j + 1]:
                    raise NotFunctorial(f"row edge at {(i, j)} has the wrong ends", e)
        for i in range(n - 1):
            for j in range(n):
                e = cols[i][j]
                if e.source != objects[i][j] or e.target != objects[i + 1][j]:
                    raise NotFunctorial(f"column edge at {(i, j)} has the wrong ends", e)
        g = GridSimplex(objects, rows, cols, C)
    for (i, j), sq in g.squares():
        if not C.commutes(sq):
            raise NotFunctorial(f"square at {(i, j)} does not commute", sq)
    for i, r in enumerate(g.rows):
        for j, e in enumerate(r):
            if e not in E2:
                raise EdgeClassViolation(2, e)
    for i, r in enumerate(g.cols):
        for j, e in enumerate(r):
            if e not in E1:
                raise EdgeClassViolation(1, e)
    for (i, j), sq in g.squares():
        if not _square_ok(C, sq, E1, E2, discipline):
            raise TilingViolation(f"square at {(i, j)} violates {discipline!r}", sq)
    return g


def gap(C, sq):
    """Pullback cone of the square's cospan and the gap x -> z *_w y."""
    cone = C.pullback(sq.right, sq.bottom)
    d = C.mediate(cone, sq.top, sq.left)
    if d is None:
        raise MissingPullback("square corner does not map to the pullback", sq)
    return cone, d


def tiling_level(C, sq, E1, E2):
    for e in (sq.top, sq.bottom):
        if e not in E2:
            raise EdgeClassViolation(2, e)
    for e in (sq.left, sq.right):
        if e not in E1:
            raise EdgeClassViolation(1, e)
    _, d = gap(C, sq)
    if d not in E1 or d not in E2:
        raise GapNotInBothClasses(f"gap {d!r} is not in both classes", d)
    return truncation_level(C, d)


def enumerate_grid_simplices(C, E1, E2, m, discipline=COMM, budget=GRID_BUDGET):
    """Every grid of dimension m, built cell by cell in row-major order."""
    n = m + 1
    out = []
    objs = [[None] * n for _ in range(n)]
    rows = [[None] * (n - 1) for _ in range(n)]
    cols = [[None] * n for _ in range(n - 1)]
    cells = [(i, j) for i in range(n) for j in range(n)]

    def rec(k):
        if k == len(cells):
            out.append(GridSimplex(
                tuple(tuple(r) for r in objs),
                tuple(tuple(r) for r in rows),
                tuple(tuple(c) for c in cols),
                C,
            ))
            if len(out) > budget:
                raise SizeBudgetExceeded(f"more than {budget} grids")
            return
        i, j = cells[k]
        for x in C.objects:
            objs[i][j] = x
            if i == 0 and j == 0:
                rec(k + 1)
            elif i == 0:
                for g in E2.hom(objs[0][j - 1], x):
                    rows[0][j - 1] = g
                    rec(k + 1)
            elif j == 0:
                for f in E1.hom(objs[i - 1][0], x):
                    cols[i - 1][0] = f
                    rec(k + 1)
            else:
                top, left = rows[i - 1][j - 1], cols[i - 1][j - 1]
                for f in E1.hom(objs[i - 1][j], x):
                    ft = C.compose(f, top)
                    for g in E2.hom(objs[i][j - 1], x):
                        if C.compose(g, left) != ft:
                            continue
                        sq = Square(top, left, f, g)
                        if not _square_ok(C, sq, E1, E2, discipline):
                            continue
                        cols[i - 1][j] = f
                        rows[i][j - 1] = g
                        rec(k + 1)
        objs[i][j] = None

    rec(0)
    return out


# reshaping grid-shaped samples ---------------------------------------------


@dataclass(frozen=True)
class GridSample:
    """An (n1+1) x (n2+1) matrix of objects; direction 1 indexes rows of it."""

    objects: tuple
    reversed_dirs: frozenset = frozenset()

    @property
    def shape(self):
        return (len(self.objects) - 1, len(self.objects[0]) - 1)


@dataclass(frozen=True)
class Representable:
    """The representable bisimplicial set of bidegree (n1, n2)."""

    n1: int
    n2: int


def reshape(sample, action, arg=None):
    """``diagonal``, ``restrict`` (arg = direction kept) or ``partial_op`` (arg = directions)."""
    if isinstance(sample, GridSimplex):
        sample = GridSample(sample.objects)
    if isinstance(sample, Representable):
        if action == "diagonal":
            return nerve(grid_poset(sample.n1, sample.n2))
        sample = GridSample(tuple(tuple((i, j) for j in range(sample.n2 + 1)) for i in range(sample.n1 + 1)))
    if not isinstance(sample, GridSample):
        raise ShapeMismatch("not a grid-shaped sample")
    objs = sample.objects
    n1, n2 = sample.shape
    if action == "diagonal":
        if n1 != n2:
            raise ShapeMismatch(f"diagonal needs a square sample, got {(n1, n2)}")
        return tuple(objs[i][i] for i in range(n1 + 1))
    if action == "restrict":
        if arg == 1:
            return GridSample(tuple((r[0],) for r in objs), sample.reversed_dirs)
        if arg == 2:
            return GridSample((objs[0],), sample.reversed_dirs)
        raise ShapeMismatch(f"no direction {arg!r}")
    if action == "partial_op":
        dirs = frozenset(arg or ())
        if not dirs <= {1, 2}:
            raise ShapeMismatch(f"no directions {sorted(dirs - {1, 2})}")
        out = [list(r) for r in objs]
        if 1 in dirs:
            out = out[::-1]
        if 2 in dirs:
            out = [r[::-1] for r in out]
        return GridSample(tuple(tuple(r) for r in out), sample.reversed_dirs ^ dirs)
    raise UsageError(f"unknown action {action!r}")
