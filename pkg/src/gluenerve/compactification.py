"""Compactification posets Cpt^n, the subcomplex box^n, and Kpt(tau).

Cpt^n is {(i, j) : 0 <= i <= j <= n} with the product order; the diagonal
(i, i) carries the simplex being compactified. A compactification assigns
objects to every point, row edges (i, j) -> (i, j+1) in E2 and column edges
(i, j) -> (i+1, j) in E1, commuting on unit squares and composing to tau
along each diagonal step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .anodyne import certify_interval_union, search_certificate, validate_certificate
from .errors import NotFunctorial, SizeBudgetExceeded, UsageError
from .fincat import FinCategory, Morphism
from .grids import GridSimplex
from .nerve import SubNerve, combine, sub_nerve
from .poset import Poset, interval

KPT_BUDGET = 50_000


def build_cpt(n):
    if n < 0:
        raise UsageError("n must be non-negative")
    E = [(i, j) for i in range(n + 1) for j in range(i, n + 1)]
    return Poset.from_function(E, lambda a, b: a[0] <= b[0] and a[1] <= b[1])


def box_bounds(n):
    return [(0, i) for i in range(n + 1)], [(i, n) for i in range(n + 1)]


def box_pieces(n):
    P = build_cpt(n)
    lows, highs = box_bounds(n)
    return [interval(P, p, q) for p, q in zip(lows, highs)]


def build_box(n):
    """Union over i of N(Cpt^n restricted to (0,i) <= x <= (i,n))."""
    P = build_cpt(n)
    out = SubNerve(P, (), check=False)
    for piece in box_pieces(n):
        out = combine(out, sub_nerve(P, piece))
    return out


def certify_box(n, method="constructive", budget=None):
    P = build_cpt(n)
    if method == "search":
        from .nerve import nerve

        kwargs = {} if budget is None else {"budget": budget}
        return search_certificate(build_box(n), nerve(P), **kwargs)
    lows, highs = box_bounds(n)
    cert = certify_interval_union(P, lows, highs)
    validate_certificate(cert)
    return cert


# compactifications -----------------------------------------------------------


@dataclass(frozen=True)
class TauChain:
    """An n-simplex of the nerve of C: objects x_0..x_n and steps x_i -> x_(i+1)."""

    objects: tuple
    steps: tuple

    @property
    def n(self):
        return len(self.objects) - 1


def tau_chain(C, data):
    """From an object (n = 0) or a non-empty sequence of composable morphisms."""
    if isinstance(data, Morphism):
        data = [data]
    if isinstance(data, (list, tuple)) and data and all(isinstance(f, Morphism) for f in data):
        for f, g in zip(data, data[1:]):
            if f.target != g.source:
                raise UsageError("morphisms are not composable", (f, g))
        return TauChain(tuple([data[0].source] + [f.target for f in data]), tuple(data))
    C.check_object(data)
    return TauChain((data,), ())


@dataclass(frozen=True)
class Compactification:
    n: int
    objects: tuple  # ((point, object), ...) in Cpt order
    rows: tuple  # ((point, morphism point -> point + (0,1)), ...)
    cols: tuple  # ((point, morphism point -> point + (1,0)), ...)
    category: object = field(compare=False, hash=False, repr=False, default=None)

    def obj(self, p):
        return dict(self.objects)[p]

    def row(self, p):
        return dict(self.rows)[p]

    def col(self, p):
        return dict(self.cols)[p]

    def morphism(self, a, b):
        """Composite a -> b, going right along the row first, then down."""
        (i, j), (k, l) = a, b
        if not (i <= k and j <= l and k <= l):
            raise UsageError(f"{a} is not below {b} in Cpt")
        C = self.category
        rows, cols = dict(self.rows), dict(self.cols)
        f = C.identity(dict(self.objects)[a])
        for c in range(j, l):
            f = C.compose(rows[(i, c)], f)
        for r in range(i, k):
            f = C.compose(cols[(r, l)], f)
        return f

    def diagonal(self):
        return tuple(self.obj((i, i)) for i in range(self.n + 1))

    def diagonal_steps(self):
        return tuple(self.morphism((i, i), (i + 1, i + 1)) for i in range(self.n))


def enumerate_compactifications(C, E1, E2, tau, budget=KPT_BUDGET):
    n = tau.n
    cells = [(i, j) for i in range(n + 1) for j in range(i, n + 1)]
    objs, rows, cols = {}, {}, {}
    out = []

    def emit():
        out.append(Compactification(
            n,
            tuple((p, objs[p]) for p in cells),
            tuple((p, rows[p]) for p in cells if (p[0], p[1] + 1) in objs),
            tuple((p, cols[p]) for p in cells if (p[0] + 1, p[1]) in objs),
            C,
        ))
        if len(out) > budget:
            raise SizeBudgetExceeded(f"more than {budget} compactifications")

    def rec(k):
        if k == len(cells):
            emit()
            return
        i, j = cells[k]
        if i == j:
            x = tau.objects[i]
            objs[(i, j)] = x
            if i == 0:
                rec(k + 1)
            else:
                r = rows[(i - 1, i - 1)]
                for f in E1.hom(objs[(i - 1, i)], x):
                    if C.compose(f, r) == tau.steps[i - 1]:
                        cols[(i - 1, i)] = f
                        rec(k + 1)
            del objs[(i, j)]
            return
        for x in C.objects:
            objs[(i, j)] = x
            for g in E2.hom(objs[(i, j - 1)], x):
                rows[(i, j - 1)] = g
                if i == 0:
                    rec(k + 1)
                    continue
                top, left = rows[(i - 1, j - 1)], cols[(i - 1, j - 1)]
                gl = C.compose(g, left)
                for f in E1.hom(objs[(i - 1, j)], x):
                    if C.compose(f, top) == gl:
                        cols[(i - 1, j)] = f
                        rec(k + 1)
            del objs[(i, j)]

    rec(0)
    return out


class KptCategory(FinCategory):
    """Compactifications of tau; morphisms are E1-valued natural
    transformations that are identities on the diagonal."""

    kind = "kpt"

    def __init__(self, C, E1, E2, tau, objects):
        super().__init__(objects)
        self.base = C
        self.E1 = E1
        self.E2 = E2
        self.tau = tau
        self._homs = {}

    def hom(self, a, b):
        key = (a, b)
        if key in self._homs:
            return self._homs[key]
        self.check_object(a)
        self.check_object(b)
        C = self.base
        cells = [p for p, _ in a.objects]
        A, B = dict(a.objects), dict(b.objects)
        arows, brows = dict(a.rows), dict(b.rows)
        acols, bcols = dict(a.cols), dict(b.cols)
        comp = {}
        out = []

        def natural(p):
            # check the unit edges that end at p
            i, j = p
            q = (i, j - 1)
            if q in comp and q in arows:
                if C.compose(brows[q], comp[q]) != C.compose(comp[p], arows[q]):
                    return False
            q = (i - 1, j)
            if q in comp and q in acols:
                if C.compose(bcols[q], comp[q]) != C.compose(comp[p], acols[q]):
                    return False
            return True

        def rec(k):
            if k == len(cells):
                out.append(Morphism(a, b, tuple(comp[p] for p in cells)))
                return
            p = cells[k]
            if p[0] == p[1]:
                choices = (C.identity(A[p]),) if A[p] == B[p] else ()
            else:
                choices = self.E1.hom(A[p], B[p])
            for h in choices:
                comp[p] = h
                if natural(p):
                    rec(k + 1)
            comp.pop(p, None)

        rec(0)
        self._homs[key] = tuple(out)
        return self._homs[key]

    def identity(self, a):
        return Morphism(a, a, tuple(self.base.identity(x) for _, x in a.objects))

    def compose(self, g, f):
        if f.target != g.source:
            from .errors import IllTypedComposite

            raise IllTypedComposite("not composable", (g, f))
        return Morphism(f.source, g.target, tuple(self.base.compose(y, x) for x, y in zip(f.label, g.label)))


def enumerate_kpt(C, E1, E2, tau, budget=KPT_BUDGET):
    if not isinstance(tau, TauChain):
        tau = tau_chain(C, tau)
    objs = enumerate_compactifications(C, E1, E2, tau, budget)
    return KptCategory(C, E1, E2, tau, objs)


# the grid family attached to a compactification ------------------------------


def _piece_ops(i, n):
    """Lambda and mu on the piece [0, i] x [i, n] (componentwise max / min)."""

    def join(a, b):
        return (max(a[0], b[0]), max(a[1], b[1]))

    def meet(a, b):
        return (min(a[0], b[0]), min(a[1], b[1]))

    def lam(a, b):
        return meet(join((b[0], i), a), b)

    def mu(a, b):
        return meet(join((0, b[1]), a), b)

    return lam, mu


def piece_of(n, gamma):
    """Index of the first box piece containing the chain gamma."""
    for i in range(n + 1):
        if all(a <= i <= b for a, b in gamma):
            return i
    raise UsageError(f"{gamma!r} is not a simplex of the box")


def alpha_grid(sigma, gamma):
    n = sigma.n
    i = piece_of(n, gamma)
    lam, mu = _piece_ops(i, n)
    m = len(gamma) - 1

    def point(p, q):
        if p >= q:
            return lam(gamma[q], gamma[p])
        return mu(gamma[p], gamma[q])

    pts = [[point(p, q) for q in range(m + 1)] for p in range(m + 1)]
    objs = tuple(tuple(sigma.obj(x) for x in r) for r in pts)
    rows = tuple(tuple(sigma.morphism(pts[p][q], pts[p][q + 1]) for q in range(m)) for p in range(m + 1))
    cols = tuple(tuple(sigma.morphism(pts[p][q], pts[p + 1][q]) for q in range(m + 1)) for p in range(m))
    return GridSimplex(objs, rows, cols, sigma.category)


def alpha_comm(sigma):
    """One grid per simplex of box^n, keyed by the chain."""
    return {gamma: alpha_grid(sigma, gamma) for gamma in build_box(sigma.n).sorted_chains()}
