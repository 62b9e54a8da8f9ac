"""Cart^n, its structure maps, the boxplus subcomplexes, the epsilon grids
and Kan-extension cartesianizations.

Elements of Cart^n are non-empty up-sets of [n] x [n], stored as frozensets
of (row, col) points and ordered by reverse inclusion. In this lattice the
meet is the union and the join is the intersection; the operators below use
those set operations directly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .anodyne import certify_interval_union, validate_certificate
from .errors import MissingLimit, NotAChain, OutOfRange, SizeBudgetExceeded, UsageError
from .fincat import EdgeClass, Morphism, PosetCategory, Square
from .grids import GridSimplex, grid_from_poset
from .nerve import SubNerve, combine, sub_nerve
from .poset import grid, interval, upset_lattice

CART_BUDGET = 4


@lru_cache(maxsize=None)
def cart_lattice(n, budget=CART_BUDGET):
    if n < 0:
        raise OutOfRange("n must be non-negative")
    if n > budget:
        raise SizeBudgetExceeded(f"Cart^{n} exceeds the budget n <= {budget}")
    return upset_lattice(grid(n), budget=(n + 1) ** 2)


def build_cart(n, budget=CART_BUDGET):
    return cart_lattice(n, budget).lattice


@lru_cache(maxsize=None)
def cart_category(n):
    return PosetCategory(build_cart(n))


def _point(n, p, q):
    if not (0 <= p <= n and 0 <= q <= n):
        raise OutOfRange(f"({p}, {q}) is outside [{n}] x [{n}]")
    return (p, q)


def varsigma(n, p, q):
    """Principal up-set of (p, q)."""
    _point(n, p, q)
    return frozenset((a, b) for a in range(p, n + 1) for b in range(q, n + 1))


def pi(Q):
    if not Q:
        raise OutOfRange("pi is undefined on the empty up-set")
    return (min(p for p, _ in Q), min(q for _, q in Q))


def xi(n, p, q):
    return varsigma(n, p, 0) | varsigma(n, 0, q)


def eta(n, p, q):
    return varsigma(n, p, n) | varsigma(n, n, q)


def structure_maps(n, which, arg):
    if which == "pi":
        if any(not (0 <= a <= n and 0 <= b <= n) for a, b in arg):
            raise OutOfRange("up-set has points outside the grid")
        return pi(frozenset(arg))
    fn = {"varsigma": varsigma, "xi": xi, "eta": eta}.get(which)
    if fn is None:
        raise UsageError(f"unknown structure map {which!r}")
    return fn(n, *arg)


def lambda_op(n, p, x, y):
    if not 0 <= p <= n:
        raise OutOfRange(f"p={p} outside [0, {n}]")
    return (varsigma(n, max(pi(y)[0], p), 0) & x) | y


def mu_op(n, q, x, y):
    if not 0 <= q <= n:
        raise OutOfRange(f"q={q} outside [0, {n}]")
    return (varsigma(n, 0, max(q, pi(y)[1])) & x) | y


def lambda_mu(n, variant, x, y):
    """``variant`` is ("lambda", p) or ("mu", q)."""
    kind, idx = variant
    x, y = frozenset(x), frozenset(y)
    if kind == "lambda":
        return lambda_op(n, idx, x, y)
    if kind == "mu":
        return mu_op(n, idx, x, y)
    raise UsageError(f"unknown operator {kind!r}")


def boxplus_piece(n, p, q):
    return interval(build_cart(n), xi(n, p, q), eta(n, p, q))


def build_boxplus(n, which="full", at=None):
    """``at`` one piece, ``full`` the union over all (p, q), ``cart`` the union over (p, n)."""
    L = build_cart(n)
    if which == "at":
        return sub_nerve(L, boxplus_piece(n, *at))
    if which == "full":
        points = [(p, q) for p in range(n + 1) for q in range(n + 1)]
    elif which == "cart":
        points = [(p, n) for p in range(n + 1)]
    else:
        raise UsageError(f"unknown boxplus variant {which!r}")
    out = SubNerve(L, (), check=False)
    for p, q in points:
        out = combine(out, sub_nerve(L, boxplus_piece(n, p, q)))
    return out


def certify_boxplus_cart(n):
    L = build_cart(n)
    lows = [xi(n, i, n) for i in range(n + 1)]
    highs = [eta(n, i, n) for i in range(n + 1)]
    cert = certify_interval_union(L, lows, highs)
    validate_certificate(cert)
    return cert


# epsilon ---------------------------------------------------------------------


def f_classes(n):
    """F1: edges with constant second coordinate under pi; F2: constant first."""
    C = cart_category(n)
    F1 = EdgeClass.where(C, lambda f: pi(f.source)[1] == pi(f.target)[1])
    F2 = EdgeClass.where(C, lambda f: pi(f.source)[0] == pi(f.target)[0])
    return F1, F2


def epsilon_points(n, chain):
    chain = [frozenset(x) for x in chain]
    L = build_cart(n)
    for x in chain:
        if x not in L:
            raise NotAChain(f"{sorted(x)} is not an element of Cart^{n}", x)
    for x, y in zip(chain, chain[1:]):
        if not L.leq(x, y):
            raise NotAChain("sequence is not increasing", (x, y))
    m = len(chain) - 1
    return [
        [lambda_op(n, 0, chain[b], chain[a]) if a >= b else mu_op(n, 0, chain[a], chain[b]) for b in range(m + 1)]
        for a in range(m + 1)
    ]


def epsilon(n, chain):
    return grid_from_poset(cart_category(n), epsilon_points(n, chain))


# Kan extension ---------------------------------------------------------------


@dataclass
class Cartesianization:
    n: int
    category: object
    values: dict
    legs: dict = field(default_factory=dict)
    tau: object = None

    def __getitem__(self, Q):
        return self.values[frozenset(Q)]

    def morphism(self, Q, R):
        """Induced map Kart(Q) -> Kart(R) for Q containing R."""
        Q, R = frozenset(Q), frozenset(R)
        if not R <= Q:
            raise UsageError("second up-set must be contained in the first")
        C = self.category
        src, tgt = self.values[Q], self.values[R]
        lq, lr = self.legs[Q], self.legs[R]
        for u in C.hom(src, tgt):
            if all(C.compose(lr[p], u) == lq[p] for p in R):
                return u
        raise MissingLimit("no mediating morphism", (Q, R))

    def square(self, a, b, c, d):
        m = self.morphism
        return Square(m(a, b), m(a, c), m(b, d), m(c, d))


def _tau_grid(C, tau):
    if isinstance(tau, GridSimplex):
        return tau
    return grid_from_poset(C, tau)


def kart_extension(C, tau, order=None):
    """Value at Q is the limit of tau over the points of Q."""
    g = _tau_grid(C, tau)
    n = g.m
    ups = list(cart_lattice(n).lattice.elements)
    if order is not None:
        ups = [ups[i] for i in order]
    values, legs = {}, {}
    for Q in ups:
        pts = sorted(Q)
        nodes = {p: g.obj(*p) for p in pts}
        arrows = []
        for (i, j) in pts:
            if (i, j + 1) in Q:
                arrows.append(((i, j), (i, j + 1), g.rows[i][j]))
            if (i + 1, j) in Q:
                arrows.append(((i, j), (i + 1, j), g.cols[i][j]))
        lim = C.limit(nodes, arrows)
        if lim is None:
            raise MissingLimit(f"no limit over {sorted(Q)}", Q)
        values[Q], legs[Q] = lim
    return Cartesianization(n, C, values, legs, g)


def exact_squares(L):
    """All exact squares (meet, b, c, join) of a poset, as element tuples."""
    out = []
    for b, c in itertools.product(L.elements, repeat=2):
        a, d = L.meet(b, c), L.join(b, c)
        if a is not None and d is not None:
            out.append((a, b, c, d))
    return out


def kart_exact_violations(kart):
    """Exact squares of Cart^n whose image is not a pullback."""
    L = build_cart(kart.n)
    C = kart.category
    bad = []
    for sq in exact_squares(L):
        if not C.is_pullback_square(kart.square(*sq)):
            bad.append(sq)
    return bad


# law suite -------------------------------------------------------------------


@dataclass
class Law:
    name: str
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def check(self, ok, witness):
        self.checked += 1
        if not ok:
            self.violations.append(witness)


def structure_laws(n):
    L = build_cart(n)
    sec = Law("pi-varsigma")
    order = Law("xi-varsigma-eta")
    for p in range(n + 1):
        for q in range(n + 1):
            s = varsigma(n, p, q)
            sec.check(pi(s) == (p, q), (p, q))
            order.check(L.leq(xi(n, p, q), s) and L.leq(s, eta(n, p, q)), (p, q))
    return [sec, order]


def lambda_mu_laws(n):
    L = build_cart(n)
    refl = Law("lambda-mu-reflexive")
    proj = Law("pi-lambda")
    for x in L.elements:
        for k in range(n + 1):
            refl.check(lambda_op(n, k, x, x) == x and mu_op(n, k, x, x) == x, (x, k))
        for y in L.up(x):
            for k in range(n + 1):
                proj.check(pi(lambda_op(n, k, x, y)) == (pi(y)[0], pi(x)[1]), (x, y, k))
    return [refl, proj]


def claim_laws(n):
    """The meet identity on each cart interval, and coverage by those intervals."""
    L = build_cart(n)
    ident = Law("lambda-meet-mu")
    cover = Law("interval-coverage")
    seen = set()
    for p in range(n + 1):
        I = interval(L, xi(n, p, n), eta(n, p, n))
        seen.update(I.elements)
        for x in I.elements:
            for y in I.up(x):
                ident.check((lambda_op(n, 0, x, y) | mu_op(n, 0, x, y)) == x, (p, x, y))
    for x in L.elements:
        cover.check(x in seen, x)
    return [ident, cover]


def epsilon_laws(n, max_dim=2):
    """Faces commute with epsilon; epsilon of cart 1-simplices gives pullbacks."""
    from .nerve import nerve, simplices

    L = build_cart(n)
    faces = Law("epsilon-faces")
    K = nerve(L, dim_cap=max_dim)
    for d in range(1, max_dim + 1):
        for c in simplices(K, d):
            g = epsilon(n, c)
            for k in range(d + 1):
                sub = [x for i, x in enumerate(c) if i != k]
                faces.check(g.face(k) == epsilon(n, sub), (c, k))
    pb = Law("epsilon-cart-pullback")
    for c in simplices(build_boxplus(n, "cart"), 1):
        a, b = epsilon_points(n, c)
        pb.check(L.meet(a[1], b[0]) == a[0], c)
    return [faces, pb]


def epsilon_exactness(n):
    """(exact, total) over epsilon squares of cart 1-simplices."""
    from .nerve import simplices
    from .poset import is_exact_square

    L = build_cart(n)
    cs = simplices(build_boxplus(n, "cart"), 1)
    exact = 0
    for c in cs:
        (a, b), (c2, d) = epsilon_points(n, c)
        exact += is_exact_square(L, (a, b, c2, d))
    return exact, len(cs)


def law_suite(n, epsilon_dim=2):
    laws = structure_laws(n) + lambda_mu_laws(n) + claim_laws(n)
    if n <= 2:
        laws += epsilon_laws(n, epsilon_dim)
    return laws


# batch evaluation over lattice targets ---------------------------------------


def meet_table(L):
    import numpy as np

    E = L.elements
    M = np.empty((len(E), len(E)), dtype=np.int16)
    for i, x in enumerate(E):
        for j, y in enumerate(E):
            m = L.meet(x, y)
            if m is None:
                raise MissingLimit(f"{x!r} and {y!r} have no meet", (x, y))
            M[i, j] = L.index(m)
    return M


def monotone_grids(L, n):
    """Every monotone map [n] x [n] -> L as rows of element indices (row-major points)."""
    import numpy as np

    k = len(L)
    leq = np.array([[L.leq(x, y) for y in L.elements] for x in L.elements], dtype=bool)
    points = [(i, j) for i in range(n + 1) for j in range(n + 1)]
    T = np.zeros((1, 0), dtype=np.int16)
    for i, j in points:
        preds = [points.index(p) for p in ((i - 1, j), (i, j - 1)) if min(p) >= 0]
        parts = []
        for v in range(k):
            ok = np.ones(len(T), dtype=bool)
            for c in preds:
                ok &= leq[T[:, c], v]
            rows = T[ok]
            parts.append(np.hstack([rows, np.full((len(rows), 1), v, dtype=np.int16)]))
        T = np.vstack(parts)
    return T


def kart_batch(M, taus, n, order=None, point_order=None):
    """Values of the cartesianization for many tau at once.

    Column c is the value at the c-th element of Cart^n: the meet of tau over
    the up-set, folded in ``point_order`` (default: sorted points). ``order``
    only changes the sequence in which columns are filled.
    """
    import numpy as np

    ups = list(build_cart(n).elements)
    idx = list(range(len(ups))) if order is None else list(order)
    out = np.empty((len(taus), len(ups)), dtype=np.int16)
    for c in idx:
        pts = sorted(ups[c]) if point_order is None else [p for p in point_order if p in ups[c]]
        acc = taus[:, pts[0][0] * (n + 1) + pts[0][1]]
        for p, q in pts[1:]:
            acc = M[acc, taus[:, p * (n + 1) + q]]
        out[:, c] = acc
    return out


def kart_batch_violations(M, taus, n, K=None):
    """Counts of restriction and exact-square violations in a batch."""
    import numpy as np

    L = build_cart(n)
    pos = {Q: c for c, Q in enumerate(L.elements)}
    if K is None:
        K = kart_batch(M, taus, n)
    restr = 0
    for p in range(n + 1):
        for q in range(n + 1):
            restr += int(np.count_nonzero(K[:, pos[varsigma(n, p, q)]] != taus[:, p * (n + 1) + q]))
    exact = 0
    for a, b, c, _ in exact_squares(L):
        exact += int(np.count_nonzero(K[:, pos[a]] != M[K[:, pos[b]], K[:, pos[c]]]))
    return {"restriction": restr, "exact-to-pullback": exact}
