"""Extending functors defined on grid nerves.

A GridFunctorData sends objects of C and grid 1-simplices (2 x 2 grids) to
objects and morphisms of D. extend_comm turns one defined on commutative
grids into a functor C -> D; extend_cart extends one defined on cartesian
grids to all commutative grids by splitting each square through its gap;
extend_full chains the two.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .compactification import alpha_grid, enumerate_compactifications, tau_chain
from .errors import HypothesisFailed, IllTypedComposite, NotFunctorial
from .fincat import EdgeClass, Functor, check_admissible, truncation_level
from .grids import CART, COMM, GridSimplex, enumerate_grid_simplices, gap

ROW_GAMMA = ((0, 0), (0, 1))
COL_GAMMA = ((0, 1), (1, 1))


@dataclass
class GridFunctorData:
    C: object
    E1: EdgeClass
    E2: EdgeClass
    discipline: object
    D: object
    on_objects: object
    on_edges: object

    def obj(self, x):
        f = self.on_objects
        return f[x] if isinstance(f, dict) else f(x)

    def __call__(self, s):
        if s.m != 1:
            raise ValueError("grid functor data is evaluated on 1-simplices")
        f = self.on_edges
        return f[s] if isinstance(f, dict) else f(s)

    def simplices(self, m, budget=None):
        kw = {} if budget is None else {"budget": budget}
        return enumerate_grid_simplices(self.C, self.E1, self.E2, m, self.discipline, **kw)


def from_functor(C, E1, E2, discipline, D, fobj, fmor):
    """g = G o p for a functor G: C -> D given on objects and morphisms."""
    def obj(x):
        return fobj[x] if isinstance(fobj, dict) else fobj(x)

    def mor(f):
        return fmor[f] if isinstance(fmor, dict) else fmor(f)

    return GridFunctorData(C, E1, E2, discipline, D, obj, lambda s: mor(s.long_diagonal()))


def from_poset_map(C, E1, E2, discipline, D, fobj):
    """Into a PosetCategory D, a monotone object map determines everything."""
    def obj(x):
        return fobj[x] if isinstance(fobj, dict) else fobj(x)

    return GridFunctorData(C, E1, E2, discipline, D, obj, lambda s: D.arrow(obj(s.obj(0, 0)), obj(s.obj(1, 1))))


@dataclass
class Report:
    checks: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    stages: list = field(default_factory=list)

    @property
    def ok(self):
        return all(ok for _, ok, _ in self.checks) and all(s.ok for s in self.stages)

    def add(self, name, ok, witness=None):
        self.checks.append((name, bool(ok), witness))

    def failures(self):
        out = [c for c in self.checks if not c[1]]
        for s in self.stages:
            out.extend(s.failures())
        return out

    def tally(self, key, amount=1):
        self.counts[key] = self.counts.get(key, 0) + amount

    def as_dict(self):
        return {
            "ok": self.ok,
            "counts": dict(self.counts),
            "checks": [{"check": n, "verdict": "pass" if ok else "fail", "witness": repr(w) if not ok else None}
                       for n, ok, w in self.checks],
            "stages": [s.as_dict() for s in self.stages],
        }


def check_grid_functor(g, max_dim=2, budget=None):
    """Typing and composition along 2-simplices; returns a Report."""
    rep = Report()
    D = g.D
    for s in g.simplices(1, budget):
        v = g(s)
        typed = v.source == g.obj(s.obj(0, 0)) and v.target == g.obj(s.obj(1, 1))
        rep.add("typed", typed, s)
        if all(D_is_id for D_is_id in (g.C.is_identity(e) for r in s.rows + s.cols for e in r)):
            rep.add("identity", v == D.identity(g.obj(s.obj(0, 0))), s)
        rep.tally("1-simplices")
    if max_dim >= 2:
        for t in g.simplices(2, budget):
            lhs = g(t.face(1))
            rhs = D.compose(g(t.face(0)), g(t.face(2)))
            rep.add("2-simplex", lhs == rhs, t)
            rep.tally("2-simplices")
    return rep


def _require_admissible(C, E1, E2):
    for name, E in (("E1", E1), ("E2", E2)):
        chk = check_admissible(C, E)
        if not chk.ok:
            raise HypothesisFailed("admissibility", f"{name} fails {chk.reason}", (name, chk.reason, chk.counterexample))


def factorizations(C, E1, E2, f):
    return enumerate_compactifications(C, E1, E2, tau_chain(C, [f]))


def require_factorizations(C, E1, E2):
    table = {}
    for f in C.morphisms():
        fs = factorizations(C, E1, E2, f)
        if not fs:
            raise HypothesisFailed("factorization", f"{f!r} has no E2-then-E1 factorization", f)
        table[f] = fs
    return table


def _via(g, sigma):
    """g on the two grids of the box^1 horn, composed in D."""
    return g.D.compose(g(alpha_grid(sigma, COL_GAMMA)), g(alpha_grid(sigma, ROW_GAMMA)))


def _functor_checks(rep, C, D, G):
    for x in C.objects:
        rep.add("identity", G.mor(C.identity(x)) == D.identity(G.obj(x)), x)
    for g2, f in C.composable_pairs():
        rep.add("composition", G.mor(C.compose(g2, f)) == D.compose(G.mor(g2), G.mor(f)), (g2, f))
        rep.tally("composable pairs")


def _restriction_checks(rep, G, g, budget):
    D = g.D
    for s in g.simplices(1, budget):
        rep.add("restriction-1", G.mor(s.long_diagonal()) == g(s), s)
        rep.tally("restricted 1-simplices")
    for t in g.simplices(2, budget):
        d = t.diagonal_morphisms()
        ok = G.mor(d[0]) == g(t.face(2)) and G.mor(d[1]) == g(t.face(0))
        ok = ok and G.mor(t.long_diagonal()) == g(t.face(1))
        rep.add("restriction-2", ok, t)
        rep.tally("restricted 2-simplices")


def extend_comm(C, E1, E2, g, check_choices=True, strict=True, budget=None):
    """Functor C -> D from grid data on commutative grids."""
    _require_admissible(C, E1, E2)
    table = require_factorizations(C, E1, E2)
    D = g.D
    values = {}
    rep = Report()
    for f, sigmas in table.items():
        try:
            values[f] = _via(g, sigmas[0])
        except IllTypedComposite:
            rep.add("typed", False, (f, sigmas[0]))
            continue
        typed = values[f].source == g.obj(f.source) and values[f].target == g.obj(f.target)
        rep.add("typed", typed, f)
        if check_choices:
            for sigma in sigmas[1:]:
                try:
                    same = _via(g, sigma) == values[f]
                except IllTypedComposite:
                    same = False
                rep.add("choice-independence", same, (f, sigma))
        rep.tally("factorizations", len(sigmas))
    G = Functor(C, D, g.obj, lambda f: values[f])
    if rep.ok:
        _functor_checks(rep, C, D, G)
        _restriction_checks(rep, G, g, budget)
    if strict and not rep.ok:
        raise NotFunctorial(f"extension check {rep.failures()[0][0]!r} fails", rep)
    return G, rep


def _pieces(C, s, cone, d):
    """Split a 2 x 2 grid through its gap: the gap square, then the pullback square."""
    v, a, b = cone
    x = s.obj(0, 0)
    ix = C.identity(x)
    gap_sq = GridSimplex(((x, x), (x, v)), ((ix,), (d,)), ((ix, d),), C)
    pb_sq = GridSimplex(((v, s.obj(0, 1)), (s.obj(1, 0), s.obj(1, 1))),
                        ((a,), (s.rows[1][0],)), ((b, s.cols[0][1]),), C)
    return gap_sq, pb_sq


class CartExtension:
    """Evaluates the extension of cartesian grid data on commutative grids."""

    def __init__(self, C, g):
        self.C = C
        self.g = g
        self.cache = {}

    def value(self, s, choice=None, depth=0):
        if choice is None and s in self.cache:
            return self.cache[s]
        C = self.C
        sq = s.square(0, 0)
        if C.is_pullback_square(sq):
            out = self.g(s)
        else:
            if depth > 64:
                raise HypothesisFailed("truncation", "gap recursion does not terminate", s)
            if choice is None:
                cone, d = gap(C, sq)
            else:
                cone = choice
                d = C.mediate(cone, sq.top, sq.left)
            gap_sq, pb_sq = _pieces(C, s, cone, d)
            out = self.g.D.compose(self.g(pb_sq), self.value(gap_sq, None, depth + 1))
        if choice is None:
            self.cache[s] = out
        return out


def extend_cart(C, E1, E2, g, i_max, check_choices=True, strict=True, budget=None):
    """Grid data on commutative grids extending data on cartesian grids."""
    _require_admissible(C, E1, E2)
    both = E1 & E2
    for f in sorted(both.members, key=repr):
        lv = truncation_level(C, f)
        if lv is None or lv > i_max:
            raise HypothesisFailed("truncation", f"{f!r} is not {i_max}-truncated", (f, lv))
    ext = CartExtension(C, g)
    h = GridFunctorData(C, E1, E2, COMM, g.D, g.on_objects, ext.value)
    rep = Report()
    for s in enumerate_grid_simplices(C, E1, E2, 1, CART, **({} if budget is None else {"budget": budget})):
        rep.add("restriction-cart", ext.value(s) == g(s), s)
        rep.tally("cartesian 1-simplices")
    comm1 = enumerate_grid_simplices(C, E1, E2, 1, COMM, **({} if budget is None else {"budget": budget}))
    for s in comm1:
        v = ext.value(s)
        rep.add("typed", v.source == g.obj(s.obj(0, 0)) and v.target == g.obj(s.obj(1, 1)), s)
        rep.tally("commutative 1-simplices")
        if check_choices:
            sq = s.square(0, 0)
            if not C.is_pullback_square(sq):
                rep.tally("split squares")
                for cone in C.all_pullbacks(sq.right, sq.bottom):
                    rep.add("choice-independence", ext.value(s, cone) == v, (s, cone))
    for t in enumerate_grid_simplices(C, E1, E2, 2, COMM, **({} if budget is None else {"budget": budget})):
        lhs = ext.value(t.face(1))
        rhs = g.D.compose(ext.value(t.face(0)), ext.value(t.face(2)))
        rep.add("2-simplex", lhs == rhs, t)
        rep.tally("commutative 2-simplices")
    if strict and not rep.ok:
        raise NotFunctorial(f"extension check {rep.failures()[0][0]!r} fails", rep)
    return h, rep


def extend_full(C, E1, E2, g, i_max, check_choices=True, strict=True, budget=None):
    h, rep_cart = extend_cart(C, E1, E2, g, i_max, check_choices, strict, budget)
    G, rep_comm = extend_comm(C, E1, E2, h, check_choices, strict, budget)
    rep = Report(stages=[rep_cart, rep_comm])
    _restriction_checks(rep, G, g, budget)
    if strict and not rep.ok:
        raise NotFunctorial(f"extension check {rep.failures()[0][0]!r} fails", rep)
    return G, rep
