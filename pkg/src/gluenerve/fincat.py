"""Finite category backends: posets, finite sets, and explicit tables.

Limits are found by brute force over cones. Every algorithm here is written
against the small FinCategory interface (objects, hom, identity, compose),
with two shortcuts: posets build pullbacks from meets and full categories of
finite sets build them from fiber products.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .errors import (
    HypothesisFailed,
    IllTypedComposite,
    MissingIdentity,
    MissingPullback,
    NotAssociative,
    NotCommuting,
    UnknownObject,
    UsageError,
)

UNBOUNDED = None
TRUNCATION_CAP = 6


@dataclass(frozen=True)
class Morphism:
    source: object
    target: object
    label: object = None

    def __repr__(self):
        if self.label is None:
            return f"{self.source!r}->{self.target!r}"
        return f"{self.label!r}:{self.source!r}->{self.target!r}"


@dataclass(frozen=True)
class Square:
    """top: x->y, left: x->z, right: y->w, bottom: z->w."""

    top: Morphism
    left: Morphism
    right: Morphism
    bottom: Morphism

    @property
    def corners(self):
        return (self.top.source, self.top.target, self.left.target, self.right.target)


@dataclass(frozen=True)
class Check:
    ok: bool
    counterexample: object = None
    reason: str = ""

    def __bool__(self):
        return self.ok


class FinCategory:
    kind = "table"

    def __init__(self, objects):
        self.objects = tuple(objects)
        self._objset = set(self.objects)
        self._pullbacks = {}

    # interface -----------------------------------------------------------
    def hom(self, a, b):
        raise NotImplementedError

    def identity(self, a):
        raise NotImplementedError

    def compose(self, g, f):
        """g after f."""
        raise NotImplementedError

    # generic -------------------------------------------------------------
    def check_object(self, a):
        if a not in self._objset:
            raise UnknownObject(f"unknown object {a!r}", a)

    def morphisms(self):
        for a in self.objects:
            for b in self.objects:
                yield from self.hom(a, b)

    def composable_pairs(self):
        for f in self.morphisms():
            for c in self.objects:
                for g in self.hom(f.target, c):
                    yield g, f

    def is_identity(self, f):
        return f.source == f.target and f == self.identity(f.source)

    def inverse(self, f):
        for g in self.hom(f.target, f.source):
            if self.compose(g, f) == self.identity(f.source) and self.compose(f, g) == self.identity(f.target):
                return g
        return None

    def is_iso(self, f):
        return self.inverse(f) is not None

    def commutes(self, sq):
        return self.compose(sq.right, sq.top) == self.compose(sq.bottom, sq.left)

    def cones(self, f, g, apex=None):
        """Pairs (a, b) out of an apex with f a = g b, for a cospan f: y->w, g: z->w."""
        if f.target != g.target:
            raise UsageError("not a cospan", (f, g))
        apexes = self.objects if apex is None else (apex,)
        for v in apexes:
            for a in self.hom(v, f.source):
                fa = self.compose(f, a)
                for b in self.hom(v, g.source):
                    if self.compose(g, b) == fa:
                        yield v, a, b

    def _universal(self, f, g, v, a, b):
        for u_src in self.objects:
            competing = {(a2, b2) for _, a2, b2 in self.cones(f, g, u_src)}
            images = set()
            for u in self.hom(u_src, v):
                images.add((self.compose(a, u), self.compose(b, u)))
            if len(images) != len(self.hom(u_src, v)) or images != competing:
                return False
        return True

    def is_pullback_square(self, sq):
        """Exhaustive universal-property test of the cone (top, left)."""
        if not self.commutes(sq):
            raise NotCommuting("square does not commute", sq)
        return self._universal(sq.right, sq.bottom, sq.top.source, sq.top, sq.left)

    def all_pullbacks(self, f, g):
        return [(v, a, b) for v, a, b in self.cones(f, g) if self._universal(f, g, v, a, b)]

    def find_pullback(self, f, g):
        for v, a, b in self.cones(f, g):
            if self._universal(f, g, v, a, b):
                return v, a, b
        return None

    def pullback(self, f, g):
        """First pullback cone (v, a: v->y, b: v->z) of f: y->w <- z: g."""
        key = (f, g)
        if key not in self._pullbacks:
            self._pullbacks[key] = self.find_pullback(f, g)
        pb = self._pullbacks[key]
        if pb is None:
            raise MissingPullback(f"no pullback of {f!r} and {g!r}", (f, g))
        return pb

    def mediate(self, cone, a2, b2):
        """The unique u with a u = a2, b u = b2 into a pullback cone."""
        v, a, b = cone
        for u in self.hom(a2.source, v):
            if self.compose(a, u) == a2 and self.compose(b, u) == b2:
                return u
        return None

    def has_pullback(self, f, g):
        try:
            self.pullback(f, g)
            return True
        except MissingPullback:
            return False

    def cospans(self):
        for w in self.objects:
            into = [f for a in self.objects for f in self.hom(a, w)]
            for f in into:
                for g in into:
                    yield f, g

    def limit(self, nodes, arrows):
        """Limit of a finite diagram.

        ``nodes`` maps node -> object, ``arrows`` is a list of
        (i, j, morphism nodes[i] -> nodes[j]). Returns (apex, legs) or None.
        """
        keys = list(nodes)
        cones = list(self._diagram_cones(nodes, arrows))
        for v, legs in cones:
            if self._is_limit_cone(nodes, arrows, v, legs, keys):
                return v, legs
        return None

    def _diagram_cones(self, nodes, arrows, apex=None):
        keys = list(nodes)
        apexes = self.objects if apex is None else (apex,)
        for v in apexes:
            for choice in itertools.product(*(self.hom(v, nodes[k]) for k in keys)):
                legs = dict(zip(keys, choice))
                if all(self.compose(m, legs[i]) == legs[j] for i, j, m in arrows):
                    yield v, legs

    def _is_limit_cone(self, nodes, arrows, v, legs, keys=None):
        keys = list(nodes) if keys is None else keys
        for u_src in self.objects:
            competing = {tuple(l[k] for k in keys) for _, l in self._diagram_cones(nodes, arrows, u_src)}
            homs = self.hom(u_src, v)
            images = {tuple(self.compose(legs[k], u) for k in keys) for u in homs}
            if len(images) != len(homs) or images != competing:
                return False
        return True

    def is_limit_cone(self, nodes, arrows, v, legs):
        return self._is_limit_cone(nodes, arrows, v, legs)

    def terminal(self):
        for t in self.objects:
            if all(len(self.hom(a, t)) == 1 for a in self.objects):
                return t
        return None

    def check_axioms(self):
        """Identities are two-sided units, composition is typed and associative."""
        for a in self.objects:
            i = self.identity(a)
            if i.source != a or i.target != a:
                raise MissingIdentity(f"identity of {a!r} has the wrong type", a)
        for f in self.morphisms():
            if self.compose(self.identity(f.target), f) != f or self.compose(f, self.identity(f.source)) != f:
                raise MissingIdentity(f"identity law fails at {f!r}", f)
        for g, f in self.composable_pairs():
            h = self.compose(g, f)
            if h.source != f.source or h.target != g.target:
                raise IllTypedComposite(f"{g!r} o {f!r} has the wrong type", (g, f))
        for g, f in self.composable_pairs():
            gf = self.compose(g, f)
            for c in self.objects:
                for h in self.hom(g.target, c):
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f):
                        raise NotAssociative("composition is not associative", (h, g, f))
        return True


class PosetCategory(FinCategory):
    kind = "poset"

    def __init__(self, P):
        super().__init__(P.elements)
        self.poset = P

    def hom(self, a, b):
        self.check_object(a)
        self.check_object(b)
        return (Morphism(a, b),) if self.poset.leq(a, b) else ()

    def identity(self, a):
        self.check_object(a)
        return Morphism(a, a)

    def compose(self, g, f):
        if f.target != g.source:
            raise IllTypedComposite(f"cannot compose {g!r} after {f!r}", (g, f))
        return Morphism(f.source, g.target)

    def arrow(self, a, b):
        if not self.poset.leq(a, b):
            raise UsageError(f"{a!r} is not below {b!r}", (a, b))
        return Morphism(a, b)

    def square(self, x, y, z, w):
        a = self.arrow
        return Square(a(x, y), a(x, z), a(y, w), a(z, w))

    def find_pullback(self, f, g):
        m = self.poset.meet(f.source, g.source)
        if m is None:
            return None
        return m, Morphism(m, f.source), Morphism(m, g.source)

    def mediate(self, cone, a2, b2):
        return Morphism(a2.source, cone[0]) if self.poset.leq(a2.source, cone[0]) else None

    def limit(self, nodes, arrows):
        m = self.poset.meet_all(set(nodes.values()))
        if m is None:
            return None
        return m, {k: Morphism(m, x) for k, x in nodes.items()}


class FinSetCategory(FinCategory):
    """Finite sets and functions. Morphism labels are value tables (tuples of
    target positions, aligned with the source's element order).

    With ``functions=None`` the category is the full subcategory on the
    given sets; otherwise only the listed functions and identities, which
    must be closed under composition.
    """

    kind = "finset"

    def __init__(self, sets, functions=None):
        super().__init__(list(sets))
        self.sets = {k: tuple(v) for k, v in sets.items()}
        self.full = functions is None
        self._homs = {}
        if functions is not None:
            homs = {}
            for a in self.objects:
                homs[(a, a)] = {self.identity(a)}
            for f in functions:
                f = self.function(*f) if not isinstance(f, Morphism) else f
                homs.setdefault((f.source, f.target), set()).add(f)
            for key, fs in homs.items():
                self._homs[key] = tuple(sorted(fs, key=lambda m: m.label))
            for g, f in list(self.composable_pairs()):
                h = self.compose(g, f)
                if h not in self._homs.get((h.source, h.target), ()):
                    raise IllTypedComposite(f"composite {h!r} is not listed", (g, f))

    def size(self, a):
        return len(self.sets[a])

    def function(self, source, target, values):
        """Morphism from a list of target elements (or a mapping)."""
        self.check_object(source)
        self.check_object(target)
        S, T = self.sets[source], self.sets[target]
        if isinstance(values, dict):
            values = [values[x] for x in S]
        values = list(values)
        if len(values) != len(S):
            raise UsageError("value table has the wrong length", values)
        try:
            table = tuple(T.index(v) for v in values)
        except ValueError:
            raise UsageError("value outside the target set", values) from None
        return Morphism(source, target, table)

    def hom(self, a, b):
        key = (a, b)
        if key not in self._homs:
            self.check_object(a)
            self.check_object(b)
            if not self.full:
                return ()
            n, m = self.size(a), self.size(b)
            self._homs[key] = tuple(Morphism(a, b, t) for t in itertools.product(range(m), repeat=n))
        return self._homs[key]

    def identity(self, a):
        self.check_object(a)
        return Morphism(a, a, tuple(range(self.size(a))))

    def compose(self, g, f):
        if f.target != g.source:
            raise IllTypedComposite(f"cannot compose {g!r} after {f!r}", (g, f))
        return Morphism(f.source, g.target, tuple(g.label[i] for i in f.label))

    def is_iso(self, f):
        return self.size(f.source) == self.size(f.target) and len(set(f.label)) == len(f.label)

    def inverse(self, f):
        if not self.is_iso(f):
            return None
        inv = [0] * len(f.label)
        for i, j in enumerate(f.label):
            inv[j] = i
        return Morphism(f.target, f.source, tuple(inv))

    def is_injective(self, f):
        return len(set(f.label)) == len(f.label)

    def is_surjective(self, f):
        return set(f.label) == set(range(self.size(f.target)))

    def find_pullback(self, f, g):
        if not self.full:
            return super().find_pullback(f, g)
        fiber = [(i, j) for i in range(self.size(f.source)) for j in range(self.size(g.source))
                 if f.label[i] == g.label[j]]
        for v in self.objects:
            if self.size(v) == len(fiber):
                a = Morphism(v, f.source, tuple(i for i, _ in fiber))
                b = Morphism(v, g.source, tuple(j for _, j in fiber))
                return v, a, b
        return None

    def mediate(self, cone, a2, b2):
        v, a, b = cone
        where = {}
        for k in range(self.size(v)):
            where.setdefault((a.label[k], b.label[k]), []).append(k)
        table = []
        for e in range(self.size(a2.source)):
            hit = where.get((a2.label[e], b2.label[e]), [])
            if len(hit) != 1:
                return None
            table.append(hit[0])
        return Morphism(a2.source, v, tuple(table))


class TableCategory(FinCategory):
    """A category given by named morphisms and a composition table."""

    def __init__(self, objects, morphisms, identities, composition):
        super().__init__(objects)
        self._mor = {}
        self._homs = {}
        for name, s, t in morphisms:
            for o in (s, t):
                if o not in self._objset:
                    raise UnknownObject(f"unknown object {o!r}", o)
            if name in self._mor:
                raise UsageError(f"duplicate morphism {name!r}", name)
            m = Morphism(s, t, name)
            self._mor[name] = m
            self._homs.setdefault((s, t), []).append(m)
        self._homs = {k: tuple(v) for k, v in self._homs.items()}
        self._id = {}
        for a in self.objects:
            if a not in identities:
                raise MissingIdentity(f"no identity for {a!r}", a)
            m = self._mor.get(identities[a])
            if m is None or m.source != a or m.target != a:
                raise MissingIdentity(f"identity of {a!r} is not an endomorphism of it", a)
            self._id[a] = m
        self._comp = {}
        for g, f, h in composition:
            G, F, H = self._mor[g], self._mor[f], self._mor[h]
            if F.target != G.source or H.source != F.source or H.target != G.target:
                raise IllTypedComposite(f"{g} o {f} = {h} is ill typed", (g, f, h))
            self._comp[(G, F)] = H
        for g, f in self.composable_pairs():
            if (g, f) in self._comp:
                continue
            if self.is_identity(g):
                self._comp[(g, f)] = f
            elif self.is_identity(f):
                self._comp[(g, f)] = g
            else:
                raise IllTypedComposite(f"composite {g.label} o {f.label} not given", (g, f))
        self.check_axioms()

    def morphism(self, name):
        return self._mor[name]

    def hom(self, a, b):
        return self._homs.get((a, b), ())

    def identity(self, a):
        return self._id[a]

    def compose(self, g, f):
        try:
            return self._comp[(g, f)]
        except KeyError:
            raise IllTypedComposite(f"cannot compose {g!r} after {f!r}", (g, f)) from None


def validate_category(data):
    """Build a checked category from an interchange mapping."""
    kind = data.get("kind", "table")
    if kind == "finset":
        fns = data.get("functions")
        sets = {k: tuple(v) for k, v in data["sets"].items()}
        C = FinSetCategory(sets, None)
        if fns is not None:
            C = FinSetCategory(sets, [C.function(f["source"], f["target"], f["values"]) for f in fns])
        C.check_axioms()
        return C
    if kind == "poset":
        from .poset import Poset

        return PosetCategory(Poset(data["elements"], [tuple(p) for p in data.get("covers", [])]))
    mors = [(m["name"], m["source"], m["target"]) for m in data["morphisms"]]
    return TableCategory(data["objects"], mors, data["identities"], [tuple(t) for t in data.get("composition", [])])


# edge classes -------------------------------------------------------------


class EdgeClass:
    """A set of morphisms that always contains every identity."""

    def __init__(self, C, members=()):
        self.category = C
        ids = {C.identity(a) for a in C.objects}
        self.members = frozenset(members) | ids

    def __contains__(self, f):
        return f in self.members

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __and__(self, other):
        return EdgeClass(self.category, self.members & other.members)

    def hom(self, a, b):
        return tuple(f for f in self.category.hom(a, b) if f in self.members)

    @classmethod
    def where(cls, C, pred):
        return cls(C, [f for f in C.morphisms() if pred(f)])

    @classmethod
    def everything(cls, C):
        return cls(C, C.morphisms())

    @classmethod
    def identities(cls, C):
        return cls(C, ())


def column_edges(C):
    """In a poset of (row, col) pairs: morphisms that keep the column."""
    return EdgeClass.where(C, lambda f: f.source[1] == f.target[1])


def row_edges(C):
    """In a poset of (row, col) pairs: morphisms that keep the row."""
    return EdgeClass.where(C, lambda f: f.source[0] == f.target[0])


# over-categories -------------------------------------------------------------


@dataclass
class Functor:
    source: FinCategory
    target: FinCategory
    on_objects: object
    on_morphisms: object

    def obj(self, a):
        f = self.on_objects
        return f[a] if isinstance(f, dict) else f(a)

    def mor(self, m):
        f = self.on_morphisms
        return f[m] if isinstance(f, dict) else f(m)


def identity_functor(C):
    return Functor(C, C, lambda a: a, lambda m: m)


class OverCategory(FinCategory):
    """Objects are morphisms into ``c``; a morphism f -> g is u with g u = f."""

    kind = "over"

    def __init__(self, C, c):
        C.check_object(c)
        super().__init__([f for a in C.objects for f in C.hom(a, c)])
        self.base = C
        self.apex = c

    def hom(self, f, g):
        C = self.base
        return tuple(Morphism(f, g, u) for u in C.hom(f.source, g.source) if C.compose(g, u) == f)

    def identity(self, f):
        return Morphism(f, f, self.base.identity(f.source))

    def compose(self, g, f):
        if f.target != g.source:
            raise IllTypedComposite(f"cannot compose {g!r} after {f!r}", (g, f))
        return Morphism(f.source, g.target, self.base.compose(g.label, f.label))


@dataclass(frozen=True)
class Overcategory:
    category: OverCategory
    projection: Functor


def overcategory(C, c):
    D = OverCategory(C, c)
    proj = Functor(D, C, lambda f: f.source, lambda m: m.label)
    return Overcategory(D, proj)


@dataclass
class LimitReport:
    checks: list = field(default_factory=list)
    terminal: object = None
    products: dict = field(default_factory=dict)
    pullbacks: dict = field(default_factory=dict)
    equalizers: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def add(self, name, ok, witness=None):
        self.checks.append(Check(ok, witness, name))

    def failures(self):
        return [c for c in self.checks if not c.ok]


def missing_pullback(C):
    """First cospan of C with no pullback, or None."""
    for f, g in C.cospans():
        if not C.has_pullback(f, g):
            return f, g
    return None


def check_overcategory_limits(C, c, functor=None, require_pullbacks=True):
    """Check that C/c has a terminal object, binary products, pullbacks and
    equalizers, and that they go to limits under the projection to C and
    under the functor induced by ``functor`` (default: identity of C).
    """
    if require_pullbacks:
        bad = missing_pullback(C)
        if bad is not None:
            raise HypothesisFailed("pullbacks", f"cospan {bad[0]!r}, {bad[1]!r} has no pullback", bad)
    F = identity_functor(C) if functor is None else functor
    over = overcategory(C, c)
    D = over.category
    D2 = OverCategory(F.target, F.obj(c))
    report = LimitReport()

    def induced_obj(f):
        return F.mor(f)

    def induced_mor(m):
        return Morphism(F.mor(m.source), F.mor(m.target), F.mor(m.label))

    t = C.identity(c)
    term = t if all(len(D.hom(f, t)) == 1 for f in D.objects) else None
    report.terminal = term
    report.add("terminal", term is not None, c)

    def record(table, name, key, nodes, arrows):
        lim = D.limit(nodes, arrows)
        table[key] = None if lim is None else lim[0]
        report.add(name, lim is not None, key)
        if lim is None:
            return
        v, legs = lim
        # projection to C: connected shapes must stay limits
        if arrows:
            cnodes = {k: x.source for k, x in nodes.items()}
            carrows = [(i, j, m.label) for i, j, m in arrows]
            clegs = {k: l.label for k, l in legs.items()}
            report.add(name + "-projected", C.is_limit_cone(cnodes, carrows, v.source, clegs), key)
        inodes = {k: induced_obj(x) for k, x in nodes.items()}
        iarrows = [(i, j, induced_mor(m)) for i, j, m in arrows]
        ilegs = {k: induced_mor(l) for k, l in legs.items()}
        report.add(name + "-preserved", D2.is_limit_cone(inodes, iarrows, induced_obj(v), ilegs), key)

    objs = D.objects
    for a, b in itertools.combinations_with_replacement(objs, 2):
        record(report.products, "product", (a, b), {0: a, 1: b}, [])
    for w in objs:
        into = [m for a in objs for m in D.hom(a, w)]
        for f, g in itertools.combinations_with_replacement(into, 2):
            record(report.pullbacks, "pullback", (f, g), {0: f.source, 1: g.source, 2: w}, [(0, 2, f), (1, 2, g)])
    for a in objs:
        for b in objs:
            for f, g in itertools.combinations(D.hom(a, b), 2):
                record(report.equalizers, "equalizer", (f, g), {0: a, 1: b}, [(0, 1, f), (0, 1, g)])
    return report


# truncation, admissibility, cofilteredness ----------------------------------


def diagonal(C, f):
    """x -> x *_y x for f: x -> y, together with the chosen pullback cone."""
    cone = C.pullback(f, f)
    x = f.source
    d = C.mediate(cone, C.identity(x), C.identity(x))
    if d is None:
        raise MissingPullback("diagonal does not factor through the chosen pullback", f)
    return d


def truncation_level(C, f, cap=TRUNCATION_CAP):
    """Least n >= -2 with f n-truncated; None (unbounded) past ``cap``."""
    level = -2
    g = f
    while level <= cap:
        if C.is_iso(g):
            return level
        g = diagonal(C, g)
        level += 1
    return UNBOUNDED


def _some_leg_in(C, members, b):
    """Pullbacks are only defined up to isomorphism: is some b o u in E?"""
    v = b.source
    for v2 in C.objects:
        for u in C.hom(v2, v):
            if C.is_iso(u) and C.compose(b, u) in members:
                return True
    return False


def check_admissible(C, E):
    if not isinstance(E, EdgeClass):
        E = EdgeClass(C, E)
    members = E.members
    for a in C.objects:
        if C.identity(a) not in members:
            return Check(False, C.identity(a), "identity")
    for f in members:
        w = f.target
        for z in C.objects:
            for g in C.hom(z, w):
                try:
                    _, a, b = C.pullback(f, g)
                except MissingPullback:
                    continue
                if b not in members and not _some_leg_in(C, members, b):
                    return Check(False, (f, g, b), "pullback-stability")
    for p in members:
        for a in C.objects:
            for q in C.hom(a, p.source):
                if C.compose(p, q) in members and q not in members:
                    return Check(False, (p, q), "right-cancellation")
    return Check(True)


def check_cofiltered(C):
    objs = C.objects
    if not objs:
        return Check(False, None, "empty")
    for x, y in itertools.combinations(objs, 2):
        if not any(C.hom(w, x) and C.hom(w, y) for w in objs):
            return Check(False, (x, y), "pair")
    for x in objs:
        for y in objs:
            for f, g in itertools.combinations(C.hom(x, y), 2):
                ok = any(
                    C.compose(f, h) == C.compose(g, h)
                    for w in objs
                    for h in C.hom(w, x)
                )
                if not ok:
                    return Check(False, (f, g), "parallel-pair")
    return Check(True)
