"""Finite posets, lattice operations, up-set lattices and exact squares.

A Poset keeps its elements in a fixed tuple and stores the order as two
lists of bitmasks (``_up[i]`` has bit j set iff element i <= element j).
The order is always the reflexive-transitive closure of whatever was given,
so every comparison is a single bit test.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    CycleDetected,
    DuplicateElement,
    InvalidSquare,
    NotComparable,
    SizeBudgetExceeded,
    UnknownElement,
)

UPSET_BUDGET = 20


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    def __init__(self, elements, pairs=()):
        elements = tuple(elements)
        index = {}
        for i, e in enumerate(elements):
            if e in index:
                raise DuplicateElement(f"duplicate element {e!r}", e)
            index[e] = i
        n = len(elements)
        up = [1 << i for i in range(n)]
        for x, y in pairs:
            if x not in index:
                raise UnknownElement(f"unknown element {x!r}", x)
            if y not in index:
                raise UnknownElement(f"unknown element {y!r}", y)
            up[index[x]] |= 1 << index[y]
        # Warshall on bitmasks
        for k in range(n):
            bit = 1 << k
            uk = up[k]
            for i in range(n):
                if up[i] & bit:
                    up[i] |= uk
        down = [0] * n
        for i in range(n):
            for j in _bits(up[i]):
                down[j] |= 1 << i
        for i in range(n):
            both = up[i] & down[i] & ~(1 << i)
            if both:
                j = next(_bits(both))
                raise CycleDetected(
                    f"{elements[i]!r} and {elements[j]!r} are mutually below each other",
                    (elements[i], elements[j]),
                )
        self.elements = elements
        self._index = index
        self._up = up
        self._down = down

    @classmethod
    def from_function(cls, elements, leq):
        """Build from a predicate that is already a partial order (not re-closed)."""
        elements = tuple(elements)
        P = cls.__new__(cls)
        index = {}
        for i, e in enumerate(elements):
            if e in index:
                raise DuplicateElement(f"duplicate element {e!r}", e)
            index[e] = i
        n = len(elements)
        up = [0] * n
        down = [0] * n
        for i, x in enumerate(elements):
            for j, y in enumerate(elements):
                if i == j or leq(x, y):
                    up[i] |= 1 << j
                    down[j] |= 1 << i
        for i in range(n):
            if up[i] & down[i] & ~(1 << i):
                j = next(_bits(up[i] & down[i] & ~(1 << i)))
                raise CycleDetected("relation is not antisymmetric", (elements[i], elements[j]))
        P.elements, P._index, P._up, P._down = elements, index, up, down
        return P

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self._index

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return set(self.elements) == set(other.elements) and self.relation() == other.relation()

    def __hash__(self):
        return hash((frozenset(self.elements), len(self.relation())))

    def __repr__(self):
        return f"Poset({len(self)} elements)"

    def index(self, x):
        try:
            return self._index[x]
        except (KeyError, TypeError):
            raise UnknownElement(f"unknown element {x!r}", x) from None

    def leq(self, x, y):
        return bool(self._up[self.index(x)] >> self.index(y) & 1)

    def lt(self, x, y):
        return x != y and self.leq(x, y)

    def comparable(self, x, y):
        return self.leq(x, y) or self.leq(y, x)

    def relation(self):
        """All pairs (x, y) with x <= y."""
        E = self.elements
        return frozenset((E[i], E[j]) for i in range(len(E)) for j in _bits(self._up[i]))

    def _decode(self, mask):
        return [self.elements[i] for i in _bits(mask)]

    def up(self, x):
        return self._decode(self._up[self.index(x)])

    def down(self, x):
        return self._decode(self._down[self.index(x)])

    def covers(self):
        """Hasse covering pairs (x, y): x < y with nothing strictly between."""
        E = self.elements
        out = []
        for i in range(len(E)):
            above = self._up[i] & ~(1 << i)
            for j in _bits(above):
                between = above & self._down[j] & ~(1 << j)
                if not between:
                    out.append((E[i], E[j]))
        return out

    def minimal(self, subset=None):
        S = list(self.elements if subset is None else subset)
        mask = self.mask(S)
        return [x for x in S if not (self._down[self.index(x)] & mask & ~(1 << self.index(x)))]

    def maximal(self, subset=None):
        S = list(self.elements if subset is None else subset)
        mask = self.mask(S)
        return [x for x in S if not (self._up[self.index(x)] & mask & ~(1 << self.index(x)))]

    def mask(self, subset):
        m = 0
        for x in subset:
            m |= 1 << self.index(x)
        return m

    def meet(self, x, y):
        """Greatest lower bound, or None."""
        lower = self._down[self.index(x)] & self._down[self.index(y)]
        return self._greatest(lower)

    def join(self, x, y):
        """Least upper bound, or None."""
        upper = self._up[self.index(x)] & self._up[self.index(y)]
        return self._least(upper)

    def meet_all(self, xs):
        xs = list(xs)
        if not xs:
            return self._greatest((1 << len(self)) - 1)
        lower = (1 << len(self)) - 1
        for x in xs:
            lower &= self._down[self.index(x)]
        return self._greatest(lower)

    def join_all(self, xs):
        upper = (1 << len(self)) - 1
        for x in xs:
            upper &= self._up[self.index(x)]
        return self._least(upper)

    def _greatest(self, mask):
        for i in _bits(mask):
            if self._down[i] & mask == mask:
                return self.elements[i]
        return None

    def _least(self, mask):
        for i in _bits(mask):
            if self._up[i] & mask == mask:
                return self.elements[i]
        return None

    def is_lattice(self):
        if not self.elements:
            return False
        E = self.elements
        return all(
            self.meet(x, y) is not None and self.join(x, y) is not None
            for x, y in itertools.combinations(E, 2)
        )

    def is_upset(self, subset):
        m = self.mask(subset)
        return all(self._up[i] & m == self._up[i] for i in _bits(m))

    def is_downset(self, subset):
        m = self.mask(subset)
        return all(self._down[i] & m == self._down[i] for i in _bits(m))

    def subposet(self, subset):
        """Full sub-poset, elements kept in this poset's order."""
        keep = self.mask(subset)
        S = self._decode(keep)
        sub = Poset.__new__(Poset)
        idx = {x: k for k, x in enumerate(S)}
        old = [self.index(x) for x in S]
        up = []
        down = []
        for i in old:
            up.append(sum(1 << idx[self.elements[j]] for j in _bits(self._up[i] & keep)))
            down.append(sum(1 << idx[self.elements[j]] for j in _bits(self._down[i] & keep)))
        sub.elements, sub._index, sub._up, sub._down = tuple(S), idx, up, down
        return sub

    def relabel(self, f):
        E = tuple(f(x) for x in self.elements)
        new = Poset.__new__(Poset)
        index = {}
        for i, e in enumerate(E):
            if e in index:
                raise DuplicateElement(f"relabelling collides on {e!r}", e)
            index[e] = i
        new.elements, new._index = E, index
        new._up, new._down = list(self._up), list(self._down)
        return new

    def linear_extension(self):
        """Elements sorted so that x < y implies x comes first (stable on ties)."""
        return sorted(self.elements, key=lambda x: (bin(self._down[self.index(x)]).count("1"), self.index(x)))


def validate_poset(elements, pairs=()):
    return Poset(elements, pairs)


def chain(n):
    """The ordinal [n] = {0 < 1 < ... < n}."""
    return Poset.from_function(range(n + 1), lambda a, b: a <= b)


def product(P, Q):
    E = [(x, y) for x in P.elements for y in Q.elements]
    return Poset.from_function(E, lambda a, b: P.leq(a[0], b[0]) and Q.leq(a[1], b[1]))


def grid(n, m=None):
    """[n] x [m] with the product order; points are (row, col) tuples."""
    return product(chain(n), chain(n if m is None else m))


@dataclass(frozen=True)
class LatticeOps:
    meet: object
    join: object
    distributive_witness: bool | None = None


def lattice_ops(P, x, y, check_distributive=False):
    dist = None
    if check_distributive:
        dist = is_distributive(P)
    return LatticeOps(P.meet(x, y), P.join(x, y), dist)


def is_distributive(P):
    """p v (q ^ r) == (p v q) ^ (p v r) for every triple where all terms exist."""
    E = P.elements
    for p, q, r in itertools.product(E, repeat=3):
        qr = P.meet(q, r)
        pq, pr = P.join(p, q), P.join(p, r)
        if qr is None or pq is None or pr is None:
            return False
        lhs = P.join(p, qr)
        rhs = P.meet(pq, pr)
        if lhs is None or rhs is None or lhs != rhs:
            return False
    return True


def interval(P, x, y):
    """Full sub-poset {z : x <= z <= y}; empty when x is not below y."""
    i, j = P.index(x), P.index(y)
    return P.subposet(P._decode(P._up[i] & P._down[j]))


def upper_set(P, x):
    return P.subposet(P.up(x))


def lower_set(P, x):
    return P.subposet(P.down(x))


def upsets(P, include_empty=False, budget=UPSET_BUDGET):
    """All up-closed subsets of P as frozensets, largest first."""
    if len(P) > budget:
        raise SizeBudgetExceeded(f"{len(P)} elements exceeds the up-set budget {budget}")
    order = list(reversed(P.linear_extension()))
    strict_up = [P._up[P.index(x)] & ~(1 << P.index(x)) for x in order]
    bits = [1 << P.index(x) for x in order]
    found = []

    def rec(k, mask):
        if k == len(order):
            found.append(mask)
            return
        rec(k + 1, mask)
        if strict_up[k] & mask == strict_up[k]:
            rec(k + 1, mask | bits[k])

    rec(0, 0)
    out = []
    for m in found:
        if m or include_empty:
            out.append(frozenset(P._decode(m)))
    out.sort(key=lambda s: (-len(s), sorted(P.index(x) for x in s)))
    return out


@dataclass(frozen=True)
class UpSetLattice:
    base: Poset
    lattice: Poset
    embed: dict

    def __call__(self, p):
        return self.embed[p]


def upset_lattice(P, include_empty=False, budget=UPSET_BUDGET):
    """Non-empty up-sets ordered by inverse inclusion, with the principal embedding."""
    elements = upsets(P, include_empty=include_empty, budget=budget)
    L = Poset.from_function(elements, lambda a, b: a >= b)
    embed = {p: frozenset(P.up(p)) for p in P.elements}
    return UpSetLattice(P, L, embed)


def _check_square(P, square):
    a, b, c, d = square
    for x in square:
        P.index(x)
    if not (P.leq(a, b) and P.leq(a, c) and P.leq(b, d) and P.leq(c, d)):
        raise InvalidSquare("square inequalities a<=b, a<=c, b<=d, c<=d do not hold", square)


def is_pullback_in_poset(P, square):
    a, b, c, _ = square
    _check_square(P, square)
    lower = P._down[P.index(b)] & P._down[P.index(c)]
    return lower & P._down[P.index(a)] == lower


def is_pushout_in_poset(P, square):
    _, b, c, d = square
    _check_square(P, square)
    upper = P._up[P.index(b)] & P._up[P.index(c)]
    return upper & P._up[P.index(d)] == upper


def is_exact_square(P, square):
    """Square (a, b, c, d) with a<=b, a<=c, b<=d, c<=d: pullback and pushout."""
    return is_pullback_in_poset(P, square) and is_pushout_in_poset(P, square)


@dataclass(frozen=True)
class FactorStep:
    removed: object
    square: tuple


def factor_exact_pullbacks(P, Q, Qp):
    """Split Q -> Qp (Q a superset of Qp, both up-sets of P) into exact squares.

    Each step drops the least (in P's element order) member of Q - Qp that is
    minimal in the current up-set. Step j is the square
    (Q_j, principal(x_j), Q_{j+1}, principal(x_j) - {x_j}) of the up-set
    lattice; the last corner may be empty.
    """
    Q, Qp = frozenset(Q), frozenset(Qp)
    for S in (Q, Qp):
        if not P.is_upset(S):
            raise InvalidSquare("argument is not an up-set", S)
    if not Qp <= Q:
        raise NotComparable("first up-set must contain the second", (Q, Qp))
    steps = []
    cur = Q
    while cur != Qp:
        candidates = [x for x in P.minimal(cur) if x not in Qp]
        x = min(candidates, key=P.index)
        principal = frozenset(P.up(x))
        nxt = cur - {x}
        steps.append(FactorStep(x, (cur, principal, nxt, principal - {x})))
        cur = nxt
    return steps


# enumeration up to isomorphism -----------------------------------------------


def _canonical(up):
    """Canonical form of a relation given as up-bitmasks on range(k)."""
    k = len(up)
    down = [0] * k
    for i in range(k):
        for j in _bits(up[i]):
            down[j] |= 1 << i
    inv = [(bin(down[i]).count("1"), bin(up[i]).count("1")) for i in range(k)]
    keys = sorted(set(inv))
    blocks = [[i for i in range(k) if inv[i] == key] for key in keys]
    best = None
    for parts in itertools.product(*(itertools.permutations(b) for b in blocks)):
        order = [i for part in parts for i in part]
        pos = {v: n for n, v in enumerate(order)}
        form = tuple(sum(1 << pos[j] for j in _bits(up[v])) for v in order)
        if best is None or form < best:
            best = form
    return best


def posets_up_to_iso(k):
    """One representative relation (tuple of up-bitmasks) per isomorphism class."""
    level = {()}
    for size in range(k):
        nxt = set()
        for up in level:
            P = list(up)
            # the new element `size` goes on top of a down-set of the current poset
            for ds in _downsets(P):
                new = [(m | (1 << size)) if (ds >> i) & 1 else m for i, m in enumerate(P)]
                new.append(1 << size)
                nxt.add(_canonical(new))
        level = nxt
    return sorted(level)


def _downsets(up):
    k = len(up)
    out = []
    for mask in range(1 << k):
        if all(not (mask >> i) & 1 or all((mask >> j) & 1 for j in range(k) if (up[j] >> i) & 1) for i in range(k)):
            out.append(mask)
    return out


def _from_masks(up, names=None):
    names = list(range(len(up))) if names is None else names
    return Poset.from_function(names, lambda a, b: bool((up[names.index(a)] >> names.index(b)) & 1))


def posets(k):
    """All posets with k elements up to isomorphism, elements 0..k-1."""
    return [_from_masks(up) for up in posets_up_to_iso(k)]


def lattices(size):
    """All lattices with exactly ``size`` elements up to isomorphism.

    Elements are "0" (bottom), "1" (top) and a0, a1, ... in between.
    """
    if size <= 0:
        return []
    if size == 1:
        return [Poset(["0"])]
    out = []
    for inner in posets_up_to_iso(size - 2):
        names = ["0"] + [f"a{i}" for i in range(size - 2)] + ["1"]
        pairs = [("0", x) for x in names[1:]] + [(x, "1") for x in names[:-1]]
        for i, m in enumerate(inner):
            pairs += [(names[i + 1], names[j + 1]) for j in _bits(m)]
        L = Poset(names, pairs)
        if L.is_lattice():
            out.append(L)
    return out


def random_poset(k, density=0.3, rng=None):
    """Random poset on 0..k-1: each pair i < j is related with the given probability."""
    import random

    rng = rng if rng is not None else random.Random(0)
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k) if rng.random() < density]
    return Poset(range(k), pairs)


def factorization_violations(P, Q, Qp):
    """Steps of factor_exact_pullbacks that are not exact, plus a count mismatch flag."""
    L = upset_lattice(P, include_empty=True).lattice
    steps = factor_exact_pullbacks(P, Q, Qp)
    bad = [s for s in steps if not is_exact_square(L, s.square)]
    return bad, len(steps) != len(frozenset(Q) - frozenset(Qp))


def factorization_suite(count=100, max_size=8, seed=0, pairs_per_poset=5):
    """Random posets and random nested up-set pairs; returns (checked, violations)."""
    import random

    rng = random.Random(seed)
    checked, violations = 0, []
    for _ in range(count):
        P = random_poset(rng.randint(1, max_size), rng.choice([0.2, 0.35, 0.5]), rng)
        ups = upsets(P, include_empty=True)
        for _ in range(pairs_per_poset):
            Q = rng.choice(ups)
            inner = [U for U in ups if U <= Q]
            Qp = rng.choice(inner)
            bad, miscount = factorization_violations(P, Q, Qp)
            checked += 1
            if bad or miscount:
                violations.append((P, Q, Qp, bad, miscount))
    return checked, violations
