"""Simplicial subsets of poset nerves, stored as face-closed sets of chains."""

from __future__ import annotations

import itertools

from .errors import BaseMismatch, NotInner, NotSubcomplex, SizeBudgetExceeded, UsageError
from .poset import chain as ordinal

CHAIN_BUDGET = 2_000_000


def faces(c):
    """The codimension-one faces of a chain, indexed by the dropped vertex."""
    return [c[:k] + c[k + 1:] for k in range(len(c))]


class SubNerve:
    """A face-closed set of non-empty chains in ``base``.

    Chains are tuples listed in increasing order. An m-simplex is an
    (m+1)-chain; degenerate simplices are never stored.
    """

    def __init__(self, base, chains, check=True):
        self.base = base
        self.chains = frozenset(tuple(c) for c in chains)
        if check:
            self._validate()

    def _validate(self):
        P = self.base
        for c in self.chains:
            if not c:
                raise NotSubcomplex("empty chain")
            for x, y in zip(c, c[1:]):
                if not P.lt(x, y):
                    raise NotSubcomplex(f"{c!r} is not strictly increasing", c)
            if len(c) > 1:
                for f in faces(c):
                    if f not in self.chains:
                        raise NotSubcomplex(f"face {f!r} of {c!r} missing", f)

    @classmethod
    def from_maximal(cls, base, chains):
        out = set()
        for c in chains:
            c = tuple(sorted(c, key=base.index))
            for r in range(1, len(c) + 1):
                out.update(itertools.combinations(c, r))
        return cls(base, out)

    def __contains__(self, c):
        return tuple(c) in self.chains

    def __len__(self):
        return len(self.chains)

    def __iter__(self):
        return iter(self.sorted_chains())

    def __eq__(self, other):
        if not isinstance(other, SubNerve):
            return NotImplemented
        return self.base == other.base and self.chains == other.chains

    def __hash__(self):
        return hash(self.chains)

    def __repr__(self):
        return f"SubNerve({len(self.chains)} simplices, dim {self.dimension()})"

    def key(self, c):
        """Sort key: dimension first, then lexicographic on element positions."""
        return (len(c), tuple(self.base.index(x) for x in c))

    def sorted_chains(self):
        return sorted(self.chains, key=self.key)

    def dimension(self):
        return max((len(c) for c in self.chains), default=0) - 1

    def counts(self):
        """Number of non-degenerate simplices in each dimension."""
        out = [0] * (self.dimension() + 1)
        for c in self.chains:
            out[len(c) - 1] += 1
        return out

    def maximal_chains(self):
        chains = self.chains
        out = []
        for c in chains:
            extendable = False
            for x in self.base.elements:
                if x in c:
                    continue
                longer = tuple(sorted(c + (x,), key=self.base.index))
                if longer in chains:
                    extendable = True
                    break
            if not extendable:
                out.append(c)
        return sorted(out, key=self.key)

    def vertices(self):
        return [c[0] for c in self.sorted_chains() if len(c) == 1]

    def edges(self):
        return [c for c in self.sorted_chains() if len(c) == 2]


def iter_chains(P, dim_cap=None):
    """Every non-empty chain of P in increasing order."""
    succ = {x: [y for y in P.up(x) if y != x] for x in P.elements}
    cap = len(P) if dim_cap is None else dim_cap + 1

    def extend(c):
        yield c
        if len(c) < cap:
            for y in succ[c[-1]]:
                yield from extend(c + (y,))

    for x in P.elements:
        yield from extend((x,))


def nerve(P, dim_cap=None, budget=CHAIN_BUDGET):
    out = []
    for c in iter_chains(P, dim_cap):
        out.append(c)
        if len(out) > budget:
            raise SizeBudgetExceeded(f"more than {budget} chains")
    return SubNerve(P, out, check=False)


def simplices(K, m):
    return sorted((c for c in K.chains if len(c) == m + 1), key=K.key)


def combine(K1, K2, mode="union"):
    if K1.base != K2.base:
        raise BaseMismatch("subcomplexes live over different posets")
    if mode == "union":
        return SubNerve(K1.base, K1.chains | K2.chains, check=False)
    if mode == "intersection":
        return SubNerve(K1.base, K1.chains & K2.chains, check=False)
    raise UsageError(f"unknown combine mode {mode!r}")


def restrict_to(K, P):
    """Nerve of a full sub-poset, viewed inside K's base."""
    return SubNerve(K.base, nerve(P).chains, check=False)


def sub_nerve(base, subposet):
    """N(subposet) as a subcomplex of N(base)."""
    return SubNerve(base, nerve(subposet).chains, check=False)


def horn(n, k):
    """Lambda^n_k over [n], any 0 <= k <= n."""
    full = tuple(range(n + 1))
    drop = full[:k] + full[k + 1:]
    chains = [c for c in iter_chains(ordinal(n)) if c != full and c != drop]
    return SubNerve(ordinal(n), chains, check=False)


def standard_shape(n, kind, k=None):
    """Standard Delta^n, its boundary, or the inner horn Lambda^n_k."""
    P = ordinal(n)
    full = tuple(range(n + 1))
    if kind == "simplex":
        return nerve(P)
    if kind == "boundary":
        return SubNerve(P, [c for c in iter_chains(P) if c != full], check=False)
    if kind == "inner_horn":
        if k is None or not 0 < k < n:
            raise NotInner(f"k={k} is not inner for n={n}")
        return horn(n, k)
    raise UsageError(f"unknown shape {kind!r}")
