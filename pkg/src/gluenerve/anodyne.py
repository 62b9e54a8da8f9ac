"""Inner-horn certificates for inclusions of nerve subcomplexes.

A certificate is a start complex plus an ordered list of moves. A move
(chain, k) attaches an inner horn: every face of ``chain`` except the k-th
is already present, and both ``chain`` and its k-th face are absent. The
move adds exactly those two simplices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (
    BaseMismatch,
    CertificateInvalid,
    HypothesisFailed,
    MoveInvalid,
    NotSubcomplex,
    UsageError,
)
from .nerve import SubNerve, faces, nerve, sub_nerve
from .poset import Poset, interval

SEARCH_BUDGET = 10**7


@dataclass(frozen=True)
class HornMove:
    chain: tuple
    k: int

    def __post_init__(self):
        m = len(self.chain) - 1
        if m < 2 or not 0 < self.k < m:
            raise MoveInvalid(f"k={self.k} is not inner for a {m}-simplex", self)

    @property
    def face(self):
        return self.chain[: self.k] + self.chain[self.k + 1:]


@dataclass(frozen=True)
class AnodyneCertificate:
    start: SubNerve
    moves: tuple
    target: SubNerve

    def __len__(self):
        return len(self.moves)


@dataclass(frozen=True)
class NotFound:
    """The search gave up. This is not a proof that no certificate exists."""

    visited: int
    exhausted: bool
    reason: str = ""

    def __bool__(self):
        return False


def _check_move(base, present, move):
    c = move.chain
    for x, y in zip(c, c[1:]):
        if not base.lt(x, y):
            raise MoveInvalid(f"{c!r} is not a chain of the base poset", move)
    if c in present:
        raise MoveInvalid(f"simplex {c!r} already present", move)
    if move.face in present:
        raise MoveInvalid(f"face {move.k} of {c!r} already present", move)
    for j, f in enumerate(faces(c)):
        if j != move.k and f not in present:
            raise MoveInvalid(f"face {j} of {c!r} missing", move)


def apply_move(K, move):
    if not isinstance(move, HornMove):
        move = HornMove(tuple(move[0]), move[1])
    _check_move(K.base, K.chains, move)
    return SubNerve(K.base, K.chains | {move.chain, move.face}, check=False)


def replay(start, moves):
    present = set(start.chains)
    for mv in moves:
        _check_move(start.base, present, mv)
        present.add(mv.chain)
        present.add(mv.face)
    return SubNerve(start.base, present, check=False)


def validate_certificate(cert):
    if cert.start.base != cert.target.base:
        raise BaseMismatch("certificate start and target have different bases")
    final = replay(cert.start, cert.moves)
    if final.chains != cert.target.chains:
        extra = sorted(final.chains - cert.target.chains, key=final.key)[:1]
        short = sorted(cert.target.chains - final.chains, key=final.key)[:1]
        raise CertificateInvalid("certificate does not end at its target", extra or short)
    return final


def _check_inclusion(A, B):
    if A.base != B.base:
        raise BaseMismatch("subcomplexes live over different posets")
    if not A.chains <= B.chains:
        raise NotSubcomplex("first complex is not contained in the second")


def search_certificate(A, B, budget=SEARCH_BUDGET):
    """Depth-first search for a certificate of A inside B.

    Moves are tried in order of their free face (dimension, then
    lexicographic), then of the top simplex. Visited states are memoised;
    ``budget`` bounds the number of states. Returns NotFound when the budget
    runs out or the move space is exhausted.
    """
    _check_inclusion(A, B)
    missing = sorted(B.chains - A.chains, key=B.key)
    if not missing:
        return AnodyneCertificate(A, (), B)
    if len(missing) % 2:
        return NotFound(0, True, "odd number of missing simplices")
    key = B.key
    pos = {c: i for i, c in enumerate(missing)}
    # candidate moves that ever make sense: top and face both missing
    options = []
    for c in missing:
        m = len(c) - 1
        for k in range(1, m):
            f = c[:k] + c[k + 1:]
            if f in pos:
                others = tuple(pos[g] for j, g in enumerate(faces(c)) if j != k and g in pos)
                options.append((key(f), key(c), k, pos[c], pos[f], others))
    options.sort()
    start_present = A.chains

    seen = set()
    visited = 0
    added = [False] * len(missing)
    trail = []

    def moves_now():
        out = []
        for _, _, k, ci, fi, others in options:
            if not added[ci] and not added[fi] and all(added[o] for o in others):
                out.append((k, ci, fi))
        return out

    # explicit stack of iterators to avoid deep recursion
    remaining = len(missing)
    stack = [iter(moves_now())]
    seen.add(frozenset())
    while stack:
        if remaining == 0:
            moves = tuple(HornMove(missing[ci], k) for k, ci, _ in trail)
            return AnodyneCertificate(A, moves, B)
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            if trail:
                _, ci, fi = trail.pop()
                added[ci] = added[fi] = False
                remaining += 2
            continue
        k, ci, fi = nxt
        added[ci] = added[fi] = True
        state = frozenset(i for i, a in enumerate(added) if a)
        if state in seen:
            added[ci] = added[fi] = False
            continue
        seen.add(state)
        visited += 1
        if visited > budget:
            return NotFound(visited, False, "budget exhausted")
        trail.append(nxt)
        remaining -= 2
        stack.append(iter(moves_now()))
    return NotFound(visited, True, "move space exhausted")


def pushout_poset(P, Q, R):
    """Q and R glued along their common full sub-poset P."""
    for X, name in ((Q, "Q"), (R, "R")):
        for x in P.elements:
            if x not in X:
                raise UsageError(f"{x!r} of P missing from {name}", x)
        for x, y in itertools.product(P.elements, repeat=2):
            if P.leq(x, y) != X.leq(x, y):
                raise UsageError(f"P is not a full sub-poset of {name}", (x, y))
    clash = [x for x in Q.elements if x in R and x not in P]
    if clash:
        raise UsageError("Q and R overlap outside P", clash[0])
    elements = list(Q.elements) + [x for x in R.elements if x not in P]
    pairs = list(Q.relation()) + list(R.relation())
    return Poset(elements, pairs)


def check_pushout_hypotheses(P, Q, S):
    """Raise HypothesisFailed naming the first of (1)-(3) that fails."""
    Pset = set(P.elements)
    # (3) P is an up-set of Q
    for p in P.elements:
        for q in Q.up(p):
            if q not in Pset:
                raise HypothesisFailed("up-set", f"{q!r} lies above {p!r} but outside P", (p, q))
    # (2) Q - P is finite: always true for finite posets
    # (1) Q has pushouts, and they stay pushouts in S
    E = Q.elements
    for b, c in itertools.combinations(E, 2):
        if Q.leq(b, c) or Q.leq(c, b):
            continue
        common = set(Q.down(b)) & set(Q.down(c))
        if not common:
            continue
        j = Q.join(b, c)
        if j is None:
            raise HypothesisFailed("pushouts", f"{b!r} and {c!r} have no join in Q", (b, c))
        if S.join(b, c) != j:
            raise HypothesisFailed("pushouts", f"join of {b!r}, {c!r} not preserved", (b, c))


def _cone_moves(S, present, q, A, B):
    """Pair the simplices that attach the cone point q over B relative to A.

    A = elements of Q strictly above q, B = elements of the current union
    strictly above q. For s in B - A let t(s) be the largest element of A
    below s. A missing chain (q, s_1, ..., s_k) whose first non-A entry is
    s_i is the top of a move when s_{i-1} = t(s_i), removing s_{i-1};
    otherwise it is the free face of the chain with t(s_i) inserted.
    """
    Aset = set(A)
    top = {}
    for s in B:
        if s in Aset:
            continue
        below = [a for a in A if S.leq(a, s)]
        t = S.join_all(below) if below else None
        if t is None or t not in Aset or not S.leq(t, s):
            raise HypothesisFailed("pushouts", f"no largest element of Q over {q!r} below {s!r}", (q, s))
        top[s] = t

    Bsub = S.subposet(B)
    uppers = []
    for sigma in nerve(Bsub).chains:
        i = next((j for j, s in enumerate(sigma) if s not in Aset), None)
        if i is None:
            continue
        c = (q,) + sigma
        t = top[sigma[i]]
        if i >= 1 and sigma[i - 1] == t:
            nonA = sum(1 for s in sigma if s not in Aset)
            uppers.append((len(c), nonA, S.index(q), tuple(S.index(x) for x in c), HornMove(c, i)))
    uppers.sort(key=lambda u: u[:4])
    pending = [u[-1] for u in uppers]
    out = []
    while pending:
        progress = []
        rest = []
        for mv in pending:
            ok = all(f in present for j, f in enumerate(faces(mv.chain)) if j != mv.k)
            if ok:
                present.add(mv.chain)
                present.add(mv.face)
                out.append(mv)
                progress.append(mv)
            else:
                rest.append(mv)
        if not progress:
            raise CertificateInvalid("cone pairing could not be scheduled", rest[0])
        pending = rest
    return out


def certify_poset_pushout(P, Q, R, ambient=None):
    """Certificate for N(Q) u N(R) inside N(Q glued to R along P).

    ``ambient``, when given, is a poset containing Q and R whose order on
    the union must agree with the glued order; the certificate then lives
    over the ambient nerve.
    """
    S = pushout_poset(P, Q, R)
    base = S
    if ambient is not None:
        union = ambient.subposet(S.elements)
        for x, y in itertools.product(S.elements, repeat=2):
            if union.leq(x, y) != S.leq(x, y):
                raise HypothesisFailed("pushout-order", f"ambient order disagrees at {x!r}, {y!r}", (x, y))
        base = ambient
    check_pushout_hypotheses(P, Q, S)

    start_chains = nerve(Q).chains | nerve(R).chains
    present = set(start_chains)
    Pset = set(P.elements)
    # peel minimal elements of Q - P, then attach them in reverse order
    remaining = [x for x in Q.elements if x not in Pset]
    peel = []
    while remaining:
        mins = Q.minimal(remaining)
        x = min(mins, key=Q.index)
        peel.append(x)
        remaining.remove(x)
    moves = []
    current = set(R.elements)
    for q in reversed(peel):
        A = [a for a in Q.up(q) if a != q]
        current.add(q)
        B = [s for s in S.elements if s in current and s != q and S.leq(q, s)]
        moves.extend(_cone_moves(S, present, q, A, B))
    start = SubNerve(base, start_chains, check=False)
    target = SubNerve(base, nerve(S).chains, check=False)
    return AnodyneCertificate(start, tuple(moves), target)


def certify_interval_union(P, p_list, q_list):
    """Certificate for the union of interval nerves inside the nerve of the union."""
    p_list, q_list = list(p_list), list(q_list)
    if len(p_list) != len(q_list) or not p_list:
        raise UsageError("need equally many lower and upper bounds, at least one")
    for j in range(1, len(p_list)):
        if not P.leq(p_list[j - 1], p_list[j]):
            raise HypothesisFailed("interval-order", "lower bounds not increasing", (p_list[j - 1], p_list[j]))
        if not P.leq(q_list[j - 1], q_list[j]):
            raise HypothesisFailed("interval-order", "upper bounds not increasing", (q_list[j - 1], q_list[j]))
        if not P.leq(p_list[j], q_list[j - 1]):
            raise HypothesisFailed("interval-order", "p_j is not below q_(j-1)", (p_list[j], q_list[j - 1]))
    pieces = [interval(P, p, q) for p, q in zip(p_list, q_list)]
    start = set()
    for I in pieces:
        start |= sub_nerve(P, I).chains
    moves = []
    covered = set(pieces[0].elements)
    for k in range(1, len(pieces)):
        Qk = P.subposet(covered)
        Rk = pieces[k]
        Pk = P.subposet(covered & set(Rk.elements))
        if not Pk.elements:
            raise HypothesisFailed("interval-order", "consecutive unions do not meet", k)
        cert = certify_poset_pushout(Pk, Qk, Rk, ambient=P)
        moves.extend(cert.moves)
        covered |= set(Rk.elements)
    union = P.subposet(covered)
    return AnodyneCertificate(
        SubNerve(P, start, check=False),
        tuple(moves),
        SubNerve(P, sub_nerve(P, union).chains, check=False),
    )
