"""JSON interchange documents and DOT export.

Every document is a JSON object with a ``type`` field. Elements are written
as strings through a label function; loading gives posets over those
strings, so round trips are compared on relabelled forms:
``load(export(x)) == relabel(x)`` and ``export(load(d)) == d``.
"""

from __future__ import annotations

import json

from .anodyne import AnodyneCertificate, HornMove
from .errors import UnsupportedType, UsageError
from .fincat import FinCategory, FinSetCategory, PosetCategory, TableCategory, validate_category
from .grids import GridSimplex
from .nerve import SubNerve
from .poset import Poset


def label(x):
    """Default element label: strings unchanged, points as "ij", up-sets by minimal points."""
    if isinstance(x, str):
        return x
    if isinstance(x, bool) or x is None:
        return repr(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, tuple):
        if all(isinstance(v, int) and 0 <= v < 10 for v in x):
            return "".join(map(str, x))
        return "(" + ",".join(label(v) for v in x) + ")"
    if isinstance(x, frozenset):
        return "{" + ",".join(sorted(label(v) for v in x)) + "}"
    return repr(x)


def cpt_label(x):
    return f"a{x[0]}{x[1]}"


def cart_label(Q):
    """b_pq for principal up-sets, otherwise U[...] listing the minimal points."""
    pts = sorted(Q)
    mins = [p for p in pts if not any(r != p and r[0] <= p[0] and r[1] <= p[1] for r in pts)]
    if len(mins) == 1:
        return "b%d%d" % mins[0]
    return "U[" + ",".join("%d%d" % p for p in mins) + "]"


# export ----------------------------------------------------------------------


def poset_doc(P, lab=label):
    return {
        "type": "poset",
        "elements": [lab(x) for x in P.elements],
        "covers": [[lab(x), lab(y)] for x, y in P.covers()],
    }


def subnerve_doc(K, lab=label):
    return {
        "type": "subnerve",
        "base": poset_doc(K.base, lab),
        "maximal": [[lab(x) for x in c] for c in K.maximal_chains()],
    }


def certificate_doc(cert, lab=label):
    return {
        "type": "certificate",
        "base": poset_doc(cert.start.base, lab),
        "start": [[lab(x) for x in c] for c in cert.start.maximal_chains()],
        "target": [[lab(x) for x in c] for c in cert.target.maximal_chains()],
        "moves": [{"chain": [lab(x) for x in m.chain], "k": m.k} for m in cert.moves],
    }


def category_doc(C, lab=label):
    if isinstance(C, PosetCategory):
        d = poset_doc(C.poset, lab)
        return {"type": "category", "kind": "poset", "elements": d["elements"], "covers": d["covers"]}
    if isinstance(C, FinSetCategory):
        doc = {"type": "category", "kind": "finset",
               "sets": {lab(k): [lab(v) for v in vs] for k, vs in C.sets.items()}}
        if not C.full:
            doc["functions"] = [
                {"source": lab(f.source), "target": lab(f.target),
                 "values": [lab(C.sets[f.target][i]) for i in f.label]}
                for f in C.morphisms() if not C.is_identity(f)
            ]
        return doc
    if isinstance(C, TableCategory):
        mors = C.morphisms()
        comp = []
        for g, f in C.composable_pairs():
            if not (C.is_identity(g) or C.is_identity(f)):
                comp.append([g.label, f.label, C.compose(g, f).label])
        return {
            "type": "category",
            "kind": "table",
            "objects": [lab(a) for a in C.objects],
            "morphisms": [{"name": m.label, "source": lab(m.source), "target": lab(m.target)} for m in mors],
            "identities": {lab(a): C.identity(a).label for a in C.objects},
            "composition": comp,
        }
    raise UnsupportedType(f"cannot export category of type {type(C).__name__}")


def _mor_doc(C, f, lab):
    if isinstance(C, FinSetCategory):
        return [lab(C.sets[f.target][i]) for i in f.label]
    if isinstance(C, TableCategory):
        return f.label
    return None


def grid_doc(g, lab=label):
    doc = {
        "type": "grid",
        "dimension": g.m,
        "objects": [[lab(x) for x in r] for r in g.objects],
    }
    C = g.category
    if not isinstance(C, PosetCategory):
        doc["rows"] = [[_mor_doc(C, e, lab) for e in r] for r in g.rows]
        doc["cols"] = [[_mor_doc(C, e, lab) for e in r] for r in g.cols]
    return doc


def export(obj, fmt="interchange", lab=label):
    """Interchange (JSON text) or DOT for any exportable object."""
    if fmt == "dot":
        return to_dot(obj, lab)
    if fmt != "interchange":
        raise UsageError(f"unknown format {fmt!r}")
    return json.dumps(to_doc(obj, lab), indent=2, sort_keys=False)


def to_doc(obj, lab=label):
    if isinstance(obj, Poset):
        return poset_doc(obj, lab)
    if isinstance(obj, SubNerve):
        return subnerve_doc(obj, lab)
    if isinstance(obj, AnodyneCertificate):
        return certificate_doc(obj, lab)
    if isinstance(obj, FinCategory):
        return category_doc(obj, lab)
    if isinstance(obj, GridSimplex):
        return grid_doc(obj, lab)
    if hasattr(obj, "as_dict"):
        return {"type": "report", **obj.as_dict()}
    raise UnsupportedType(f"cannot export {type(obj).__name__}")


# load ------------------------------------------------------------------------


def _require(doc, kind):
    if not isinstance(doc, dict) or doc.get("type") != kind:
        raise UsageError(f"expected a {kind} document")
    return doc


def load_poset(doc):
    _require(doc, "poset")
    try:
        return Poset(doc["elements"], [tuple(p) for p in doc.get("covers", [])])
    except KeyError as e:
        raise UsageError(f"poset document lacks {e}") from None


def load_subnerve(doc):
    _require(doc, "subnerve")
    return SubNerve.from_maximal(load_poset(doc["base"]), doc["maximal"])


def load_certificate(doc):
    _require(doc, "certificate")
    base = load_poset(doc["base"])
    start = SubNerve.from_maximal(base, doc["start"])
    target = SubNerve.from_maximal(base, doc["target"])
    moves = tuple(HornMove(tuple(m["chain"]), m["k"]) for m in doc["moves"])
    return AnodyneCertificate(start, moves, target)


def load_category(doc):
    if not isinstance(doc, dict):
        raise UsageError("expected a category document")
    try:
        return validate_category(doc)
    except KeyError as e:
        raise UsageError(f"category document lacks {e}") from None


def _load_mor(C, s, t, data):
    if isinstance(C, PosetCategory):
        return C.arrow(s, t)
    if isinstance(C, FinSetCategory):
        names = {label(v): v for v in C.sets[t]}
        return C.function(s, t, [names[v] for v in data])
    return C.morphism(data)


def load_grid(doc, C):
    from .grids import grid_from_poset

    _require(doc, "grid")
    names = {label(x): x for x in C.objects}
    try:
        objs = [[names[x] for x in r] for r in doc["objects"]]
    except KeyError as e:
        raise UsageError(f"grid names unknown object {e}") from None
    if isinstance(C, PosetCategory):
        return grid_from_poset(C, objs)
    n = len(objs)
    rows = tuple(tuple(_load_mor(C, objs[i][j], objs[i][j + 1], doc["rows"][i][j]) for j in range(n - 1))
                 for i in range(n))
    cols = tuple(tuple(_load_mor(C, objs[i][j], objs[i + 1][j], doc["cols"][i][j]) for j in range(n))
                 for i in range(n - 1))
    return GridSimplex(tuple(tuple(r) for r in objs), rows, cols, C)


def load(text, category=None):
    doc = json.loads(text) if isinstance(text, str) else text
    kind = doc.get("type") if isinstance(doc, dict) else None
    if kind == "poset":
        return load_poset(doc)
    if kind == "subnerve":
        return load_subnerve(doc)
    if kind == "certificate":
        return load_certificate(doc)
    if kind == "category":
        return load_category(doc)
    if kind == "grid":
        if category is None:
            raise UsageError("loading a grid needs its category")
        return load_grid(doc, category)
    raise UnsupportedType(f"unknown document type {kind!r}")


def read(path, category=None):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    try:
        return load(text, category)
    except json.JSONDecodeError as e:
        raise UsageError(f"{path} is not valid JSON: {e}") from None


# DOT -------------------------------------------------------------------------


def _q(s):
    return '"' + str(s).replace('"', '\\"') + '"'


def _dot(name, nodes, edges):
    lines = [f"digraph {name} {{"]
    lines += [f"  {_q(v)};" for v in nodes]
    lines += [f"  {_q(a)} -> {_q(b)};" for a, b in edges]
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_dot(obj, lab=label):
    if isinstance(obj, Poset):
        return _dot("hasse", [lab(x) for x in obj.elements], [(lab(x), lab(y)) for x, y in obj.covers()])
    if isinstance(obj, SubNerve):
        return _dot("skeleton", [lab(x) for x in obj.vertices()], [(lab(x), lab(y)) for x, y in obj.edges()])
    if isinstance(obj, PosetCategory):
        return to_dot(obj.poset, lab)
    if isinstance(obj, GridSimplex):
        n = obj.m + 1
        nodes = [f"{i},{j}: {lab(obj.obj(i, j))}" for i in range(n) for j in range(n)]
        key = lambda i, j: nodes[i * n + j]
        edges = [(key(i, j), key(i, j + 1)) for i in range(n) for j in range(n - 1)]
        edges += [(key(i, j), key(i + 1, j)) for i in range(n - 1) for j in range(n)]
        return _dot("grid", nodes, edges)
    raise UnsupportedType(f"no DOT rendering for {type(obj).__name__}")
