"""Command-line entry point.

Exit status: 0 on success, 1 when a checked mathematical property fails
(the witness is printed), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import interchange as ix
from .errors import GlueError, MathematicalFailure, UsageError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(args, text):
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _pair(text):
    try:
        p, q = (int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"expected p,q but got {text!r}") from None
    return p, q


# gen -------------------------------------------------------------------------


def cmd_gen(args):
    from .cartesianization import build_boxplus, build_cart
    from .compactification import build_box, build_cpt

    if args.n is None:
        raise UsageError("gen needs --n")
    if args.what == "cpt":
        obj, lab = build_cpt(args.n), ix.cpt_label
    elif args.what == "box":
        obj, lab = build_box(args.n), ix.cpt_label
    elif args.what == "cart":
        obj, lab = build_cart(args.n), ix.cart_label
    else:
        if args.at and args.cart:
            raise UsageError("--at and --cart are exclusive")
        if args.at:
            obj = build_boxplus(args.n, "at", _pair(args.at))
        else:
            obj = build_boxplus(args.n, "cart" if args.cart else "full")
        lab = ix.cart_label
    _emit(args, ix.export(obj, args.format, lab))
    return EXIT_OK


# certify / verify ------------------------------------------------------------


def cmd_certify(args):
    from .anodyne import validate_certificate
    from .cartesianization import certify_boxplus_cart
    from .compactification import certify_box

    if args.n is None:
        raise UsageError("certify needs --n")
    if args.what == "box-in-cpt":
        kw = {} if args.budget is None else {"budget": args.budget}
        cert = certify_box(args.n, args.method, **kw)
        lab = ix.cpt_label
    else:
        if args.method == "search":
            raise UsageError("boxplus-in-cart is certified constructively only")
        cert = certify_boxplus_cart(args.n)
        lab = ix.cart_label
    if not cert:
        print(f"no certificate: {cert.reason} after {cert.visited} states")
        return EXIT_FAIL
    validate_certificate(cert)
    print(f"certificate: {len(cert.moves)} moves, valid")
    for m in cert.moves[: args.show]:
        print(f"  [{','.join(lab(x) for x in m.chain)}] k={m.k}")
    if args.emit_certificate:
        with open(args.emit_certificate, "w") as fh:
            fh.write(ix.export(cert, "interchange", lab))
    return EXIT_OK


def cmd_verify(args):
    from .anodyne import AnodyneCertificate, validate_certificate

    cert = ix.read(args.file)
    if not isinstance(cert, AnodyneCertificate):
        raise UsageError(f"{args.file} is not a certificate")
    validate_certificate(cert)
    print(f"accepted: {len(cert.moves)} moves")
    return EXIT_OK


# laws ------------------------------------------------------------------------


def cmd_laws(args):
    from .cartesianization import law_suite, structure_laws
    from .poset import factorization_suite

    n = 2 if args.n is None else args.n
    rows = []
    if args.suite == "cartesianization":
        rows = [(l.name, l.checked, l.violations) for l in law_suite(n)]
    elif args.suite == "structure":
        rows = [(l.name, l.checked, l.violations) for l in structure_laws(n)]
    else:
        checked, bad = factorization_suite(count=args.count, seed=args.seed)
        rows = [("exact-factorization", checked, bad)]
    failed = False
    for name, checked, bad in rows:
        verdict = "pass" if not bad else "FAIL"
        failed |= bool(bad)
        print(f"{name}: {verdict} ({checked} checked, {len(bad)} violations)")
        if bad:
            print(f"  witness: {bad[0]!r}")
    return EXIT_FAIL if failed else EXIT_OK


# shared loading for category-based verbs -------------------------------------


def _category(args):
    if args.instance:
        from .corpus import instance

        return instance(args.instance)
    if not args.category:
        raise UsageError("need --category FILE or --instance NAME")
    return ix.read(args.category)


def _obj(C, name):
    """An object given directly or by its interchange label."""
    if name in C._objset:
        return name
    for x in C.objects:
        if ix.label(x) == name:
            return x
    raise UsageError(f"unknown object {name!r}")


def _morphism_spec(C, spec):
    from .fincat import FinSetCategory, PosetCategory, TableCategory

    if isinstance(C, PosetCategory):
        if isinstance(spec, str):
            if "<" not in spec:
                raise UsageError(f"poset morphisms are written a<b, got {spec!r}")
            a, b = spec.split("<", 1)
            return C.arrow(_obj(C, a.strip()), _obj(C, b.strip()))
        return C.arrow(*(_obj(C, x) for x in spec))
    if isinstance(C, TableCategory):
        try:
            return C.morphism(spec)
        except KeyError:
            raise UsageError(f"unknown morphism {spec!r}") from None
    if isinstance(C, FinSetCategory):
        if not isinstance(spec, dict):
            raise UsageError("FinSet morphisms are {source, target, values}")
        return C.function(spec["source"], spec["target"], spec["values"])
    raise UsageError("unsupported category")


def _json_or_file(text):
    if os.path.exists(text):
        with open(text) as fh:
            return json.load(fh)
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return None


def _edge_class(C, text):
    from .fincat import EdgeClass, FinSetCategory, column_edges, row_edges

    named = {
        "all": lambda: EdgeClass.everything(C),
        "identities": lambda: EdgeClass.identities(C),
        "columns": lambda: column_edges(C),
        "rows": lambda: row_edges(C),
    }
    if isinstance(C, FinSetCategory):
        named["injective"] = lambda: EdgeClass.where(C, C.is_injective)
        named["surjective"] = lambda: EdgeClass.where(C, C.is_surjective)
    if text in named:
        return named[text]()
    data = _json_or_file(text)
    specs = data if isinstance(data, list) else [s for s in text.split(",") if s.strip()]
    return EdgeClass(C, [_morphism_spec(C, s) for s in specs])


def _tau(C, text):
    from .compactification import tau_chain
    from .fincat import PosetCategory

    data = _json_or_file(text)
    if isinstance(data, list):
        if isinstance(C, PosetCategory) and all(isinstance(x, str) for x in data):
            objs = data
        else:
            return tau_chain(C, [_morphism_spec(C, s) for s in data])
    else:
        objs = [s.strip() for s in text.split(",")]
    if isinstance(C, PosetCategory):
        objs = [_obj(C, x) for x in objs]
        if len(objs) == 1:
            return tau_chain(C, objs[0])
        return tau_chain(C, [C.arrow(a, b) for a, b in zip(objs, objs[1:])])
    return tau_chain(C, [_morphism_spec(C, s) for s in objs])


def _setup(args):
    """(C, E1, E2, g, i_max) from --instance or from files."""
    from .grids import CART

    obj = _category(args)
    if args.instance:
        return obj.C, obj.E1, obj.E2, obj.g, obj.i_max if args.i_max is None else args.i_max
    C = obj
    E1 = _edge_class(C, args.e1 or "all")
    E2 = _edge_class(C, args.e2 or "all")
    if args.g is None:
        return C, E1, E2, None, args.i_max
    return C, E1, E2, _load_g(C, E1, E2, CART, args.g), args.i_max


def _load_g(C, E1, E2, discipline, path):
    """A functor file: {"target": category doc, "objects": {..}, "morphisms": [[src, tgt], ..]}."""
    from .fincat import PosetCategory
    from .gluing import from_functor, from_poset_map

    with open(path) as fh:
        doc = json.load(fh)
    try:
        D = ix.load_category(doc["target"])
        omap = doc["objects"]
    except KeyError as e:
        raise UsageError(f"functor document lacks {e}") from None
    for x in C.objects:
        if str(x) not in omap:
            raise UsageError(f"functor misses object {x!r}")
    fobj = {x: omap[str(x)] for x in C.objects}
    if isinstance(D, PosetCategory):
        return from_poset_map(C, E1, E2, discipline, D, fobj)
    table = {}
    for src, tgt in doc.get("morphisms", []):
        table[_morphism_spec(C, src)] = _morphism_spec(D, tgt)
    for x in C.objects:
        table.setdefault(C.identity(x), D.identity(fobj[x]))
    missing = [f for f in C.morphisms() if f not in table]
    if missing:
        raise UsageError(f"functor misses morphism {missing[0]!r}")
    return from_functor(C, E1, E2, discipline, D, fobj, table)


# kpt / kart / glue -----------------------------------------------------------


def cmd_kpt(args):
    from .compactification import enumerate_kpt
    from .fincat import check_cofiltered

    if args.tau is None:
        raise UsageError("kpt enumerate needs --tau")
    C, E1, E2, _, _ = _setup(args)
    tau = _tau(C, args.tau)
    K = enumerate_kpt(C, E1, E2, tau, budget=args.budget or 50_000)
    chk = check_cofiltered(K)
    doc = {
        "tau": [ix.label(x) for x in tau.objects],
        "objects": len(K.objects),
        "compactifications": [
            {ix.label(p): ix.label(x) for p, x in k.objects} for k in K.objects
        ],
        "cofiltered": bool(chk),
        "reason": chk.reason or None,
        "witness": repr(chk.counterexample) if not chk else None,
    }
    _emit(args, json.dumps(doc, indent=2))
    return EXIT_OK if chk else EXIT_FAIL


def cmd_kart(args):
    from .cartesianization import build_cart, kart_exact_violations, kart_extension
    from .fincat import PosetCategory

    if args.tau is None:
        raise UsageError("kart extend needs --tau")
    C = _category(args)
    if not isinstance(C, PosetCategory) and hasattr(C, "C"):
        C = C.C
    data = _json_or_file(args.tau)
    if isinstance(data, dict):
        tau = ix.load_grid(data, C)
    else:
        tau = [[_obj(C, s.strip()) for s in row.split(",")] for row in args.tau.split(";")]
    kart = kart_extension(C, tau)
    bad = kart_exact_violations(kart)
    doc = {
        "n": kart.n,
        "values": {ix.cart_label(Q): ix.label(kart[Q]) for Q in build_cart(kart.n).elements},
        "exact-squares-to-pullbacks": not bad,
    }
    _emit(args, json.dumps(doc, indent=2))
    if bad:
        print(f"witness: {bad[0]!r}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_glue(args):
    from .gluing import extend_cart, extend_comm, extend_full
    from .grids import COMM

    C, E1, E2, g, i_max = _setup(args)
    if g is None:
        raise UsageError("glue needs --g FILE or --instance NAME")
    if args.mode in ("cart", "full") and i_max is None:
        raise UsageError(f"glue {args.mode} needs --i-max")
    if args.mode == "comm":
        g.discipline = COMM
        _, rep = extend_comm(C, E1, E2, g, strict=False)
    elif args.mode == "cart":
        _, rep = extend_cart(C, E1, E2, g, i_max, strict=False)
    else:
        _, rep = extend_full(C, E1, E2, g, i_max, strict=False)
    _emit(args, ix.export(rep))
    if not rep.ok:
        name, _, witness = rep.failures()[0]
        print(f"check {name} failed; witness: {witness!r}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_export(args):
    obj = ix.read(args.file)
    _emit(args, ix.export(obj, args.format))
    return EXIT_OK


# parser ----------------------------------------------------------------------


def build_parser():
    p = _Parser(prog="gluenerve", description="Compactification posets, grid nerves and gluing checks.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def common(sp, fmt=True):
        sp.add_argument("--n", type=int)
        sp.add_argument("--out")
        sp.add_argument("--budget", type=int)
        sp.add_argument("--seed", type=int, default=0)
        if fmt:
            sp.add_argument("--format", choices=["dot", "interchange"], default="interchange")

    def cat_opts(sp):
        sp.add_argument("--category")
        sp.add_argument("--instance")
        sp.add_argument("--e1")
        sp.add_argument("--e2")
        sp.add_argument("--tau")
        sp.add_argument("--g")
        sp.add_argument("--i-max", type=int)

    g = sub.add_parser("gen", help="generate posets and subcomplexes")
    g.add_argument("what", choices=["cpt", "box", "cart", "boxplus"])
    g.add_argument("--at")
    g.add_argument("--cart", action="store_true")
    common(g)
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("certify", help="build and check inner-anodyne certificates")
    c.add_argument("what", choices=["box-in-cpt", "boxplus-in-cart"])
    c.add_argument("--method", choices=["constructive", "search"], default="constructive")
    c.add_argument("--emit-certificate")
    c.add_argument("--show", type=int, default=5)
    common(c, fmt=False)
    c.set_defaults(func=cmd_certify)

    v = sub.add_parser("verify", help="re-validate a stored certificate")
    v.add_argument("file")
    v.set_defaults(func=cmd_verify)

    la = sub.add_parser("laws", help="run a law suite")
    la.add_argument("--suite", choices=["cartesianization", "structure", "factorization"], default="cartesianization")
    la.add_argument("--count", type=int, default=100)
    common(la, fmt=False)
    la.set_defaults(func=cmd_laws)

    k = sub.add_parser("kpt", help="enumerate compactifications of a simplex")
    k.add_argument("action", choices=["enumerate"])
    common(k, fmt=False)
    cat_opts(k)
    k.set_defaults(func=cmd_kpt)

    ka = sub.add_parser("kart", help="cartesianize a grid")
    ka.add_argument("action", choices=["extend"])
    common(ka, fmt=False)
    cat_opts(ka)
    ka.set_defaults(func=cmd_kart)

    gl = sub.add_parser("glue", help="extend grid data and check the result")
    gl.add_argument("mode", choices=["comm", "cart", "full"])
    common(gl, fmt=False)
    cat_opts(gl)
    gl.set_defaults(func=cmd_glue)

    e = sub.add_parser("export", help="convert an interchange document")
    e.add_argument("file")
    common(e)
    e.set_defaults(func=cmd_export)
    return p


def run(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except MathematicalFailure as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        if e.witness is not None:
            print(f"witness: {e.witness!r}", file=sys.stderr)
        return EXIT_FAIL
    except GlueError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
