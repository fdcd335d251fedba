"""Command line front end.

Exit codes: 0 success (``equiv``: equivalent), 1 inequivalent or a law
failed, 2 parse or usage error, 3 unsupported instance.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from .coalgebra import behavioral_equiv
from .dsl import (build_coalgebra, build_equation, coalgebra_from_json, coalgebra_to_json,
                  dumps, format_state, parse, state_of)
from .elgot import Bounds, backend_algebra, check_compositionality, check_weak_functoriality
from .equation import aft, equation_from_json
from .errors import EffiterError, ParseError, UnsupportedInstance
from .functor import FNode, IdShape, MooreShape, PolyShape, check_dist_law, builtin_law, lifting
from .instances import (broken_nonemptiness, mean_algebra, moore_pool, nonemptiness_algebra,
                        point_algebra, stream_pool, truncated_language_algebra,
                        zero_test_algebra)
from .laws import check_combinator_laws
from .phi import (BisimBackend, PhiClass, StreamBackend, backend_for, ep_equiv, language_of,
                  lasso_coalgebra, mean_cross_products, parse_ep, zigzag_witness)
from .variety import JSL, SET, UNARY, FreeAlgebra, extend_hom, variety

AXIOMS = ("weak-functoriality", "compositionality", "combinators", "dist-law", "all")
ALGEBRAS = ("phi", "mean", "zero-test", "point", "nonempty", "language", "broken")


def parse_shape(text: str | None):
    """``moore:a,b`` (outputs 0/1), ``moore:a,b/0,1,2``, ``id`` or ``poly:nil/0,cons/2``."""
    if text is None:
        return None
    kind, _, rest = text.partition(":")
    if kind == "id" and not rest:
        return IdShape()
    if kind == "moore" and rest:
        letters, _, outs = rest.partition("/")
        outputs = tuple(int(o) for o in outs.split(",")) if outs else (0, 1)
        return MooreShape(outputs, tuple(s for s in letters.split(",") if s))
    if kind == "poly" and rest:
        ops = []
        for item in rest.split(","):
            name, _, arity = item.partition("/")
            if not arity.isdigit():
                raise ParseError(f"bad operation {item!r} in shape")
            ops.append((name, int(arity)))
        return PolyShape(tuple(ops))
    raise ParseError(f"unrecognised shape {text!r}")


def format_key(cls) -> str:
    key = cls.key if isinstance(cls, PhiClass) else cls
    if isinstance(key, Fraction):
        return f"{key.numerator}/{key.denominator}"
    if isinstance(key, tuple) and all(isinstance(n, FNode) for n in key):
        return " ".join(f"q{i}/{n.label}->" + ",".join(f"q{c}" for c in n.children)
                        for i, n in enumerate(key))
    return str(key)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _load_json(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None


def _is_json(path: str, text: str) -> bool:
    return path.endswith(".json") or text.lstrip().startswith("{")


def _load_coalgebra(args):
    text = _read(args.input)
    if _is_json(args.input, text):
        return None, coalgebra_from_json(_load_json(text))
    doc = parse(text)
    v = variety(args.variety) if args.variety else None
    return doc, build_coalgebra(doc, v, parse_shape(args.shape))


def _emit(args, text: str, data, dot: str | None = None):
    if args.format == "json":
        print(dumps(data))
    elif args.format == "dot":
        if dot is None:
            raise UnsupportedInstance(f"no DOT output for {args.verb}")
        print(dot, end="")
    else:
        print(text)


# ---------------------------------------------------------------------------
# verbs


def cmd_determinize(args) -> int:
    from .dot import coalgebra_dot
    _, c = _load_coalgebra(args)
    lines = []
    if c.variety is UNARY:
        for x in c.generators:
            k, nxt = c.step[x].children[0]
            lines.append(f"{x} -> +{k} {nxt}")
    else:
        states = c.carrier.elements()
        shape = c.functor.shape
        width = max(len(format_state(c.variety, t)) for t in states) + 2
        lines.append("state".ljust(width) + "out  " + "".join(s.ljust(width) for s in shape.alphabet))
        for t in states:
            node = c.structure(t)
            kids = "".join(format_state(c.variety, k).ljust(width) for k in node.children)
            lines.append(format_state(c.variety, t).ljust(width) + f"{node.label!s:<5}{kids}")
    _emit(args, "\n".join(lines), coalgebra_to_json(c), coalgebra_dot(c))
    return 0


def _backend_for_doc(args, doc):
    if doc.kind == "unary" or args.backend == "stream":
        return StreamBackend(), None
    c = build_coalgebra(doc, JSL, parse_shape(args.shape)) if doc.transitions else None
    if c is not None:
        functor = c.functor
    else:
        from .dsl import infer_shape
        functor = lifting(JSL, parse_shape(args.shape) or infer_shape(doc))
    return BisimBackend(functor), c


def cmd_solve(args) -> int:
    text = _read(args.input)
    if _is_json(args.input, text):
        e = equation_from_json(_load_json(text))
        if not isinstance(e.params, FreeAlgebra) or e.params.generators:
            raise UnsupportedInstance("JSON systems must be closed; bind parameters in the DSL")
        backend = backend_for(e.variety, e.functor.shape, args.backend)
        e = aft(extend_hom({}, backend.carrier, source=e.params), e, backend.carrier)
    else:
        doc = parse(text)
        backend, c = _backend_for_doc(args, doc)
        e = build_equation(doc, backend, c)
    s = backend.solve(e)
    rows = {x: format_key(s(x)) for x in e.variables}
    data = {"backend": backend.name, "solution": rows}
    text = "\n".join(f"{x}: {k}" for x, k in rows.items())
    if isinstance(backend, BisimBackend) and set(backend.functor.shape.outputs) == {0, 1}:
        extra = []
        for x in e.variables:
            words = language_of(backend, s(x)).words(args.max_length)
            shown = " ".join("".join(w) or "eps" for w in words)
            extra.append(f"{x} accepts (len<={args.max_length}): {shown or '-'}")
        text += "\n" + "\n".join(extra)
    _emit(args, text, data)
    return 0


def cmd_equiv(args) -> int:
    if args.input:
        doc, c = _load_coalgebra(args)
        if len(args.items) != 2:
            raise ParseError("equiv --input needs two states")
        if c.variety is UNARY:
            b = StreamBackend()
            ks = [b.key(c, state_of(doc, c, t)) for t in args.items]
            same = ks[0] == ks[1]
            text = f"mean {ks[0]} {'=' if same else '!='} mean {ks[1]}"
            data = {"equivalent": same, "means": [format_key(k) for k in ks]}
        else:
            a, b = (state_of(doc, c, t) for t in args.items)
            same = behavioral_equiv(a, b, c)
            text = "equivalent" if same else "inequivalent"
            data = {"equivalent": same}
    else:
        if len(args.items) != 2:
            raise ParseError("equiv needs two stream literals")
        s, t = (parse_ep(x) for x in args.items)
        same = ep_equiv(s, t)
        lhs, rhs = mean_cross_products(s, t)
        text = f"mean {s.mean} {'=' if same else '!='} mean {t.mean}"
        data = {"equivalent": same, "means": [format_key(s.mean), format_key(t.mean)],
                "cross_products": [lhs, rhs]}
    _emit(args, text, data)
    return 0 if same else 1


def cmd_zigzag(args) -> int:
    from .dot import zigzag_dot
    if args.variety and variety(args.variety) is not UNARY:
        raise UnsupportedInstance("zigzag needs the UNARY variety with the identity functor")
    if args.shape and not isinstance(parse_shape(args.shape), IdShape):
        raise UnsupportedInstance("zigzag needs the UNARY variety with the identity functor")
    s, t = (parse_ep(x) for x in args.items)
    cs, ct = lasso_coalgebra(s, name="left"), lasso_coalgebra(t, name="right")
    z = zigzag_witness(cs, (0, 0), ct, (0, 0))
    if z is None:
        _emit(args, f"no zig-zag: mean {s.mean} != mean {t.mean}",
              {"exists": False}, "digraph zigzag {}\n")
        return 1
    ok = all(z.verify())
    steps = [f"{g} -> +{z.coalgebra.step[g].children[0][0]} "
             f"{z.coalgebra.step[g].children[0][1]}" for g in z.coalgebra.generators]
    legs = [f"{g} |-> left {format_state(UNARY, z.g[g])}, right {format_state(UNARY, z.h[g])}"
            for g in z.coalgebra.generators]
    text = "\n".join([f"zig-zag with k={z.k}, p={z.p} (legs are homomorphisms: {ok})",
                      *steps, *legs])
    data = {"exists": True, "k": z.k, "p": z.p, "verified": ok,
            "apex": coalgebra_to_json(z.coalgebra),
            "left": {g: list(v) for g, v in z.g.items()},
            "right": {g: list(v) for g, v in z.h.items()}}
    _emit(args, text, data, zigzag_dot(z))
    return 0 if ok else 1


def _algebra(args):
    bound = args.bound
    if args.backend == "stream":
        backend = StreamBackend()
        pool = stream_pool(backend)
        table = {"phi": lambda: backend_algebra(backend), "mean": mean_algebra,
                 "zero-test": zero_test_algebra,
                 "point": lambda: point_algebra(backend.functor)}
    else:
        shape = parse_shape(args.shape) or MooreShape((0, 1), tuple("ab"[:max(1, min(bound, 2))]))
        backend = BisimBackend(lifting(JSL, shape))
        pool = moore_pool(backend)
        f = backend.functor
        table = {"phi": lambda: backend_algebra(backend),
                 "nonempty": lambda: nonemptiness_algebra(f),
                 "language": lambda: truncated_language_algebra(f),
                 "point": lambda: point_algebra(f),
                 "broken": lambda: broken_nonemptiness(f)}
    if args.algebra not in table:
        raise UnsupportedInstance(f"algebra {args.algebra!r} is not available on the "
                                  f"{args.backend} backend")
    # other algebras draw parameter values from their own carrier
    return table[args.algebra](), pool if args.algebra == "phi" else None


def run_laws(args) -> list:
    axioms = ("weak-functoriality", "compositionality") if args.axiom == "all" else (args.axiom,)
    reports = []
    if args.axiom in ("combinators", "dist-law"):
        vs = [variety(args.variety)] if args.variety else [SET, UNARY, JSL]
        for v in vs:
            if args.axiom == "combinators":
                reports += check_combinator_laws(v, parse_shape(args.shape),
                                                 instances=args.instances, seed=args.seed)
            else:
                shape = parse_shape(args.shape) or (
                    IdShape() if v is UNARY else MooreShape((0, 1), ("a", "b")))
                r = check_dist_law(builtin_law(v, shape), sample_bound=args.bound,
                                   counter_bound=2 * args.bound if v is UNARY else None)
                r.axiom = f"dist-law [{v!r}]"
                reports.append(r)
        return reports
    A, pool = _algebra(args)
    bounds = Bounds(vars=args.bound, params=1, counter=args.bound, limit=args.limit)
    checks = {"weak-functoriality": check_weak_functoriality,
              "compositionality": check_compositionality}
    for axiom in axioms:
        r = checks[axiom](A, bounds, pool=pool, seed=args.seed)
        r.axiom = f"{r.axiom} [{A.name}]"
        reports.append(r)
    return reports


def cmd_laws(args) -> int:
    reports = run_laws(args)
    _emit(args, "\n".join(r.line() for r in reports), [r.to_json() for r in reports])
    return 0 if all(r.ok for r in reports) else 1


def cmd_language(args) -> int:
    from .dot import machine_dot
    doc, c = _load_coalgebra(args)
    if c.variety is not JSL:
        raise UnsupportedInstance("language needs a JSL coalgebra over a Moore shape")
    backend = BisimBackend(c.functor)
    cls = backend.class_of(c, state_of(doc, c, args.state))
    lang = language_of(backend, cls)
    words = ["".join(w) or "eps" for w in lang.words(args.max_length)]
    text = (f"minimal machine: {lang.machine.size} states\n"
            f"words of length <= {args.max_length}: {' '.join(words) or '-'}")
    data = {"states": lang.machine.size, "words": words, "empty": lang.is_empty()}
    _emit(args, text, data, machine_dot(lang.machine, lang.alphabet))
    return 0


def cmd_report(args) -> int:
    from .plotting import plot_laws, plot_running_means
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    reports, timings = [], []
    jobs = [("combinators", None, "phi"), ("dist-law", None, "phi"),
            ("all", "stream", "phi"), ("all", "stream", "mean"),
            ("all", "bisim", "phi"), ("all", "bisim", "nonempty")]
    for axiom, backend, algebra in jobs:
        ns = argparse.Namespace(**{**vars(args), "axiom": axiom, "backend": backend or "stream",
                                   "algebra": algebra, "variety": None, "shape": None})
        t0 = time.perf_counter()
        batch = run_laws(ns)
        elapsed = (time.perf_counter() - t0) / max(1, len(batch))
        reports += batch
        timings += [elapsed] * len(batch)
    with open(out / "laws.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["axiom", "instances", "failures", "mode", "seed", "seconds"])
        for r, t in zip(reports, timings):
            w.writerow([r.axiom, r.instances, r.failed,
                        "exhaustive" if r.exhaustive else "sampled", r.seed, f"{t:.3f}"])
    plot_laws(reports, out / "laws.png")
    streams = {"(1,2,7,4)(1,3,2)^w": parse_ep("(1,2,7,4)(1,3,2)^w"),
               "(5,6)(0,4)^w": parse_ep("(5,6)(0,4)^w"),
               "(1)^w": parse_ep("(1)^w")}
    streams.update({x: parse_ep(x) for x in args.streams})
    with open(out / "streams.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["stream", "normal_form", "mean"])
        for label, s in streams.items():
            w.writerow([label, str(s), format_key(s.mean)])
    plot_running_means(streams, out / "streams.png")
    for r in reports:
        print(r.line())
    print(f"wrote {out / 'laws.csv'}, {out / 'laws.png'}, {out / 'streams.csv'}, "
          f"{out / 'streams.png'}")
    return 0 if all(r.ok for r in reports) else 1


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--variety", choices=["SET", "UNARY", "JSL"], type=str.upper,
                        help="variety (default: inferred from the input)")
    common.add_argument("--shape", help="moore:a,b[/outputs] | id | poly:op/arity,... "
                                        "(default: inferred)")
    common.add_argument("--backend", choices=["stream", "bisim"],
                        help="phi backend (default: stream for unary input, bisim otherwise)")
    common.add_argument("--format", choices=["text", "json", "dot"], default="text")

    p = argparse.ArgumentParser(prog="effiter", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="verb", required=True)

    d = sub.add_parser("determinize", parents=[common],
                       help="print the determinised coalgebra of a DSL or JSON file")
    d.add_argument("input")
    d.set_defaults(run=cmd_determinize)

    s = sub.add_parser("solve", parents=[common], help="solve equations in the phi backend")
    s.add_argument("input")
    s.add_argument("--max-length", type=int, default=3,
                   help="word length for language summaries (default: 3)")
    s.set_defaults(run=cmd_solve)

    e = sub.add_parser("equiv", parents=[common],
                       help="compare two stream literals, or two states of --input")
    e.add_argument("items", nargs="+", metavar="ITEM")
    e.add_argument("--input", help="DSL or JSON coalgebra holding the states")
    e.set_defaults(run=cmd_equiv)

    z = sub.add_parser("zigzag", parents=[common], help="zig-zag witness for two streams")
    z.add_argument("items", nargs=2, metavar="STREAM")
    z.set_defaults(run=cmd_zigzag)

    def law_flags(q, axiom_default):
        q.add_argument("--axiom", choices=AXIOMS, default=axiom_default)
        q.add_argument("--algebra", choices=ALGEBRAS, default="phi",
                       help="algebra to check (default: the backend itself)")
        q.add_argument("--bound", type=int, default=2,
                       help="variables and counters/alphabet size (default: 2)")
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--limit", type=int, default=20000,
                       help="instances per configuration before sampling (default: 20000)")
        q.add_argument("--instances", type=int, default=500,
                       help="random instances for the combinator laws (default: 500)")

    la = sub.add_parser("laws", parents=[common], help="check Elgot, combinator or "
                                                       "distributive-law axioms")
    law_flags(la, "all")
    la.set_defaults(run=cmd_laws)

    lg = sub.add_parser("language", parents=[common], help="language of a state")
    lg.add_argument("input")
    lg.add_argument("--state", required=True, help="e.g. {p,q}")
    lg.add_argument("--max-length", type=int, default=4)
    lg.set_defaults(run=cmd_language)

    r = sub.add_parser("report", parents=[common],
                       help="run the law suites and write CSV tables and PNG figures")
    law_flags(r, "all")
    r.add_argument("--out", required=True, help="output directory")
    r.add_argument("--stream", dest="streams", action="append", default=[],
                   help="extra stream literal for the running-mean figure")
    r.set_defaults(run=cmd_report, limit=300)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except UnsupportedInstance as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return 3
    except EffiterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
