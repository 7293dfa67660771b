"""Command-line front end.

Exit codes: 0 success, 1 domain errors (intersecting cycles, unknown
vertices, caps), 2 usage or parse errors.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path as FsPath

from . import corpus as corpus_mod
from .digraph import Digraph, GraphError
from .growth import empirical_growth_degree, gk_dimension, growth_report, height
from .lpalgebra import algebra_over
from .modules_ext import (
    cycle_simple,
    ext_report,
    parse_poly,
    sink_simple,
)
from .morita import k0_invariants, morita_decide, shortcuts, weighted_hasse
from .reduction import complete_reduction
from .reportjson import report
from .textio import (
    GraphDocument,
    ParseError,
    parse_document,
    parse_element,
    render_element,
    render_term,
    serialize_document,
    serialize_graph,
)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return FsPath(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror or exc}", 0)


def _load_graph(path: str) -> Digraph:
    return parse_document(_read_text(path)).graph


def _fmt_inf(x):
    return "infinite" if isinstance(x, float) and math.isinf(x) else x


def _parse_descriptor(g: Digraph, text: str):
    parts = text.split(":", 2)
    if parts[0] == "sink" and len(parts) == 2:
        return sink_simple(g, parts[1])
    if parts[0] == "cycle" and len(parts) in (2, 3):
        f = parse_poly(parts[2]) if len(parts) == 3 else None
        return cycle_simple(g, parts[1], f)
    raise GraphError(
        f"bad descriptor {text!r}; use sink:VERTEX or cycle:VERTEX[:POLY]"
    )


def _emit(args, obj, human: str) -> None:
    if args.json:
        sys.stdout.write(report(obj))
    else:
        print(human)


# -- subcommand handlers -------------------------------------------------------


def cmd_validate(args) -> int:
    doc = parse_document(_read_text(args.file))
    if args.json:
        sys.stdout.write(report(doc.graph))
    else:
        sys.stdout.write(serialize_document(doc))
    return 0


def cmd_reduce(args) -> int:
    g = _load_graph(args.file)
    order = args.order.split(",") if args.order else None
    final, trace = complete_reduction(
        g, order=order, seed=args.seed, max_steps=args.steps
    )
    if args.json:
        sys.stdout.write(report(trace if args.trace else final))
        return 0
    sys.stdout.write(serialize_graph(final))
    if args.trace:
        for step in trace.steps:
            spliced = ", ".join(
                f"{name} <= {f}.{h}" for name, (f, h) in step.new_arrows
            )
            print(f"# eliminated {step.vertex}" + (f": {spliced}" if spliced else ""))
    return 0


def cmd_invariants(args) -> int:
    g = _load_graph(args.file)
    gk = gk_dimension(g)
    if isinstance(gk, float):
        if args.json:
            sys.stdout.write(report({"gk_dimension": gk, "note": "cycles intersect"}))
        else:
            print("gk_dimension: infinite (two cycles share a vertex)")
        return 0
    rep = growth_report(g)
    if args.json:
        sys.stdout.write(report(rep))
        return 0
    print(f"height: {rep.height}")
    print(f"gk_dimension: {rep.gk_dimension}")
    print(f"growth_polynomial: {rep.polynomial}")
    for w, h in sorted(rep.sink_heights.items()):
        print(f"sink {w}: height {h}")
    for c, h in sorted(rep.cycle_heights.items(), key=lambda kv: kv[0].sort_key()):
        print(f"cycle at {c.base_vertex} ({'.'.join(a.name for a in c.arrows)}): height {h}")
    for lv in rep.levels:
        print(
            f"level {lv.n}: absorbed {sorted(lv.absorbed)}, "
            f"quotient vertices {list(lv.quotient.vertices)}, new classes {lv.u_count}"
        )
    return 0


def cmd_growth(args) -> int:
    g = _load_graph(args.file)
    counts, degree = empirical_growth_degree(g, args.n_max)
    ht = height(g).height
    payload = {
        "counts": counts,
        "fitted_degree": degree,
        "height": ht,
        "agrees": degree == ht,
    }
    _emit(
        args,
        payload,
        f"basis counts to {len(counts) - 1}: {counts}\n"
        f"fitted degree: {degree} (height {ht}, {'agree' if degree == ht else 'DISAGREE'})",
    )
    return 0


def cmd_basis(args) -> int:
    g = _load_graph(args.file)
    alg = algebra_over(g)
    terms = alg.basis(args.max_len, source=args.source)
    if args.json:
        sys.stdout.write(report({"count": len(terms), "terms": terms}))
    else:
        for t in terms:
            print(render_term(t))
        print(f"# {len(terms)} terms of letter length <= {args.max_len}")
    return 0


def cmd_mult(args) -> int:
    g = _load_graph(args.file)
    alg = algebra_over(g)
    a = parse_element(alg, args.left)
    b = parse_element(alg, args.right)
    product = a * b
    _emit(args, product, render_element(product))
    return 0


def cmd_ext(args) -> int:
    g = _load_graph(args.file)
    b = _parse_descriptor(g, args.first)
    a = _parse_descriptor(g, args.second)
    rep = ext_report(g, b, a)
    _emit(
        args,
        rep,
        f"dim Ext = {_fmt_inf(rep.value)} (case {rep.case}"
        + (f", {rep.detail}" if rep.detail else "")
        + ")",
    )
    return 0


def cmd_hasse(args) -> int:
    g = _load_graph(args.file)
    diagram = weighted_hasse(g)
    if args.json:
        sys.stdout.write(report(diagram))
        return 0
    for n in diagram.nodes:
        mark = " (sink)" if n.kind == "sink" else ""
        print(f"node {n.key}: height {n.height}{mark}")
    for e in diagram.edges:
        print(f"edge {e.source} -> {e.target} x{e.multiplicity}")
    cuts = shortcuts(g)
    if cuts:
        print("shortcuts: " + ", ".join(a.name for a in cuts))
    return 0


def cmd_morita(args) -> int:
    g1 = _load_graph(args.first)
    g2 = _load_graph(args.second)
    verdict = morita_decide(g1, g2)
    human = f"verdict: {verdict.kind}"
    if verdict.invariant:
        human += f" (separating invariant: {verdict.invariant})"
    if verdict.kind == "unknown":
        human += f" - {verdict.detail['reason']}"
    _emit(args, verdict, human)
    return 0


def cmd_k0(args) -> int:
    g = _load_graph(args.file)
    k = k0_invariants(g)
    _emit(
        args,
        k,
        f"K0 = {k.describe()} (free rank {k.free_rank}, "
        f"invariant factors {list(k.invariant_factors)})",
    )
    return 0


def cmd_corpus(args) -> int:
    g = corpus_mod.corpus(args.family, args.n)
    doc = GraphDocument(g, name=args.family if args.n is None else f"{args.family}_{args.n}")
    text = serialize_document(doc)
    if args.output:
        FsPath(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {args.output}")
    elif args.json:
        sys.stdout.write(report(g))
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leavitt",
        description="Invariants of Leavitt path algebras of finite digraphs.",
    )
    parser.add_argument("--json", action="store_true", help="emit a JSON report")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse a graph file and echo it canonically")
    p.add_argument("file")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("reduce", help="run the reduction algorithm")
    p.add_argument("file")
    p.add_argument("--order", help="comma-separated vertex priority list")
    p.add_argument("--seed", type=int, help="random eligible-vertex order")
    p.add_argument("--steps", type=int, help="stop after this many eliminations")
    p.add_argument("--trace", action="store_true", help="include the step trace")
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("invariants", help="heights, GK dimension, growth polynomial, filtration")
    p.add_argument("file")
    p.set_defaults(fn=cmd_invariants)

    p = sub.add_parser("growth", help="empirical basis counts and fitted degree")
    p.add_argument("file")
    p.add_argument("--n-max", type=int, default=None)
    p.set_defaults(fn=cmd_growth)

    p = sub.add_parser("basis", help="enumerate basis terms up to a letter length")
    p.add_argument("file")
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("--source", help="keep only terms starting at this vertex")
    p.set_defaults(fn=cmd_basis)

    p = sub.add_parser("mult", help="multiply two elements")
    p.add_argument("file")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(fn=cmd_mult)

    p = sub.add_parser("ext", help="dim Ext between two simple modules")
    p.add_argument("file")
    p.add_argument("first", help="sink:VERTEX or cycle:VERTEX[:POLY]")
    p.add_argument("second", help="sink:VERTEX or cycle:VERTEX[:POLY]")
    p.set_defaults(fn=cmd_ext)

    p = sub.add_parser("hasse", help="weighted Hasse diagram and shortcuts")
    p.add_argument("file")
    p.set_defaults(fn=cmd_hasse)

    p = sub.add_parser("morita", help="decide Morita equivalence where possible")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(fn=cmd_morita)

    p = sub.add_parser("k0", help="K0 invariant factors")
    p.add_argument("file")
    p.set_defaults(fn=cmd_k0)

    p = sub.add_parser("corpus", help="emit a named corpus graph")
    p.add_argument("family", help="family or fixture name; see README")
    p.add_argument("n", nargs="?", type=int, default=None)
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_corpus)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
