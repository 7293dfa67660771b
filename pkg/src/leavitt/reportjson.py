"""Stable JSON reports for every result type.

Every report pins the schema version, serializes infinities as the string
"infinite" (never a sentinel number), renders exact rationals as strings,
and carries provenance text saying which fact produced each number.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any

from .digraph import Arrow, Cycle, Digraph, Path
from .growth import FiltrationLevel, GrowthReport
from .lpalgebra import AlgebraElement, NormalTerm
from .modules_ext import CycleSimple, ExtReport, PathSet, SinkSimple, render_poly
from .morita import HasseEdge, HasseNode, K0Group, MoritaVerdict, WeightedHasseDiagram
from .reduction import ReductionStep, ReductionTrace
from .textio import render_element, render_term

SCHEMA = "leavitt-report/1"


def _number(x):
    if isinstance(x, float) and math.isinf(x):
        return "infinite"
    if isinstance(x, Fraction):
        return str(x)
    return x


def to_jsonable(obj: Any) -> Any:
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, (float, Fraction)):
        return _number(obj)
    if isinstance(obj, Digraph):
        return {
            "type": "digraph",
            "vertices": list(obj.vertices),
            "arrows": [
                {"name": a.name, "source": a.source, "target": a.target}
                for a in obj.arrows
            ],
        }
    if isinstance(obj, Arrow):
        return {"name": obj.name, "source": obj.source, "target": obj.target}
    if isinstance(obj, Path):
        return {"source": obj.source, "target": obj.target, "arrows": list(obj.names())}
    if isinstance(obj, Cycle):
        return {"base": obj.base_vertex, "arrows": [a.name for a in obj.arrows]}
    if isinstance(obj, NormalTerm):
        return render_term(obj)
    if isinstance(obj, AlgebraElement):
        return {
            "type": "element",
            "text": render_element(obj),
            "terms": [
                {"coefficient": str(c), "term": render_term(t), "grade": t.grade}
                for t, c in obj.items()
            ],
        }
    if isinstance(obj, ReductionStep):
        return {
            "vertex": obj.vertex,
            "new_arrows": {name: list(pair) for name, pair in obj.new_arrows},
        }
    if isinstance(obj, ReductionTrace):
        return {
            "type": "reduction",
            "initial": to_jsonable(obj.initial),
            "final": to_jsonable(obj.final),
            "steps": [to_jsonable(s) for s in obj.steps],
            "surviving_vertices": list(obj.surviving),
            "provenance": "eliminating a loopless non-sink splices each in/out "
            "arrow pair and preserves the Morita type",
        }
    if isinstance(obj, FiltrationLevel):
        return {
            "n": obj.n,
            "absorbed": sorted(obj.absorbed),
            "quotient_vertices": list(obj.quotient.vertices),
            "u_count": obj.u_count,
        }
    if isinstance(obj, GrowthReport):
        return {
            "type": "growth_report",
            "gk_dimension": _number(obj.gk_dimension),
            "height": obj.height,
            "growth_polynomial": list(obj.polynomial),
            "sink_heights": dict(sorted(obj.sink_heights.items())),
            "cycle_heights": [
                {"cycle": to_jsonable(c), "height": h}
                for c, h in sorted(obj.cycle_heights.items(), key=lambda kv: kv[0].sort_key())
            ],
            "filtration": [to_jsonable(lv) for lv in obj.levels],
            "provenance": {
                "gk_dimension": "equals the digraph height; finite exactly when "
                "cycles are pairwise disjoint",
                "growth_polynomial": "coefficient 0 counts sinks, coefficient i "
                "counts cycles of height i; a Morita invariant with degree the "
                "GK dimension",
                "filtration": "level n absorbs the hereditary saturated closure "
                "of the sinks and the bases of cycles of height below n",
            },
        }
    if isinstance(obj, PathSet):
        return {
            "type": "path_set",
            "kind": obj.kind,
            "finite": obj.finite,
            "size": _number(obj.size),
            "paths": None if obj.paths is None else [to_jsonable(p) for p in obj.paths],
        }
    if isinstance(obj, SinkSimple):
        return {"type": "simple_module", "kind": "sink", "sink": obj.sink}
    if isinstance(obj, CycleSimple):
        return {
            "type": "simple_module",
            "kind": "cycle",
            "cycle": to_jsonable(obj.cycle),
            "polynomial": render_poly(obj.poly),
            "degree": obj.degree,
            "irreducibility_verified": obj.irreducibility_verified,
            "chen_label": obj.chen_label,
        }
    if isinstance(obj, ExtReport):
        return {
            "type": "ext_dimension",
            "value": _number(obj.value),
            "case": obj.case,
            "detail": {k: _number(v) for k, v in obj.detail.items()},
            "provenance": {
                "projective_first_argument": "sink-type simples are projective",
                "outside_support": "the module vanishes at the first cycle's base",
                "intermediate_cycle": "a cycle strictly between pumps infinitely "
                "many connecting paths",
                "same_cycle": "cokernel of polynomial multiplication on the "
                "cycle corner, computed exactly",
                "covering_sink": "deg(f) times the connecting-path count",
                "covering_cycle": "deg(f1) times the connecting-path count times deg(f2)",
            }[obj.case],
        }
    if isinstance(obj, HasseNode):
        return {"key": obj.key, "kind": obj.kind, "height": obj.height}
    if isinstance(obj, HasseEdge):
        return {"source": obj.source, "target": obj.target, "multiplicity": obj.multiplicity}
    if isinstance(obj, WeightedHasseDiagram):
        return {
            "type": "weighted_hasse_diagram",
            "nodes": [to_jsonable(n) for n in obj.nodes],
            "edges": [to_jsonable(e) for e in obj.edges],
            "canonical_form": repr(obj.canonical_form()),
            "provenance": "covering edges of the sink/cycle poset, labelled by "
            "arrow multiplicities in the complete reduction; a Morita invariant, "
            "complete below dimension 4",
        }
    if isinstance(obj, K0Group):
        return {
            "type": "k0",
            "free_rank": obj.free_rank,
            "invariant_factors": list(obj.invariant_factors),
            "description": obj.describe(),
            "provenance": "cokernel of (arrow-count matrix minus identity) on "
            "non-sink rows, in Smith normal form; supplementary separating invariant",
        }
    if isinstance(obj, MoritaVerdict):
        return {
            "type": "morita_verdict",
            "verdict": obj.kind,
            "invariant": obj.invariant,
            "detail": {k: to_jsonable(v) for k, v in obj.detail.items()},
        }
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [to_jsonable(x) for x in obj]
        if isinstance(obj, (set, frozenset)):
            items.sort(key=repr)
        return items
    raise TypeError(f"no JSON form for {type(obj).__name__}")


def report(obj: Any) -> str:
    payload = {"schema": SCHEMA, "result": to_jsonable(obj)}
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
