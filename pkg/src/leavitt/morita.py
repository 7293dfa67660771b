"""Morita-equivalence machinery: weighted Hasse diagrams, shortcuts,
graph isomorphism, K0 invariant factors, and the decision pipeline.

The weighted Hasse diagram records the poset of sinks and cycles under
reachability, with sink marks, heights, and covering edges labelled by
arrow multiplicities in the complete reduction.  Below dimension 4 it is
a complete invariant; above, shortcuts escape it, so the verdict degrades
honestly to Unknown when every computed invariant agrees.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .config import DEFAULT_LIMITS, Limits
from .digraph import (
    Digraph,
    GraphError,
    LimitExceeded,
    enumerate_cycles,
    reaches,
    require_disjoint_cycles,
)
from .growth import Node, growth_polynomial, height
from .reduction import complete_reduction


# -- weighted Hasse diagram ---------------------------------------------------


@dataclass(frozen=True)
class HasseNode:
    key: str          # vertex of the complete reduction
    kind: str         # "sink" | "cycle"
    height: int


@dataclass(frozen=True)
class HasseEdge:
    source: str
    target: str
    multiplicity: int


@dataclass(frozen=True)
class WeightedHasseDiagram:
    nodes: tuple[HasseNode, ...]
    edges: tuple[HasseEdge, ...]

    def canonical_form(self) -> tuple:
        """A relabeling-invariant encoding, minimized over node orderings.

        Nodes are grouped by (kind, height); within groups every ordering
        is tried and the lexicographically least edge encoding wins.  The
        diagrams at hand are small, and attribute groups smaller still.
        """
        groups: dict[tuple[str, int], list[str]] = {}
        for node in sorted(self.nodes, key=lambda n: (n.kind, n.height, n.key)):
            groups.setdefault((node.kind, node.height), []).append(node.key)
        group_items = sorted(groups.items())
        signature = tuple((kind, ht, len(keys)) for (kind, ht), keys in group_items)
        multiplicity = {(e.source, e.target): e.multiplicity for e in self.edges}
        best: Optional[tuple] = None
        perm_sets = [list(itertools.permutations(keys)) for _, keys in group_items]
        for combo in itertools.product(*perm_sets):
            order: list[str] = [k for perm in combo for k in perm]
            index = {k: i for i, k in enumerate(order)}
            encoded = tuple(
                sorted(
                    (index[s], index[t], m)
                    for (s, t), m in multiplicity.items()
                )
            )
            if best is None or encoded < best:
                best = encoded
        return (signature, best or ())

    def isomorphic(self, other: "WeightedHasseDiagram") -> bool:
        return self.canonical_form() == other.canonical_form()


def _node_for_reduced_vertex(g: Digraph, reduced: Digraph, v: str) -> Node:
    if reduced.is_sink(v):
        return ("sink", v)
    for c in enumerate_cycles(g):
        if v in c.vertices:
            return ("cycle", c)
    raise GraphError(f"surviving vertex {v} lies on no cycle of the input")


def weighted_hasse_with_nodes(
    g: Digraph, limits: Limits = DEFAULT_LIMITS
) -> tuple[WeightedHasseDiagram, dict[str, Node]]:
    """The diagram plus, per node key, the original sink or cycle it names."""
    require_disjoint_cycles(g)
    reduced, _ = complete_reduction(g, limits=limits)
    data = height(reduced)
    nodes = []
    for v in reduced.vertices:
        if reduced.is_sink(v):
            nodes.append(HasseNode(v, "sink", 0))
        else:
            (cyc,) = [c for c in enumerate_cycles(reduced) if v in c.vertices]
            nodes.append(HasseNode(v, "cycle", data.cycle_heights[cyc]))
    edges = []
    vertices = reduced.vertices
    for u in vertices:
        for v in vertices:
            if u == v or not reaches(reduced, u, v):
                continue
            strictly_between = any(
                z not in (u, v)
                and reaches(reduced, u, z)
                and reaches(reduced, z, v)
                for z in vertices
            )
            if strictly_between:
                continue
            mult = reduced.arrow_multiplicity(u, v)
            edges.append(HasseEdge(u, v, mult))
    diagram = WeightedHasseDiagram(tuple(nodes), tuple(sorted(edges, key=lambda e: (e.source, e.target))))
    correspondence = {v: _node_for_reduced_vertex(g, reduced, v) for v in reduced.vertices}
    return diagram, correspondence


def weighted_hasse(g: Digraph, limits: Limits = DEFAULT_LIMITS) -> WeightedHasseDiagram:
    return weighted_hasse_with_nodes(g, limits)[0]


def shortcuts(g: Digraph, limits: Limits = DEFAULT_LIMITS) -> tuple:
    """Non-loop arrows of the complete reduction whose source does not cover
    their target (something sits strictly between)."""
    require_disjoint_cycles(g)
    reduced, _ = complete_reduction(g, limits=limits)
    out = []
    for a in reduced.arrows:
        if a.is_loop:
            continue
        strictly_between = any(
            z not in (a.source, a.target)
            and reaches(reduced, a.source, z)
            and reaches(reduced, z, a.target)
            for z in reduced.vertices
        )
        if strictly_between:
            out.append(a)
    return tuple(out)


# -- digraph isomorphism -------------------------------------------------------


def _degree_profile(g: Digraph, v: str) -> tuple:
    loops = sum(1 for a in g.out_arrows(v) if a.target == v)
    outs = sorted(
        g.arrow_multiplicity(v, t)
        for t in {a.target for a in g.out_arrows(v)}
        if t != v
    )
    ins = sorted(
        g.arrow_multiplicity(s, v)
        for s in {a.source for a in g.in_arrows(v)}
        if s != v
    )
    return (loops, len(g.out_arrows(v)), len(g.in_arrows(v)), tuple(outs), tuple(ins))


def digraph_isomorphic(
    g1: Digraph, g2: Digraph, limits: Limits = DEFAULT_LIMITS
) -> Optional[dict[str, str]]:
    """A multiplicity-preserving vertex bijection, or None.

    Backtracking over vertices in sorted order with degree-profile pruning;
    the first solution found is the lexicographically least bijection.
    """
    if len(g1.vertices) != len(g2.vertices) or len(g1.arrows) != len(g2.arrows):
        return None
    if len(g1.vertices) > limits.max_iso_vertices:
        raise LimitExceeded(
            f"isomorphism search capped at {limits.max_iso_vertices} vertices; "
            f"got {len(g1.vertices)} (raise the cap to proceed)"
        )
    prof1 = {v: _degree_profile(g1, v) for v in g1.vertices}
    prof2 = {v: _degree_profile(g2, v) for v in g2.vertices}
    if sorted(prof1.values()) != sorted(prof2.values()):
        return None
    order = g1.vertices
    assignment: dict[str, str] = {}
    used: set[str] = set()

    def consistent(v1: str, v2: str) -> bool:
        if prof1[v1] != prof2[v2]:
            return False
        for u1, u2 in assignment.items():
            if g1.arrow_multiplicity(v1, u1) != g2.arrow_multiplicity(v2, u2):
                return False
            if g1.arrow_multiplicity(u1, v1) != g2.arrow_multiplicity(u2, v2):
                return False
        return g1.arrow_multiplicity(v1, v1) == g2.arrow_multiplicity(v2, v2)

    def search(i: int) -> bool:
        if i == len(order):
            return True
        v1 = order[i]
        for v2 in g2.vertices:
            if v2 in used or not consistent(v1, v2):
                continue
            assignment[v1] = v2
            used.add(v2)
            if search(i + 1):
                return True
            del assignment[v1]
            used.discard(v2)
        return False

    if search(0):
        return dict(assignment)
    return None


# -- K0 through Smith normal form ------------------------------------------------


@dataclass(frozen=True)
class K0Group:
    free_rank: int
    invariant_factors: tuple[int, ...]  # each > 1, each dividing the next

    def describe(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.invariant_factors]
        return " + ".join(parts) if parts else "0"


def smith_normal_form(rows: list[list[int]]) -> list[int]:
    """Diagonal of the Smith normal form; nonzero entries, divisibility chain."""
    m = [row[:] for row in rows]
    n_rows = len(m)
    n_cols = len(m[0]) if n_rows else 0
    diag: list[int] = []
    top = 0
    while top < min(n_rows, n_cols):
        # find the smallest nonzero entry in the remaining block
        pivot = None
        for i in range(top, n_rows):
            for j in range(top, n_cols):
                if m[i][j] != 0 and (pivot is None or abs(m[i][j]) < abs(m[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        m[top], m[i] = m[i], m[top]
        for row in m:
            row[top], row[j] = row[j], row[top]
        # clear the pivot row and column by division steps
        dirty = False
        for i in range(top + 1, n_rows):
            if m[i][top] != 0:
                q = m[i][top] // m[top][top]
                for jj in range(top, n_cols):
                    m[i][jj] -= q * m[top][jj]
                if m[i][top] != 0:
                    dirty = True
        for jj in range(top + 1, n_cols):
            if m[top][jj] != 0:
                q = m[top][jj] // m[top][top]
                for ii in range(top, n_rows):
                    m[ii][jj] -= q * m[ii][top]
                if m[top][jj] != 0:
                    dirty = True
        if dirty:
            continue
        # enforce divisibility: the pivot must divide the rest of the block
        offender = None
        for ii in range(top + 1, n_rows):
            for jj in range(top + 1, n_cols):
                if m[ii][jj] % m[top][top] != 0:
                    offender = ii
                    break
            if offender is not None:
                break
        if offender is not None:
            for jj in range(top, n_cols):
                m[top][jj] += m[offender][jj]
            continue
        diag.append(abs(m[top][top]))
        top += 1
    return diag


def k0_invariants(g: Digraph) -> K0Group:
    """The projective-class group in canonical form.

    Presentation: the free abelian group on the vertices modulo, for each
    non-sink v, the relation (sum over targets of arrow-count times target)
    minus v.  Invariant factors come from the exact Smith normal form.
    """
    vertices = list(g.vertices)
    index = {v: i for i, v in enumerate(vertices)}
    rows = []
    for v in vertices:
        if g.is_sink(v):
            continue
        row = [0] * len(vertices)
        row[index[v]] -= 1
        for a in g.out_arrows(v):
            row[index[a.target]] += 1
        rows.append(row)
    if not rows:
        return K0Group(len(vertices), ())
    diag = smith_normal_form(rows)
    nonzero = [d for d in diag if d != 0]
    return K0Group(
        free_rank=len(vertices) - len(nonzero),
        invariant_factors=tuple(d for d in nonzero if d > 1),
    )


# -- the decision pipeline ---------------------------------------------------------


@dataclass(frozen=True)
class MoritaVerdict:
    kind: str                      # "equivalent" | "not_equivalent" | "unknown"
    invariant: Optional[str] = None
    detail: dict = field(default_factory=dict)

    @property
    def is_equivalent(self) -> Optional[bool]:
        if self.kind == "equivalent":
            return True
        if self.kind == "not_equivalent":
            return False
        return None


def morita_decide(
    g1: Digraph, g2: Digraph, limits: Limits = DEFAULT_LIMITS
) -> MoritaVerdict:
    """Decide Morita equivalence where the invariants decide it.

    Pipeline: isomorphic complete reductions prove equivalence; differing
    growth polynomials, or non-isomorphic reductions below dimension 4,
    or differing weighted Hasse diagrams, or differing K0 groups prove
    inequivalence; otherwise the answer is honestly unknown (dimension at
    least 4 with shortcut contributions undetermined).
    """
    require_disjoint_cycles(g1)
    require_disjoint_cycles(g2)
    red1, _ = complete_reduction(g1, limits=limits)
    red2, _ = complete_reduction(g2, limits=limits)
    bijection = digraph_isomorphic(red1, red2, limits=limits)
    if bijection is not None:
        return MoritaVerdict(
            "equivalent",
            detail={
                "reduction_isomorphism": bijection,
                "note": "complete reductions are isomorphic digraphs",
            },
        )
    p1, p2 = growth_polynomial(g1), growth_polynomial(g2)
    if p1 != p2:
        return MoritaVerdict(
            "not_equivalent",
            invariant="growth_polynomial",
            detail={"first": p1, "second": p2},
        )
    gk = len(p1) - 1
    if gk < 4:
        return MoritaVerdict(
            "not_equivalent",
            invariant="complete_reduction",
            detail={
                "gk_dimension": gk,
                "note": "below dimension 4 non-isomorphic complete reductions "
                "force inequivalence",
                "first_vertices": len(red1.vertices),
                "second_vertices": len(red2.vertices),
            },
        )
    h1, h2 = weighted_hasse(g1, limits), weighted_hasse(g2, limits)
    if not h1.isomorphic(h2):
        return MoritaVerdict(
            "not_equivalent",
            invariant="weighted_hasse_diagram",
            detail={"first": _hasse_summary(h1), "second": _hasse_summary(h2)},
        )
    k1, k2 = k0_invariants(g1), k0_invariants(g2)
    if k1 != k2:
        return MoritaVerdict(
            "not_equivalent",
            invariant="k0",
            detail={"first": k1.describe(), "second": k2.describe()},
        )
    return MoritaVerdict(
        "unknown",
        detail={
            "reason": "dimension at least 4 and all computed invariants agree; "
            "the contribution of shortcuts is undetermined",
            "code": "gk_ge_4_shortcuts_undetermined",
            "gk_dimension": gk,
            "shortcuts_first": [a.name for a in shortcuts(g1, limits)],
            "shortcuts_second": [a.name for a in shortcuts(g2, limits)],
        },
    )


def _hasse_summary(d: WeightedHasseDiagram) -> dict:
    return {
        "nodes": [(n.key, n.kind, n.height) for n in d.nodes],
        "edges": [(e.source, e.target, e.multiplicity) for e in d.edges],
    }
