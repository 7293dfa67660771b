"""Height function, Gelfand-Kirillov dimension, growth polynomial, filtration.

The sinks and cycles of a disjoint-cycle digraph form a poset under
reachability.  Heights are assigned recursively: 0 for sinks, 1 for
exitless cycles, and 2 + (max height strictly below) for cycles with an
exit.  The height of the graph equals the Gelfand-Kirillov dimension of
its algebra over a field, and the counts of nodes per height assemble
into the growth polynomial, a Morita invariant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

from .digraph import (
    Cycle,
    Digraph,
    GraphError,
    cycles_pairwise_disjoint,
    enumerate_cycles,
    hereditary_saturated_closure,
    quotient_graph,
    reaches,
    require_disjoint_cycles,
)

INFINITE = math.inf

Node = tuple[str, Union[str, Cycle]]  # ("sink", name) or ("cycle", Cycle)


def poset_nodes(g: Digraph) -> list[Node]:
    nodes: list[Node] = [("sink", w) for w in g.sinks()]
    nodes.extend(("cycle", c) for c in enumerate_cycles(g))
    return nodes


def _node_vertex(node: Node) -> str:
    kind, payload = node
    return payload if kind == "sink" else payload.base_vertex


def node_reaches(g: Digraph, a: Node, b: Node) -> bool:
    """Reachability between sink/cycle nodes, through their base vertices."""
    return reaches(g, _node_vertex(a), _node_vertex(b))


@dataclass(frozen=True)
class HeightData:
    sink_heights: dict[str, int]
    cycle_heights: dict[Cycle, int]
    height: int

    def of(self, node: Node) -> int:
        kind, payload = node
        return self.sink_heights[payload] if kind == "sink" else self.cycle_heights[payload]


def height(g: Digraph) -> HeightData:
    """Per-node heights and the height of the graph (0 when acyclic)."""
    require_disjoint_cycles(g)
    cycles = enumerate_cycles(g)
    sink_heights = {w: 0 for w in g.sinks()}
    nodes: list[Node] = [("sink", w) for w in g.sinks()]
    nodes.extend(("cycle", c) for c in cycles)
    memo: dict[Cycle, int] = {}

    def ht_cycle(c: Cycle) -> int:
        if c in memo:
            return memo[c]
        if not c.exits(g):
            memo[c] = 1
            return 1
        below = []
        for node in nodes:
            if node == ("cycle", c):
                continue
            if node_reaches(g, ("cycle", c), node):
                kind, payload = node
                below.append(0 if kind == "sink" else ht_cycle(payload))
        if not below:
            raise GraphError(f"cycle at {c.base_vertex} has an exit leading nowhere")
        memo[c] = 2 + max(below)
        return memo[c]

    cycle_heights = {c: ht_cycle(c) for c in cycles}
    total = max(cycle_heights.values(), default=0)
    return HeightData(sink_heights, cycle_heights, total)


def gk_dimension(g: Digraph) -> Union[int, float]:
    """The graph height when cycles are pairwise disjoint, infinity otherwise."""
    if not cycles_pairwise_disjoint(g):
        return INFINITE
    return height(g).height


def growth_polynomial(g: Digraph) -> list[int]:
    """Coefficients a_0..a_d: a_0 counts sinks, a_i counts cycles of height i."""
    data = height(g)
    coeffs = [0] * (data.height + 1)
    coeffs[0] = len(data.sink_heights)
    for h in data.cycle_heights.values():
        coeffs[h] += 1
    return coeffs


@dataclass(frozen=True)
class FiltrationLevel:
    n: int
    absorbed: frozenset[str]         # H_n
    quotient: Digraph                # the graph with H_n deleted
    u_count: int                     # simple-iso-class count entering at this level


def filtration(g: Digraph) -> list[FiltrationLevel]:
    """The ascending vertex filtration H_0 = {} .. H_{d+1} = V with quotients.

    H_n absorbs the sinks together with the base vertices of all cycles of
    height below n, closed hereditarily and saturatedly.  The level count
    U_0 is the number of sinks; U_n the number of cycles of height n.
    """
    data = height(g)
    d = data.height
    levels: list[FiltrationLevel] = []
    per_height: dict[int, int] = {}
    for h in data.cycle_heights.values():
        per_height[h] = per_height.get(h, 0) + 1
    for n in range(d + 2):
        if n == 0:
            absorbed: frozenset[str] = frozenset()
        else:
            seeds = set(g.sinks())
            seeds.update(
                c.base_vertex for c, h in data.cycle_heights.items() if h < n
            )
            absorbed = hereditary_saturated_closure(g, seeds)
        quotient = quotient_graph(g, absorbed)
        u_count = len(data.sink_heights) if n == 0 else per_height.get(n, 0)
        levels.append(FiltrationLevel(n, absorbed, quotient, u_count))
    return levels


@dataclass(frozen=True)
class GrowthReport:
    graph: Digraph
    sink_heights: dict[str, int]
    cycle_heights: dict[Cycle, int]
    height: int
    gk_dimension: Union[int, float]
    polynomial: list[int]
    levels: list[FiltrationLevel]


def growth_report(g: Digraph) -> GrowthReport:
    data = height(g)
    return GrowthReport(
        graph=g,
        sink_heights=data.sink_heights,
        cycle_heights=data.cycle_heights,
        height=data.height,
        gk_dimension=data.height,
        polynomial=growth_polynomial(g),
        levels=filtration(g),
    )


# -- empirical growth ---------------------------------------------------------


def basis_count_series(g: Digraph, n_max: int) -> list[int]:
    """N(0..n_max): how many basis terms have total letter length <= n.

    Computed by dynamic programming on exact path counts, never by
    enumeration: paths of each length into each sink pair up freely, and
    paths into a cycle base (with trailing copies of the cycle factored
    out) pair up with an arbitrary cycle power.
    """
    require_disjoint_cycles(g)
    counts_ending: dict[str, list[int]] = {
        v: [0] * (n_max + 1) for v in g.vertices
    }
    for v in g.vertices:
        counts_ending[v][0] = 1
    for length in range(1, n_max + 1):
        for v in g.vertices:
            counts_ending[v][length] = sum(
                counts_ending[a.source][length - 1] for a in g.in_arrows(v)
            )
    exact = [0] * (n_max + 1)  # terms of total letter length exactly n

    for w in g.sinks():
        into = counts_ending[w]
        for n in range(n_max + 1):
            exact[n] += sum(into[i] * into[n - i] for i in range(n + 1))

    for cyc in enumerate_cycles(g):
        k = len(cyc.arrows)
        base = counts_ending[cyc.base_vertex]
        # paths into the base with no trailing copy of the cycle
        reduced = [
            base[n] - (base[n - k] if n >= k else 0) for n in range(n_max + 1)
        ]
        pair = [
            sum(reduced[i] * reduced[n - i] for i in range(n + 1))
            for n in range(n_max + 1)
        ]
        for n in range(n_max + 1):
            exact[n] += pair[n]  # power 0
            m = k
            while m <= n:
                exact[n] += 2 * pair[n - m]  # powers +-(m/k)
                m += k

    out = []
    running = 0
    for n in range(n_max + 1):
        running += exact[n]
        out.append(running)
    return out


def fitted_degree(series: list[int], tail: Optional[int] = None) -> int:
    """Least d whose (d+1)-st finite difference vanishes on the tail."""
    n = len(series)
    if tail is None:
        tail = max(1, math.ceil((n - 1) / 4))
    diffs = list(series)
    for d in range(n):
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
        if not diffs:
            break
        check = diffs[-tail:] if len(diffs) >= tail else diffs
        if all(x == 0 for x in check):
            return d
    raise GraphError(
        "no polynomial degree fits the sampled growth; extend the sample range"
    )


def empirical_growth_degree(
    g: Digraph, n_max: Optional[int] = None
) -> tuple[list[int], int]:
    """Sampled basis counts and the polynomial degree they fit."""
    if n_max is None:
        n_max = 8 * max(len(g.vertices), 1)
    counts = basis_count_series(g, n_max)
    return counts, fitted_degree(counts)
