"""Graph reduction: eliminate loopless non-sinks, splicing length-2 paths.

Eliminating a vertex v replaces every pair (f into v, g out of v) with a
single new arrow from the source of f to the target of g, then removes v
and every arrow touching it.  A source is simply deleted.  Iterating until
no loopless non-sink remains yields a complete reduction; when the cycles
of the input are pairwise disjoint that result is unique up to isomorphism.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .config import DEFAULT_LIMITS, Limits
from .digraph import Arrow, Digraph, GraphError


@dataclass(frozen=True)
class ReductionStep:
    """One elimination: the vertex and, per new arrow, the spliced pair."""

    vertex: str
    new_arrows: tuple[tuple[str, tuple[str, str]], ...]  # (new name, (in name, out name))

    def as_dict(self) -> dict[str, tuple[str, str]]:
        return dict(self.new_arrows)


@dataclass(frozen=True)
class ReductionTrace:
    initial: Digraph
    final: Digraph
    steps: tuple[ReductionStep, ...]

    def replay(self) -> Digraph:
        """Re-derive the final graph from the initial one; must agree exactly."""
        g = self.initial
        for step in self.steps:
            g, redo = reduce_at(g, step.vertex)
            if redo.new_arrows != step.new_arrows:
                raise GraphError(
                    f"trace replay diverged at vertex {step.vertex}: arrow naming changed"
                )
        if g != self.final:
            raise GraphError("trace replay did not reproduce the final graph")
        return g

    @property
    def eliminated(self) -> tuple[str, ...]:
        return tuple(s.vertex for s in self.steps)

    @property
    def surviving(self) -> tuple[str, ...]:
        """Original vertices still present, identifying the corner realization."""
        return self.final.vertices


def _fresh_name(base: str, used: set[str]) -> str:
    name = base
    k = 2
    while name in used:
        name = f"{base}_{k}"
        k += 1
    used.add(name)
    return name


def reduce_at(g: Digraph, v: str, limits: Limits = DEFAULT_LIMITS) -> tuple[Digraph, ReductionStep]:
    """Eliminate the loopless non-sink v from g."""
    g.require_vertex(v)
    if g.is_sink(v):
        raise GraphError(f"cannot eliminate {v}: it is a sink")
    if g.has_loop(v):
        raise GraphError(f"cannot eliminate {v}: it has a loop")
    incoming = g.in_arrows(v)
    outgoing = g.out_arrows(v)
    kept = [a for a in g.arrows if v not in (a.source, a.target)]
    used = {a.name for a in kept}
    new_arrows: list[Arrow] = []
    provenance: list[tuple[str, tuple[str, str]]] = []
    for f in incoming:
        for h in outgoing:
            name = _fresh_name(f"{f.name}·{h.name}", used)
            new_arrows.append(Arrow(name, f.source, h.target))
            provenance.append((name, (f.name, h.name)))
    reduced = Digraph(
        (u for u in g.vertices if u != v), kept + new_arrows, limits=limits
    )
    return reduced, ReductionStep(v, tuple(provenance))


def is_completely_reduced(g: Digraph) -> bool:
    """True iff every vertex is a sink or has a loop."""
    return all(g.is_sink(v) or g.has_loop(v) for v in g.vertices)


def eligible_vertices(g: Digraph) -> tuple[str, ...]:
    return tuple(v for v in g.vertices if not g.is_sink(v) and not g.has_loop(v))


def complete_reduction(
    g: Digraph,
    order: Optional[Sequence[str]] = None,
    seed: Optional[int] = None,
    max_steps: Optional[int] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> tuple[Digraph, ReductionTrace]:
    """Reduce until no loopless non-sink remains.

    By default the lexicographically least eligible vertex goes first.  An
    explicit ``order`` acts as a priority list (useful to witness the two
    distinct reductions of graphs with intersecting cycles); a ``seed``
    picks eligible vertices at random, reproducibly.  ``max_steps`` stops
    early, producing a partial reduction.
    """
    if order is not None and seed is not None:
        raise GraphError("give either an explicit order or a random seed, not both")
    rng = random.Random(seed) if seed is not None else None
    priority = list(order) if order is not None else []
    current = g
    steps: list[ReductionStep] = []
    while True:
        if max_steps is not None and len(steps) >= max_steps:
            break
        eligible = eligible_vertices(current)
        if not eligible:
            break
        pick = None
        for v in priority:
            if v in eligible:
                pick = v
                break
        if pick is None:
            pick = rng.choice(eligible) if rng is not None else eligible[0]
        current, step = reduce_at(current, pick, limits=limits)
        steps.append(step)
    return current, ReductionTrace(g, current, tuple(steps))
