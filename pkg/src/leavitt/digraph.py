"""Finite directed multigraphs with named vertices and named parallel arrows.

Everything downstream (reduction, the symbolic engine, growth invariants)
manipulates these graphs, so the representation is deliberately strict:
immutable after construction, canonically ordered (lexicographic by name),
and validated up front.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .config import DEFAULT_LIMITS, Limits

NAME_PATTERN = re.compile(r"[A-Za-z0-9_.·]+\Z")  # · = the middle dot used for spliced arrows


class GraphError(Exception):
    """Domain error: invalid graph, vertex, path or operation argument."""


class IntersectingCyclesError(GraphError):
    """Raised by operations that only make sense when cycles are pairwise disjoint.

    Two cycles through a common vertex force exponential growth, so the
    finite normal-form and dimension machinery has nothing to offer there.
    """


class LimitExceeded(GraphError):
    """A configured size cap (arrows, cycles, terms) was hit."""


def check_name(name: str, what: str) -> str:
    if not isinstance(name, str) or not NAME_PATTERN.match(name):
        raise GraphError(f"invalid {what} name {name!r}: must match [A-Za-z0-9_.·]+")
    return name


@dataclass(frozen=True, order=True)
class Arrow:
    name: str
    source: str
    target: str

    @property
    def is_loop(self) -> bool:
        return self.source == self.target

    def __repr__(self) -> str:
        return f"Arrow({self.name}: {self.source}->{self.target})"


class Digraph:
    """A finite directed multigraph.

    Vertices and arrows are stored sorted by name; two graphs compare equal
    iff they have identical vertex and arrow data.  Instances are immutable.
    """

    __slots__ = ("vertices", "arrows", "_out", "_in", "_arrow_by_name", "_hash")

    def __init__(
        self,
        vertices: Iterable[str],
        arrows: Iterable[Arrow | tuple[str, str, str]] = (),
        limits: Limits = DEFAULT_LIMITS,
    ):
        vs = tuple(sorted(check_name(v, "vertex") for v in vertices))
        if len(set(vs)) != len(vs):
            dup = sorted({v for v in vs if vs.count(v) > 1})
            raise GraphError(f"duplicate vertex name(s): {', '.join(dup)}")
        normalized = []
        for a in arrows:
            if not isinstance(a, Arrow):
                a = Arrow(*a)
            check_name(a.name, "arrow")
            normalized.append(a)
        normalized.sort(key=lambda a: a.name)
        if len(normalized) > limits.max_arrows:
            raise LimitExceeded(
                f"{len(normalized)} arrows exceeds the cap of {limits.max_arrows}"
            )
        vset = set(vs)
        seen: set[str] = set()
        for a in normalized:
            if a.name in seen:
                raise GraphError(f"duplicate arrow name: {a.name}")
            seen.add(a.name)
            for endpoint in (a.source, a.target):
                if endpoint not in vset:
                    raise GraphError(f"arrow {a.name} references unknown vertex {endpoint!r}")
        self.vertices = vs
        self.arrows = tuple(normalized)
        out: dict[str, list[Arrow]] = {v: [] for v in vs}
        inc: dict[str, list[Arrow]] = {v: [] for v in vs}
        for a in self.arrows:
            out[a.source].append(a)
            inc[a.target].append(a)
        self._out = {v: tuple(lst) for v, lst in out.items()}
        self._in = {v: tuple(lst) for v, lst in inc.items()}
        self._arrow_by_name = {a.name: a for a in self.arrows}
        self._hash = hash((self.vertices, self.arrows))

    # -- basic queries -------------------------------------------------

    def has_vertex(self, v: str) -> bool:
        return v in self._out

    def require_vertex(self, v: str) -> str:
        if v not in self._out:
            raise GraphError(f"unknown vertex {v!r}")
        return v

    def arrow(self, name: str) -> Arrow:
        try:
            return self._arrow_by_name[name]
        except KeyError:
            raise GraphError(f"unknown arrow {name!r}") from None

    def has_arrow(self, name: str) -> bool:
        return name in self._arrow_by_name

    def out_arrows(self, v: str) -> tuple[Arrow, ...]:
        self.require_vertex(v)
        return self._out[v]

    def in_arrows(self, v: str) -> tuple[Arrow, ...]:
        self.require_vertex(v)
        return self._in[v]

    def is_sink(self, v: str) -> bool:
        return not self.out_arrows(v)

    def is_source(self, v: str) -> bool:
        return not self.in_arrows(v)

    def has_loop(self, v: str) -> bool:
        return any(a.target == v for a in self.out_arrows(v))

    def sinks(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if not self._out[v])

    def arrow_multiplicity(self, u: str, v: str) -> int:
        return sum(1 for a in self.out_arrows(u) if a.target == v)

    def renamed(
        self,
        vertex_map: Mapping[str, str],
        arrow_map: Optional[Mapping[str, str]] = None,
    ) -> "Digraph":
        """Relabel vertices (and optionally arrows) through bijections."""
        vm = dict(vertex_map)
        missing = [v for v in self.vertices if v not in vm]
        if missing:
            raise GraphError(f"vertex map misses {missing[0]!r}")
        if len(set(vm[v] for v in self.vertices)) != len(self.vertices):
            raise GraphError("vertex map is not injective")
        am = dict(arrow_map) if arrow_map else {a.name: a.name for a in self.arrows}
        arrows = [Arrow(am[a.name], vm[a.source], vm[a.target]) for a in self.arrows]
        return Digraph((vm[v] for v in self.vertices), arrows)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Digraph)
            and self.vertices == other.vertices
            and self.arrows == other.arrows
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Digraph({len(self.vertices)} vertices, {len(self.arrows)} arrows)"

    def __setattr__(self, key, value):
        if hasattr(self, "_hash"):
            raise AttributeError("Digraph is immutable")
        object.__setattr__(self, key, value)


class Path:
    """A composable arrow sequence; a length-0 path is anchored at a vertex."""

    __slots__ = ("arrows", "_anchor")

    def __init__(self, arrows: Sequence[Arrow] = (), anchor: Optional[str] = None):
        arrows = tuple(arrows)
        if not arrows:
            if anchor is None:
                raise GraphError("a length-0 path needs an anchor vertex")
        else:
            for a, b in zip(arrows, arrows[1:]):
                if a.target != b.source:
                    raise GraphError(
                        f"arrows {a.name} and {b.name} do not compose "
                        f"({a.target} != {b.source})"
                    )
            if anchor is not None and anchor != arrows[0].source:
                raise GraphError("anchor disagrees with the first arrow's source")
        self.arrows = arrows
        self._anchor = anchor

    @property
    def source(self) -> str:
        return self.arrows[0].source if self.arrows else self._anchor

    @property
    def target(self) -> str:
        return self.arrows[-1].target if self.arrows else self._anchor

    def __len__(self) -> int:
        return len(self.arrows)

    def internal_vertices(self) -> frozenset[str]:
        """Sources of the constituent arrows; empty for a vertex."""
        return frozenset(a.source for a in self.arrows)

    def visited_vertices(self) -> tuple[str, ...]:
        if not self.arrows:
            return (self._anchor,)
        return tuple(a.source for a in self.arrows) + (self.arrows[-1].target,)

    def __add__(self, other: "Path | Arrow") -> "Path":
        tail = (other,) if isinstance(other, Arrow) else other.arrows
        if not tail:
            if other.source != self.target:
                raise GraphError("paths do not compose")
            return self
        if self.target != tail[0].source:
            raise GraphError("paths do not compose")
        if not self.arrows:
            return Path(tail)
        return Path(self.arrows + tail)

    def ends_with(self, suffix: tuple[Arrow, ...]) -> bool:
        n = len(suffix)
        return n > 0 and self.arrows[-n:] == suffix

    def names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.arrows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Path):
            return NotImplemented
        return self.arrows == other.arrows and self.source == other.source

    def __hash__(self) -> int:
        return hash((self.arrows, self.source))

    def __repr__(self) -> str:
        if not self.arrows:
            return f"Path(<{self._anchor}>)"
        return "Path(" + ".".join(self.names()) + ")"


class Cycle:
    """A simple cycle stored in canonical rotation.

    The stored arrow sequence starts at the base vertex, the
    lexicographically least vertex name on the cycle, so two rotations of
    the same cycle compare equal.
    """

    __slots__ = ("arrows",)

    def __init__(self, arrows: Sequence[Arrow]):
        arrows = tuple(arrows)
        if not arrows:
            raise GraphError("a cycle has positive length")
        path = Path(arrows)  # validates composition
        if path.source != path.target:
            raise GraphError("not a closed path")
        sources = [a.source for a in arrows]
        if len(set(sources)) != len(sources):
            raise GraphError("not a simple cycle: a vertex repeats")
        k = sources.index(min(sources))
        self.arrows = arrows[k:] + arrows[:k]

    @property
    def base_vertex(self) -> str:
        return self.arrows[0].source

    def __len__(self) -> int:
        return len(self.arrows)

    @property
    def vertices(self) -> frozenset[str]:
        return frozenset(a.source for a in self.arrows)

    def as_path(self, repeat: int = 1) -> Path:
        if repeat == 0:
            return Path((), anchor=self.base_vertex)
        return Path(self.arrows * repeat)

    def exits(self, g: Digraph) -> tuple[Arrow, ...]:
        """Arrows of g leaving a cycle vertex but not lying on the cycle."""
        own = set(self.arrows)
        return tuple(
            a for v in sorted(self.vertices) for a in g.out_arrows(v) if a not in own
        )

    def sort_key(self) -> tuple:
        return (self.base_vertex, tuple(a.name for a in self.arrows))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cycle):
            return NotImplemented
        return self.arrows == other.arrows

    def __hash__(self) -> int:
        return hash(self.arrows)

    def __repr__(self) -> str:
        return "Cycle(" + ".".join(a.name for a in self.arrows) + ")"


# -- cycle structure ----------------------------------------------------


def enumerate_cycles(g: Digraph, limits: Limits = DEFAULT_LIMITS) -> tuple[Cycle, ...]:
    """Every simple cycle of g, each in canonical rotation, sorted.

    Parallel arrows give distinct cycles (two loops at one vertex are two
    cycles).  Aborts when the count exceeds the configured cap.
    """
    cycles: list[Cycle] = []
    for base in g.vertices:
        # depth-first search over arrows, visiting only vertices >= base,
        # so each cycle is found exactly once, rooted at its least vertex
        stack: list[tuple[str, tuple[Arrow, ...]]] = [(base, ())]
        while stack:
            v, trail = stack.pop()
            for a in reversed(g.out_arrows(v)):
                if a.target == base:
                    cycles.append(Cycle(trail + (a,)))
                    if len(cycles) > limits.max_cycles:
                        raise LimitExceeded(
                            f"more than {limits.max_cycles} simple cycles; raise the cap to proceed"
                        )
                elif (
                    a.target > base
                    and a.target != v
                    and all(t.source != a.target for t in trail)
                ):
                    stack.append((a.target, trail + (a,)))
    cycles.sort(key=Cycle.sort_key)
    return tuple(cycles)


def strongly_connected_components(g: Digraph) -> list[frozenset[str]]:
    """Tarjan's algorithm, iterative to survive deep graphs."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = 0
    components: list[frozenset[str]] = []

    for root in g.vertices:
        if root in index:
            continue
        work: list[tuple[str, Iterator[Arrow]]] = [(root, iter(g.out_arrows(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for a in it:
                w = a.target
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(g.out_arrows(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                components.append(frozenset(comp))
    return components


def cycles_pairwise_disjoint(g: Digraph) -> bool:
    """True iff no vertex lies on two distinct simple cycles.

    Decided structurally from the strongly connected components: a
    component either carries no cycle, or is exactly one cycle (internal
    arrow count equal to its size; at most one loop on a single vertex).
    """
    for comp in strongly_connected_components(g):
        internal = sum(
            1 for v in comp for a in g.out_arrows(v) if a.target in comp
        )
        if len(comp) == 1:
            if internal > 1:
                return False
        elif internal != len(comp):
            return False
    return True


def require_disjoint_cycles(g: Digraph) -> None:
    if not cycles_pairwise_disjoint(g):
        raise IntersectingCyclesError(
            "two cycles share a vertex, so the algebra has exponential growth "
            "and no finite normal-form basis"
        )


# -- reachability --------------------------------------------------------


def reaches(g: Digraph, u: str, v: str) -> bool:
    """Reflexive-transitive closure of the arrow relation."""
    g.require_vertex(u)
    g.require_vertex(v)
    if u == v:
        return True
    seen = {u}
    frontier = [u]
    while frontier:
        x = frontier.pop()
        for a in g.out_arrows(x):
            if a.target == v:
                return True
            if a.target not in seen:
                seen.add(a.target)
                frontier.append(a.target)
    return False


def predecessors(g: Digraph, w: str) -> frozenset[str]:
    """All vertices that reach w, including w itself."""
    g.require_vertex(w)
    seen = {w}
    frontier = [w]
    while frontier:
        x = frontier.pop()
        for a in g.in_arrows(x):
            if a.source not in seen:
                seen.add(a.source)
                frontier.append(a.source)
    return frozenset(seen)


def cycle_predecessors(g: Digraph, c: Cycle) -> frozenset[str]:
    """Predecessors of a cycle: the predecessors of any of its vertices."""
    return predecessors(g, c.base_vertex)


def successors(g: Digraph, v: str) -> frozenset[str]:
    g.require_vertex(v)
    seen = {v}
    frontier = [v]
    while frontier:
        x = frontier.pop()
        for a in g.out_arrows(x):
            if a.target not in seen:
                seen.add(a.target)
                frontier.append(a.target)
    return frozenset(seen)


# -- subgraphs and hereditary saturated sets -----------------------------


def full_subgraph(g: Digraph, vertices: Iterable[str]) -> Digraph:
    """The subgraph on the given vertices with every arrow between them."""
    keep = set(vertices)
    for v in keep:
        g.require_vertex(v)
    return Digraph(
        keep, (a for a in g.arrows if a.source in keep and a.target in keep)
    )


def predecessor_subgraph(g: Digraph, w: str) -> Digraph:
    return full_subgraph(g, predecessors(g, w))


def is_hereditary(g: Digraph, subset: Iterable[str]) -> bool:
    s = set(subset)
    return all(a.target in s for v in s for a in g.out_arrows(v))


def is_saturated(g: Digraph, subset: Iterable[str]) -> bool:
    s = set(subset)
    for v in g.vertices:
        if v in s or g.is_sink(v):
            continue
        if all(a.target in s for a in g.out_arrows(v)):
            return False
    return True


def hereditary_saturated_closure(g: Digraph, subset: Iterable[str]) -> frozenset[str]:
    """Least hereditary and saturated vertex set containing the input.

    Fixpoint iteration: absorb all successors, then absorb every non-sink
    whose arrow targets all landed inside, until stable.
    """
    closure: set[str] = set()
    for v in subset:
        g.require_vertex(v)
        closure.add(v)
    for v in tuple(closure):
        closure |= successors(g, v)
    changed = True
    while changed:
        changed = False
        for v in g.vertices:
            if v in closure or g.is_sink(v):
                continue
            out = g.out_arrows(v)
            if all(a.target in closure for a in out):
                closure.add(v)
                closure |= successors(g, v)
                changed = True
    return frozenset(closure)


def quotient_graph(g: Digraph, absorbed: Iterable[str]) -> Digraph:
    """Full subgraph on the complement of a hereditary saturated set."""
    h = set(absorbed)
    for v in h:
        g.require_vertex(v)
    for v in sorted(h):
        for a in g.out_arrows(v):
            if a.target not in h:
                raise GraphError(
                    f"set is not hereditary: {v} is in it but its successor "
                    f"{a.target} (arrow {a.name}) is not"
                )
    for v in g.vertices:
        if v in h or g.is_sink(v):
            continue
        if all(a.target in h for a in g.out_arrows(v)):
            raise GraphError(
                f"set is not saturated: every arrow from {v} lands in it, "
                f"but {v} is outside"
            )
    return full_subgraph(g, (v for v in g.vertices if v not in h))
