"""Generators for the standard graph corpus.

The quantum families take the number of loop vertices n >= 1:

* ``qD_even``  -- n chained loop vertices feeding a terminal sink (qD^{2n});
* ``qS_odd``   -- n chained loop vertices, no sink (qS^{2n-1});
* ``qS_even``  -- n chained loop vertices feeding two terminal sinks (qS^{2n});
* ``qRP_even`` -- n chained loop vertices with a double arrow to one sink (qRP^{2n}).

``toeplitz`` is an alias for qD_even with n = 1.  The named fixtures are
small graphs that exercise specific phenomena (reduction order sensitivity,
shortcuts, K0 separation, ...).
"""
from __future__ import annotations

from typing import Callable, Optional

from .digraph import Arrow, Digraph, GraphError


def _loop_chain(n: int) -> tuple[list[str], list[Arrow]]:
    if n < 1:
        raise GraphError("family size must be >= 1")
    vertices = [f"v{i}" for i in range(1, n + 1)]
    arrows = [Arrow(f"l{i}", f"v{i}", f"v{i}") for i in range(1, n + 1)]
    arrows += [Arrow(f"a{i}", f"v{i}", f"v{i+1}") for i in range(1, n)]
    return vertices, arrows


def quantum_disk(n: int) -> Digraph:
    """qD^{2n}: n chained loop vertices and a terminal sink."""
    vertices, arrows = _loop_chain(n)
    vertices.append("w")
    arrows.append(Arrow(f"a{n}", f"v{n}", "w"))
    return Digraph(vertices, arrows)


def quantum_sphere_odd(n: int) -> Digraph:
    """qS^{2n-1}: n chained loop vertices, no sink."""
    vertices, arrows = _loop_chain(n)
    return Digraph(vertices, arrows)


def quantum_sphere_even(n: int) -> Digraph:
    """qS^{2n}: n chained loop vertices and two terminal sinks."""
    vertices, arrows = _loop_chain(n)
    vertices += ["w1", "w2"]
    arrows += [Arrow("b1", f"v{n}", "w1"), Arrow("b2", f"v{n}", "w2")]
    return Digraph(vertices, arrows)


def quantum_projective_even(n: int) -> Digraph:
    """qRP^{2n}: n chained loop vertices and a double arrow to one sink."""
    vertices, arrows = _loop_chain(n)
    vertices.append("w")
    arrows += [Arrow("b1", f"v{n}", "w"), Arrow("b2", f"v{n}", "w")]
    return Digraph(vertices, arrows)


def toeplitz() -> Digraph:
    return quantum_disk(1)


# -- named fixtures -------------------------------------------------------


def fixture_point() -> Digraph:
    """A single isolated vertex; the algebra is one-dimensional."""
    return Digraph(["v"])


def fixture_single_arrow() -> Digraph:
    """u -> v; the algebra is the 2x2 matrix algebra."""
    return Digraph(["u", "v"], [Arrow("e", "u", "v")])


def fixture_loop() -> Digraph:
    """One loop; the algebra is the Laurent polynomial algebra."""
    return Digraph(["v"], [Arrow("e", "v", "v")])


def fixture_jacobson() -> Digraph:
    """Loop e at v with exit f to a sink w (the Jacobson / Toeplitz shape)."""
    return Digraph(["v", "w"], [Arrow("e", "v", "v"), Arrow("f", "v", "w")])


def fixture_reduction_demo() -> Digraph:
    """Five vertices with parallel arrows; reduces to six loops plus a sink.

    Arrow counts: v->w x3, w->v x2, u->v, u->x x5, x->y.
    """
    arrows = [Arrow(f"a{i}", "v", "w") for i in (1, 2, 3)]
    arrows += [Arrow(f"b{i}", "w", "v") for i in (1, 2)]
    arrows.append(Arrow("c", "u", "v"))
    arrows += [Arrow(f"d{i}", "u", "x") for i in range(1, 6)]
    arrows.append(Arrow("f", "x", "y"))
    return Digraph(["u", "v", "w", "x", "y"], arrows)


def fixture_twin_cycles() -> Digraph:
    """Two 2-cycles sharing the middle vertex: u <-> v <-> w.

    Has two non-isomorphic complete reductions depending on which vertex
    is eliminated first.
    """
    return Digraph(
        ["u", "v", "w"],
        [Arrow("a", "u", "v"), Arrow("b", "v", "u"), Arrow("c", "v", "w"), Arrow("d", "w", "v")],
    )


def fixture_qd4_shortcut() -> Digraph:
    """The quantum 4-disk plus a shortcut arrow e from the top loop to the sink."""
    g = quantum_disk(2)
    return Digraph(g.vertices, g.arrows + (Arrow("e", "v1", "w"),))


def fixture_k0_demo() -> Digraph:
    """Two loop vertices over two sinks; u feeds v twice, v feeds both sinks."""
    return Digraph(
        ["u", "v", "w", "x"],
        [
            Arrow("lu", "u", "u"),
            Arrow("lv", "v", "v"),
            Arrow("p1", "u", "v"),
            Arrow("p2", "u", "v"),
            Arrow("q1", "v", "w"),
            Arrow("q2", "v", "x"),
        ],
    )


def fixture_k0_demo_shortcut() -> Digraph:
    """fixture_k0_demo plus the shortcut arrow e: u -> w; K0 tells them apart."""
    g = fixture_k0_demo()
    return Digraph(g.vertices, g.arrows + (Arrow("e", "u", "w"),))


FAMILIES: dict[str, Callable[[int], Digraph]] = {
    "qD_even": quantum_disk,
    "qS_odd": quantum_sphere_odd,
    "qS_even": quantum_sphere_even,
    "qRP_even": quantum_projective_even,
}

FIXTURES: dict[str, Callable[[], Digraph]] = {
    "toeplitz": toeplitz,
    "point": fixture_point,
    "single_arrow": fixture_single_arrow,
    "loop": fixture_loop,
    "jacobson": fixture_jacobson,
    "reduction_demo": fixture_reduction_demo,
    "twin_cycles": fixture_twin_cycles,
    "qd4_shortcut": fixture_qd4_shortcut,
    "k0_demo": fixture_k0_demo,
    "k0_demo_shortcut": fixture_k0_demo_shortcut,
}


def family_names() -> tuple[str, ...]:
    return tuple(sorted(FAMILIES)) + tuple(sorted(FIXTURES))


def corpus(family: str, n: Optional[int] = None) -> Digraph:
    """Build a corpus graph by family name (with size n) or fixture name."""
    if family in FAMILIES:
        if n is None:
            raise GraphError(f"family {family!r} needs a size n >= 1")
        return FAMILIES[family](n)
    if family in FIXTURES:
        if n not in (None, 1):
            raise GraphError(f"{family!r} is a fixture and takes no size")
        return FIXTURES[family]()
    raise GraphError(
        f"unknown family {family!r}; available: {', '.join(family_names())}"
    )


def standard_battery(max_n: int = 4) -> list[tuple[str, Digraph]]:
    """The named corpus used by the invariance and property sweeps."""
    battery: list[tuple[str, Digraph]] = [(name, make()) for name, make in sorted(FIXTURES.items())]
    for fam in sorted(FAMILIES):
        for n in range(1, max_n + 1):
            battery.append((f"{fam}_{n}", FAMILIES[fam](n)))
    return battery


def disjoint_cycle_battery(max_n: int = 4) -> list[tuple[str, Digraph]]:
    """The corpus graphs whose cycles are pairwise disjoint."""
    from .digraph import cycles_pairwise_disjoint

    return [(name, g) for name, g in standard_battery(max_n) if cycles_pairwise_disjoint(g)]
