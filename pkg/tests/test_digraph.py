import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leavitt import corpus
from leavitt.digraph import (
    Arrow,
    Cycle,
    Digraph,
    GraphError,
    LimitExceeded,
    Path,
    cycles_pairwise_disjoint,
    enumerate_cycles,
    full_subgraph,
    hereditary_saturated_closure,
    is_hereditary,
    is_saturated,
    predecessors,
    quotient_graph,
    reaches,
)
from leavitt.config import Limits

from conftest import SEED, random_renaming


# -- independent oracles ----------------------------------------------------


def reach_oracle(g: Digraph, u: str, v: str) -> bool:
    """Reflexive-transitive closure by explicit relation powers."""
    rel = {(x, x) for x in g.vertices} | {(a.source, a.target) for a in g.arrows}
    changed = True
    while changed:
        changed = False
        for (x, y) in list(rel):
            for (y2, z) in list(rel):
                if y == y2 and (x, z) not in rel:
                    rel.add((x, z))
                    changed = True
    return (u, v) in rel


def closure_oracle(g: Digraph, xs) -> frozenset:
    """Naive fixpoint for the hereditary saturated closure."""
    s = set(xs)
    while True:
        grown = set(s)
        for v in s:
            grown.update(a.target for a in g.out_arrows(v))
        for v in g.vertices:
            out = g.out_arrows(v)
            if out and all(a.target in grown for a in out):
                grown.add(v)
        if grown == s:
            return frozenset(s)
        s = grown


# -- construction and validation ---------------------------------------------


def test_arrow_endpoints_must_exist():
    with pytest.raises(GraphError, match="unknown vertex"):
        Digraph(["u"], [Arrow("e", "u", "v")])


def test_duplicate_names_rejected():
    with pytest.raises(GraphError, match="duplicate vertex"):
        Digraph(["u", "u"])
    with pytest.raises(GraphError, match="duplicate arrow"):
        Digraph(["u"], [Arrow("e", "u", "u"), Arrow("e", "u", "u")])


def test_arrow_cap_enforced():
    limits = Limits(max_arrows=3)
    arrows = [Arrow(f"e{i}", "u", "u") for i in range(4)]
    with pytest.raises(LimitExceeded):
        Digraph(["u"], arrows, limits=limits)


def test_graph_is_immutable_and_canonical():
    g = Digraph(["b", "a"], [Arrow("y", "a", "b"), Arrow("x", "b", "a")])
    assert g.vertices == ("a", "b")
    assert [a.name for a in g.arrows] == ["x", "y"]
    with pytest.raises(AttributeError):
        g.vertices = ()


def test_path_composition_checked():
    g = corpus.fixture_jacobson()
    e, f = g.arrow("e"), g.arrow("f")
    p = Path((e, f))
    assert p.source == "v" and p.target == "w" and len(p) == 2
    assert p.internal_vertices() == {"v"}
    with pytest.raises(GraphError):
        Path((f, e))
    with pytest.raises(GraphError):
        Path(())  # needs an anchor


def test_cycle_canonical_rotation():
    g = corpus.fixture_twin_cycles()
    a, b = g.arrow("a"), g.arrow("b")
    c1 = Cycle((a, b))
    c2 = Cycle((b, a))
    assert c1 == c2
    assert c1.base_vertex == "u"
    assert c1.arrows[0] is a


def test_cycle_rejects_non_simple():
    g = corpus.fixture_twin_cycles()
    a, b, c, d = (g.arrow(n) for n in "abcd")
    with pytest.raises(GraphError):
        Cycle((a, b, c, d))  # u->v->u->... does not close simply
    with pytest.raises(GraphError, match="repeats"):
        Cycle((a, b, a, b))


# -- cycle enumeration --------------------------------------------------------


def test_enumerate_cycles_loop():
    g = corpus.fixture_loop()
    (c,) = enumerate_cycles(g)
    assert c.base_vertex == "v" and len(c) == 1


def test_enumerate_cycles_acyclic():
    assert enumerate_cycles(corpus.fixture_single_arrow()) == ()


def test_enumerate_cycles_twin():
    g = corpus.fixture_twin_cycles()
    cycles = enumerate_cycles(g)
    assert len(cycles) == 2
    assert sorted(c.base_vertex for c in cycles) == ["u", "v"]
    assert all(len(c) == 2 for c in cycles)


def test_enumerate_cycles_parallel_loops():
    g = Digraph(["v"], [Arrow(f"e{i}", "v", "v") for i in range(6)])
    assert len(enumerate_cycles(g)) == 6


def test_enumerate_cycles_cap():
    g = Digraph(["v"], [Arrow(f"e{i}", "v", "v") for i in range(5)])
    with pytest.raises(LimitExceeded):
        enumerate_cycles(g, limits=Limits(max_cycles=4))


def test_cycle_enumeration_respects_renaming():
    rng = random.Random(SEED)
    for name, g in corpus.standard_battery(max_n=2):
        renamed = random_renaming(g, rng)
        assert len(enumerate_cycles(g)) == len(enumerate_cycles(renamed)), name


def test_enumerated_cycles_satisfy_invariants():
    for name, g in corpus.standard_battery(max_n=3):
        for c in enumerate_cycles(g):
            assert c.base_vertex == min(c.vertices)
            sources = [a.source for a in c.arrows]
            assert len(set(sources)) == len(sources)
            Path(c.arrows)  # composes and closes


# -- disjointness --------------------------------------------------------------


def test_disjointness_examples():
    assert not cycles_pairwise_disjoint(corpus.fixture_twin_cycles())
    assert cycles_pairwise_disjoint(corpus.quantum_sphere_odd(3))
    six_loops = Digraph(["v"], [Arrow(f"e{i}", "v", "v") for i in range(6)])
    assert not cycles_pairwise_disjoint(six_loops)
    assert not cycles_pairwise_disjoint(corpus.fixture_reduction_demo())


def test_disjointness_cross_check_with_enumeration():
    for name, g in corpus.standard_battery(max_n=3):
        cycles = enumerate_cycles(g)
        per_vertex_ok = all(
            sum(1 for c in cycles if v in c.vertices) <= 1 for v in g.vertices
        )
        assert cycles_pairwise_disjoint(g) == per_vertex_ok, name


# -- reachability ----------------------------------------------------------------


def test_reaches_and_predecessors_examples():
    toeplitz = corpus.fixture_jacobson()
    assert predecessors(toeplitz, "w") == {"v", "w"}
    assert predecessors(toeplitz, "v") == {"v"}

    qd4 = corpus.quantum_disk(2)
    assert predecessors(qd4, "v2") == {"v1", "v2"}

    g = corpus.fixture_single_arrow()
    assert predecessors(g, "u") == {"u"}  # a source is its own lone predecessor


def test_reaches_matches_oracle():
    for name, g in corpus.standard_battery(max_n=2):
        if len(g.vertices) > 6:
            continue
        for u in g.vertices:
            for v in g.vertices:
                assert reaches(g, u, v) == reach_oracle(g, u, v), (name, u, v)


def test_predecessors_agree_with_reaches():
    for name, g in corpus.standard_battery(max_n=3):
        for w in g.vertices:
            assert predecessors(g, w) == {v for v in g.vertices if reaches(g, v, w)}


def test_unknown_vertex_errors():
    g = corpus.fixture_loop()
    with pytest.raises(GraphError):
        reaches(g, "v", "nope")
    with pytest.raises(GraphError):
        predecessors(g, "nope")


# -- subgraphs --------------------------------------------------------------------


def test_full_subgraph_everything_is_identity():
    g = corpus.fixture_k0_demo()
    assert full_subgraph(g, g.vertices) == g


def test_full_subgraph_toeplitz_keeps_loop():
    g = corpus.fixture_jacobson()
    sub = full_subgraph(g, ["v"])
    assert sub.vertices == ("v",)
    assert [a.name for a in sub.arrows] == ["e"]


def test_predecessor_subgraph_excludes_other_sink():
    g = corpus.quantum_sphere_even(2)  # two sinks w1, w2
    sub = full_subgraph(g, predecessors(g, "w1"))
    assert "w2" not in sub.vertices
    assert "w1" in sub.vertices


# -- hereditary saturated closures ---------------------------------------------------


def test_closure_empty():
    g = corpus.fixture_reduction_demo()
    assert hereditary_saturated_closure(g, []) == frozenset()


def test_closure_saturates_upstream():
    g = corpus.fixture_single_arrow()
    assert hereditary_saturated_closure(g, ["v"]) == {"u", "v"}


def test_closure_toeplitz_loop_escapes():
    g = corpus.fixture_jacobson()
    assert hereditary_saturated_closure(g, ["w"]) == {"w"}


def test_closure_matches_oracle_and_predicates():
    rng = random.Random(SEED)
    for name, g in corpus.standard_battery(max_n=3):
        for _ in range(5):
            xs = [v for v in g.vertices if rng.random() < 0.4]
            closed = hereditary_saturated_closure(g, xs)
            assert closed == closure_oracle(g, xs), (name, xs)
            assert is_hereditary(g, closed)
            assert is_saturated(g, closed)
            # idempotent and monotone
            assert hereditary_saturated_closure(g, closed) == closed
            assert closed <= hereditary_saturated_closure(g, list(xs) + [g.vertices[0]])


# -- quotient graphs ---------------------------------------------------------------------


def test_quotient_by_empty_is_identity():
    g = corpus.fixture_k0_demo()
    assert quotient_graph(g, []) == g


def test_quotient_toeplitz_by_sink():
    g = corpus.fixture_jacobson()
    q = quotient_graph(g, ["w"])
    assert q == corpus.fixture_loop().renamed({"v": "v"}, {"e": "e"})


def test_quotient_jacobson_by_sink_is_loop():
    # removing the sink ideal from the loop-with-exit graph leaves the bare loop
    g = corpus.fixture_jacobson()
    q = quotient_graph(g, ["w"])
    assert q.vertices == ("v",)
    assert [(a.name, a.source, a.target) for a in q.arrows] == [("e", "v", "v")]


def test_quotient_rejects_bad_sets():
    g = corpus.fixture_jacobson()
    with pytest.raises(GraphError, match="not hereditary.*v"):
        quotient_graph(g, ["v"])
    g2 = corpus.fixture_single_arrow()
    with pytest.raises(GraphError, match="not saturated.*u"):
        quotient_graph(g2, ["v"])


def test_quotient_has_no_arrows_touching_absorbed():
    g = corpus.quantum_disk(3)
    h = hereditary_saturated_closure(g, ["w"])
    q = quotient_graph(g, h)
    assert all(a.source not in h and a.target not in h for a in q.arrows)


# -- hypothesis: random small graphs ----------------------------------------------------


@st.composite
def small_digraphs(draw):
    n = draw(st.integers(min_value=1, max_value=5))
    vertices = [f"v{i}" for i in range(n)]
    m = draw(st.integers(min_value=0, max_value=8))
    arrows = []
    for k in range(m):
        s = draw(st.integers(min_value=0, max_value=n - 1))
        t = draw(st.integers(min_value=0, max_value=n - 1))
        arrows.append(Arrow(f"e{k}", f"v{s}", f"v{t}"))
    return Digraph(vertices, arrows)


@settings(max_examples=60, deadline=None)
@given(small_digraphs(), st.data())
def test_closure_properties_random(g, data):
    xs = [v for v in g.vertices if data.draw(st.booleans())]
    closed = hereditary_saturated_closure(g, xs)
    assert closed == closure_oracle(g, xs)
    assert is_hereditary(g, closed) and is_saturated(g, closed)
    assert hereditary_saturated_closure(g, closed) == closed
    quotient_graph(g, closed)  # never raises on a genuine closure


@settings(max_examples=60, deadline=None)
@given(small_digraphs())
def test_reaches_transitive_random(g):
    vs = g.vertices
    for u in vs:
        assert reaches(g, u, u)
    for u in vs:
        for v in vs:
            for w in vs:
                if reaches(g, u, v) and reaches(g, v, w):
                    assert reaches(g, u, w)
