"""Invariants of Leavitt path algebras of finite digraphs.

Graph reduction, the canonical basis and its rewriting engine, growth and
Gelfand-Kirillov dimension, simple-module classification with extension
dimensions, weighted Hasse diagrams, K0 invariant factors, and the Morita
equivalence decision pipeline.
"""

from .config import DEFAULT_LIMITS, Limits
from .digraph import (
    Arrow,
    Cycle,
    Digraph,
    GraphError,
    IntersectingCyclesError,
    LimitExceeded,
    Path,
    cycle_predecessors,
    cycles_pairwise_disjoint,
    enumerate_cycles,
    full_subgraph,
    hereditary_saturated_closure,
    predecessors,
    quotient_graph,
    reaches,
)
from .growth import (
    empirical_growth_degree,
    filtration,
    gk_dimension,
    growth_polynomial,
    growth_report,
    height,
)
from .lpalgebra import (
    AlgebraElement,
    LeavittAlgebra,
    NormalTerm,
    algebra_over,
    enumerate_basis,
    exit_identity_check,
    grade,
    involution,
    multiply,
    normal_form,
)
from .modules_ext import (
    CycleSimple,
    SinkSimple,
    cycle_simple,
    enumerate_simples,
    ext_dimension,
    ext_report,
    path_set,
    simple_support,
    sink_simple,
)
from .morita import (
    K0Group,
    MoritaVerdict,
    WeightedHasseDiagram,
    digraph_isomorphic,
    k0_invariants,
    morita_decide,
    shortcuts,
    weighted_hasse,
)
from .reduction import complete_reduction, is_completely_reduced, reduce_at
from .reportjson import report
from .textio import parse_graph, serialize_graph

__version__ = "0.1.0"
