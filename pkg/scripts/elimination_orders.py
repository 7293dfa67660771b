"""How many distinct complete reductions can elimination order produce?

Runs many random elimination orders on a graph and buckets the outcomes by
isomorphism.  Disjoint-cycle graphs always land in a single bucket; the
twin-cycle fixture lands in two.

Usage: python scripts/elimination_orders.py [GRAPH_FILE] [--trials N] [--seed S]
"""
import argparse
import sys

from leavitt import corpus
from leavitt.morita import digraph_isomorphic
from leavitt.reduction import complete_reduction
from leavitt.textio import parse_document


def outcome_classes(g, trials: int, seed: int):
    classes = []  # (representative graph, count, one eliminated order)
    for k in range(trials):
        reduced, trace = complete_reduction(g, seed=seed + k)
        for entry in classes:
            if digraph_isomorphic(entry[0], reduced) is not None:
                entry[1] += 1
                break
        else:
            classes.append([reduced, 1, trace.eliminated])
    return classes


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("graph", nargs="?", help="graph file; default: the twin-cycle fixture")
    parser.add_argument("--trials", type=int, default=50)
    parser.add_argument("--seed", type=int, default=20240811)
    args = parser.parse_args()
    if args.graph:
        with open(args.graph, encoding="utf-8") as fh:
            g = parse_document(fh.read()).graph
        label = args.graph
    else:
        g = corpus.fixture_twin_cycles()
        label = "twin_cycles"
    classes = outcome_classes(g, args.trials, args.seed)
    print(f"{label}: {len(classes)} isomorphism class(es) over {args.trials} random orders")
    for rep, count, order in classes:
        loops = sum(1 for a in rep.arrows if a.is_loop)
        print(
            f"  {count:>4} runs -> {len(rep.vertices)} vertices, "
            f"{len(rep.arrows)} arrows ({loops} loops); "
            f"e.g. eliminating {' then '.join(order) or 'nothing'}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
