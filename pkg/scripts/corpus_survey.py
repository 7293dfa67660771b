"""Survey the corpus: invariants of every battery graph in one table.

Usage: python scripts/corpus_survey.py [--max-n N] [--json]
"""
import argparse
import json
import math
import sys

from leavitt import corpus
from leavitt.digraph import cycles_pairwise_disjoint, enumerate_cycles
from leavitt.growth import empirical_growth_degree, gk_dimension, growth_polynomial
from leavitt.morita import k0_invariants, shortcuts, weighted_hasse
from leavitt.reduction import complete_reduction


def survey(max_n: int) -> list[dict]:
    rows = []
    for name, g in corpus.standard_battery(max_n=max_n):
        gk = gk_dimension(g)
        row = {
            "name": name,
            "vertices": len(g.vertices),
            "arrows": len(g.arrows),
            "sinks": len(g.sinks()),
            "cycles": len(enumerate_cycles(g)),
            "disjoint": cycles_pairwise_disjoint(g),
            "gk": "infinite" if math.isinf(gk) else gk,
            "k0": k0_invariants(g).describe(),
        }
        if not math.isinf(gk):
            row["growth_polynomial"] = growth_polynomial(g)
            reduced, trace = complete_reduction(g)
            row["reduction_steps"] = len(trace.steps)
            row["hasse_edges"] = len(weighted_hasse(g).edges)
            row["shortcuts"] = [a.name for a in shortcuts(g)]
            if gk <= 5:
                _, degree = empirical_growth_degree(g, 60)
                row["empirical_degree"] = degree
        rows.append(row)
    return rows


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=3)
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args()
    rows = survey(args.max_n)
    if args.json:
        json.dump(rows, sys.stdout, indent=2)
        print()
        return 0
    header = f"{'graph':<18} {'V':>2} {'E':>2} {'gk':>8} {'G(z) coeffs':<18} {'empir.':>6} {'K0':<12} shortcuts"
    print(header)
    print("-" * len(header))
    for row in rows:
        poly = ",".join(map(str, row.get("growth_polynomial", []))) or "-"
        emp = row.get("empirical_degree", "-")
        cuts = ",".join(row.get("shortcuts", [])) or "-"
        print(
            f"{row['name']:<18} {row['vertices']:>2} {row['arrows']:>2} "
            f"{str(row['gk']):>8} {poly:<18} {str(emp):>6} {row['k0']:<12} {cuts}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
