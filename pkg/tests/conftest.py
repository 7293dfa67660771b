import os
import random
import string

import pytest

from leavitt.digraph import Digraph

SEED = int(os.environ.get("LEAVITT_TEST_SEED", "20240811"))


@pytest.fixture
def rng():
    return random.Random(SEED)


def random_renaming(g: Digraph, rng: random.Random) -> Digraph:
    """Apply a random bijective relabeling of vertices and arrows."""
    def fresh(count, taken):
        names = set()
        while len(names) < count:
            name = "".join(rng.choice(string.ascii_lowercase) for _ in range(6))
            if name not in taken:
                names.add(name)
        return sorted(names)

    new_vs = fresh(len(g.vertices), set())
    rng.shuffle(new_vs)
    vmap = dict(zip(g.vertices, new_vs))
    new_as = fresh(len(g.arrows), set(new_vs))
    rng.shuffle(new_as)
    amap = dict(zip((a.name for a in g.arrows), new_as))
    return g.renamed(vmap, amap)
