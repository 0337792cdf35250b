import itertools
import random

import pytest

from evcyc import Edge, SignedMultigraph


def complete_graph(n: int, odd_all: bool = False) -> SignedMultigraph:
    vs = [f"v{i}" for i in range(n)]
    sign = "odd" if odd_all else "even"
    edges = [
        Edge(f"{u}:{v}", u, v, sign) for u, v in itertools.combinations(vs, 2)
    ]
    return SignedMultigraph(vs, edges)


def complete_bipartite_graph(n: int, m: int) -> SignedMultigraph:
    aa = [f"a{i}" for i in range(n)]
    bb = [f"b{j}" for j in range(m)]
    edges = [Edge(f"{a}:{b}", a, b) for a in aa for b in bb]
    return SignedMultigraph(aa + bb, edges)


def sample_even_signature(rng: random.Random, ids: list[str]) -> frozenset[str]:
    if not ids:
        return frozenset()
    k = rng.randrange(0, len(ids) + 1, 2)
    chosen: set[str] = set()
    while len(chosen) < k:
        chosen.add(ids[rng.randrange(len(ids))])
    if len(chosen) % 2:
        chosen.discard(sorted(chosen)[0])
    return frozenset(chosen)


@pytest.fixture
def k5_all_odd():
    return complete_graph(5, odd_all=True)
