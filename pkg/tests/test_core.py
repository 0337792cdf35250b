"""Signature algebra, certificates, and the subdivision correspondence."""

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evcyc import (
    EVEN,
    ODD,
    CycleDecomposition,
    Edge,
    GraphError,
    NotACycleError,
    PreconditionError,
    SignedMultigraph,
    cut,
    cycle_parity,
    cycle_space_dimension,
    enumerate_cycles,
    graph_from_json,
    graph_to_json,
    is_equivalent,
    is_eulerian,
    lift_certificate,
    normalize_signature,
    oracle_decompose,
    resign,
    subdivide,
    validate_certificate,
    vertex_parity,
    walk_cycle,
)
from conftest import complete_bipartite_graph, complete_graph


def test_construction_rejects_loops_and_duplicates():
    with pytest.raises(GraphError):
        SignedMultigraph(["a"], [Edge("e", "a", "a")])
    with pytest.raises(GraphError):
        SignedMultigraph(["a", "b"], [Edge("e", "a", "b"), Edge("e", "b", "a")])
    with pytest.raises(GraphError):
        SignedMultigraph(["a"], [Edge("e", "a", "b")])


def test_parallel_edges_carry_independent_signs():
    g = SignedMultigraph(["a", "b"], [Edge("e1", "a", "b", ODD), Edge("e2", "a", "b")])
    assert g.edge("e1").sign == ODD and g.edge("e2").sign == EVEN
    assert not g.is_simple()


def test_vertex_parity_examples(k5_all_odd):
    # four odd edges meet every K5 vertex, so the count is even
    assert all(vertex_parity(k5_all_odd, v) == EVEN for v in k5_all_odd.vertices)
    g = complete_graph(4)
    assert all(vertex_parity(g, v) == EVEN for v in g.vertices)
    k22 = complete_bipartite_graph(2, 2).with_signature({"a0:b0"})
    assert vertex_parity(k22, "a0") == ODD
    assert vertex_parity(k22, "b0") == ODD
    assert vertex_parity(k22, "a1") == EVEN


def test_is_eulerian_examples(k5_all_odd):
    assert is_eulerian(k5_all_odd)
    assert not is_eulerian(complete_graph(4))
    assert not is_eulerian(complete_bipartite_graph(2, 3))
    iso = SignedMultigraph(["a", "b", "c"], [])
    assert is_eulerian(iso)


def test_resign_basics(k5_all_odd):
    assert resign(k5_all_odd, []) == k5_all_odd
    flipped = resign(k5_all_odd, ["v0"])
    assert len(flipped.odd_edges()) == 6
    assert resign(flipped, ["v0"]) == k5_all_odd
    assert cut(k5_all_odd, ["v0"]).edges == frozenset(
        f"v0:v{i}" for i in range(1, 5)
    )


def test_resign_unknown_vertex(k5_all_odd):
    with pytest.raises(GraphError):
        resign(k5_all_odd, ["nope"])


def test_normalize_tree_is_all_even():
    tree = SignedMultigraph(
        ["a", "b", "c"], [Edge("ab", "a", "b", ODD), Edge("bc", "b", "c", ODD)]
    )
    out, cls = normalize_signature(tree)
    assert out.odd_edges() == frozenset()
    assert cls.representative == frozenset()


def test_normalize_k5_all_odd_star_tree(k5_all_odd):
    # BFS from v0 gives the star at v0; the representative is the other six
    out, cls = normalize_signature(k5_all_odd)
    assert cls.representative == frozenset(
        f"v{i}:v{j}" for i, j in itertools.combinations(range(1, 5), 2)
    )
    again, cls2 = normalize_signature(out)
    assert again == out and cls2 == cls
    assert is_equivalent(k5_all_odd, cls.representative)


def test_is_equivalent_examples(k5_all_odd):
    assert is_equivalent(k5_all_odd, k5_all_odd.odd_edges())
    assert is_equivalent(k5_all_odd, resign(k5_all_odd, ["v1"]).odd_edges())
    assert not is_equivalent(k5_all_odd, frozenset())
    with pytest.raises(GraphError):
        is_equivalent(k5_all_odd, {"v0:v1": ODD})  # domain mismatch


def test_cycle_parity_examples(k5_all_odd):
    square = complete_bipartite_graph(2, 2)
    assert cycle_parity(square, ["a0:b0", "a1:b0", "a1:b1", "a0:b1"]) == EVEN
    assert cycle_parity(k5_all_odd, ["v0:v1", "v1:v2", "v2:v3", "v3:v4", "v0:v4"]) == ODD
    two = SignedMultigraph(
        ["a", "b"], [Edge("e1", "a", "b", ODD), Edge("e2", "a", "b", ODD)]
    )
    assert cycle_parity(two, ["e1", "e2"]) == EVEN
    with pytest.raises(NotACycleError):
        cycle_parity(square, ["a0:b0", "a1:b1"])


def test_walk_cycle_rejects_bad_input():
    g = complete_graph(4)
    with pytest.raises(NotACycleError):
        walk_cycle(g, ["v0:v1"])
    with pytest.raises(NotACycleError):
        walk_cycle(g, ["v0:v1", "v0:v1"])
    with pytest.raises(NotACycleError):
        walk_cycle(g, ["v0:v1", "v2:v3"])
    assert walk_cycle(g, ["v0:v1", "v1:v2", "v0:v2"]) == ["v0", "v1", "v2"]


def test_validate_certificate_examples(k5_all_odd):
    square = complete_bipartite_graph(2, 2)
    good = CycleDecomposition((("a0:b0", "a1:b0", "a1:b1", "a0:b1"),))
    assert validate_certificate(square, good).ok
    two_fives = CycleDecomposition(
        (
            ("v0:v1", "v1:v2", "v2:v3", "v3:v4", "v0:v4"),
            ("v0:v2", "v2:v4", "v1:v4", "v1:v3", "v0:v3"),
        )
    )
    check = validate_certificate(k5_all_odd, two_fives)
    assert not check.ok and "parity" in check.reason
    missing = CycleDecomposition((("a0:b0", "a1:b0", "a1:b1", "a0:b1"),))
    short = complete_bipartite_graph(2, 2)
    dropped = CycleDecomposition(())
    assert "not a partition" in validate_certificate(short, dropped).reason
    flagged = CycleDecomposition(
        (("a0:b0", "a1:b0", "a1:b1", "a0:b1"),), odd_cycle_index=0
    )
    assert not validate_certificate(square, flagged).ok
    one_odd = square.with_signature({"a0:b0"})
    assert validate_certificate(one_odd, flagged).ok
    assert missing  # keep the variable honest


def test_subdivide_and_lift():
    square = complete_bipartite_graph(2, 2)
    ids = sorted(square.edge_ids())
    host, induced = subdivide(square, dict.fromkeys(ids, 1))
    assert sorted(host.edge_ids()) == ids
    assert induced == frozenset(ids)
    host2, induced2 = subdivide(square, dict.fromkeys(ids, 2))
    assert len(host2.edges) == 8 and induced2 == frozenset()
    tri = complete_graph(3)
    _, ind = subdivide(tri, {"v0:v1": 1, "v1:v2": 1, "v0:v2": 2})
    assert ind == frozenset({"v0:v1", "v1:v2"})
    with pytest.raises(GraphError):
        subdivide(tri, {"v0:v1": 0, "v1:v2": 1, "v0:v2": 1})

    cert = CycleDecomposition((("a0:b0", "a1:b0", "a1:b1", "a0:b1"),))
    lifted = lift_certificate(square, dict.fromkeys(ids, 2), cert)
    assert len(lifted.cycles) == 1 and len(lifted.cycles[0]) == 8
    assert validate_certificate(host2, lifted).ok
    same = lift_certificate(square, dict.fromkeys(ids, 1), cert)
    assert same.cycles == cert.cycles
    bad_profile = dict.fromkeys(ids, 2)
    bad_profile["a0:b0"] = 1
    with pytest.raises(PreconditionError):
        lift_certificate(square, bad_profile, cert)


def test_graph_json_round_trip(k5_all_odd):
    data = graph_to_json(k5_all_odd)
    assert graph_from_json(data) == k5_all_odd
    with pytest.raises(GraphError):
        graph_from_json({"vertices": []})


# ---------------------------------------------------------------------------
# structural invariants
# ---------------------------------------------------------------------------


def _random_graph(rng: random.Random, max_edges: int = 10) -> SignedMultigraph:
    n = rng.randrange(2, 7)
    vs = [f"v{i}" for i in range(n)]
    m = rng.randrange(1, max_edges + 1)
    edges = []
    for k in range(m):
        u, v = rng.sample(range(n), 2)
        sign = ODD if rng.randrange(2) else EVEN
        edges.append(Edge(f"e{k}", vs[u], vs[v], sign))
    return SignedMultigraph(vs, edges)


def test_resigning_preserves_even_cycles():
    rng = random.Random(42)
    for _ in range(40):
        g = _random_graph(rng)
        members = [v for v in g.vertices if rng.randrange(2)]
        h = resign(g, members)
        before = {frozenset(c) for c in enumerate_cycles(g).even_cycles()}
        after = {frozenset(c) for c in enumerate_cycles(h).even_cycles()}
        assert before == after


def test_equivalence_matches_normal_forms():
    rng = random.Random(43)
    for _ in range(40):
        g = _random_graph(rng, max_edges=8)
        ids = list(g.edge_ids())
        sigma2 = frozenset(e for e in ids if rng.randrange(2))
        h = g.with_signature(sigma2)
        same_rep = (
            normalize_signature(g)[1].representative
            == normalize_signature(h)[1].representative
        )
        assert is_equivalent(g, sigma2) == same_rep


def test_parity_obstruction():
    # a valid all-even certificate forces an even signature size
    rng = random.Random(44)
    found = 0
    for _ in range(120):
        g = _random_graph(rng)
        cert = oracle_decompose(g)
        if cert is None or not cert.cycles:
            continue
        found += 1
        assert len(g.odd_edges()) % 2 == 0
    assert found > 10


@pytest.mark.parametrize("graph", [complete_graph(5), complete_bipartite_graph(2, 4)])
def test_eulerian_parity_invariance(graph):
    # flipping any cut of an Eulerian graph preserves |signature| mod 2
    rng = random.Random(45)
    ids = list(graph.edge_ids())
    g = graph.with_signature(frozenset(e for e in ids if rng.randrange(2)))
    base = len(g.odd_edges()) % 2
    for r in range(len(g.vertices) + 1):
        for members in itertools.combinations(g.vertices, r):
            assert len(resign(g, members).odd_edges()) % 2 == base


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**4 - 1), st.integers(0, 2**4 - 1))
def test_subdivision_correspondence_k22(profile_bits, sign_bits):
    square = complete_bipartite_graph(2, 2)
    ids = sorted(square.edge_ids())
    profile = {e: (2 if profile_bits >> i & 1 else 1) for i, e in enumerate(ids)}
    host, induced = subdivide(square, profile)
    host_decomposable = oracle_decompose(host.with_signature(host.edge_ids())) is not None
    base_decomposable = oracle_decompose(square.with_signature(induced)) is not None
    assert host_decomposable == base_decomposable


def test_lift_validates_whenever_input_does():
    rng = random.Random(46)
    square = complete_bipartite_graph(2, 4)
    ids = sorted(square.edge_ids())
    for _ in range(20):
        profile = {e: rng.randrange(1, 4) for e in ids}
        _, induced = subdivide(square, profile)
        cert = oracle_decompose(square.with_signature(induced))
        if cert is None:
            continue
        host, _ = subdivide(square, profile)
        lifted = lift_certificate(square, profile, cert)
        assert validate_certificate(host, lifted).ok
        assert all(len(c) % 2 == 0 for c in lifted.cycles)


def test_cycle_space_dimension():
    assert cycle_space_dimension(complete_graph(5)) == 6
    assert cycle_space_dimension(complete_bipartite_graph(2, 2)) == 1
    tree = SignedMultigraph(["a", "b"], [Edge("e", "a", "b")])
    assert cycle_space_dimension(tree) == 0
