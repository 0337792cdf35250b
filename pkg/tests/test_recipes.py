"""Recipe validation, realization, and the seeded generator."""

import itertools

import networkx as nx
import pytest

from evcyc import (
    Apex,
    CliqueJoinK2,
    CompleteBipartite,
    CompleteBipartiteMinusC4,
    CompleteMultipartite,
    ExplicitBase,
    Join,
    K5PlusM,
    OddClique,
    OddExpansion,
    PreconditionError,
    Subdivide,
    Substitute,
    TwinSubstitute,
    is_coclaw,
    is_eulerian,
    random_recipe,
    realize,
    recipe_from_json,
    recipe_to_json,
    validate_recipe,
)
from conftest import complete_graph

COCLAW = ExplicitBase(
    tuple("abcd"), (("ab", "a", "b"), ("bc", "b", "c"), ("ca", "c", "a")), None
)
C4 = ExplicitBase(
    tuple("abcd"),
    (("ab", "a", "b"), ("bc", "b", "c"), ("cd", "c", "d"), ("da", "d", "a")),
    None,
)


def _nx(graph):
    g = nx.MultiGraph()
    g.add_nodes_from(graph.vertices)
    for e in graph.edges:
        g.add_edge(e.u, e.v)
    return g


def test_is_coclaw():
    assert is_coclaw(realize(COCLAW).graph)
    assert not is_coclaw(complete_graph(3))
    assert not is_coclaw(realize(C4).graph)
    four_isolated = realize(ExplicitBase(tuple("abcd"), (), None)).graph
    assert not is_coclaw(four_isolated)


def test_realize_shapes():
    real = realize(CompleteBipartite(2, 4))
    assert len(real.graph.vertices) == 6 and len(real.graph.edges) == 8
    real = realize(CompleteBipartiteMinusC4(4, 4))
    assert len(real.graph.edges) == 12
    real = realize(K5PlusM(2))
    assert len(real.graph.edges) == 12 and not real.graph.is_simple()
    real = realize(CompleteMultipartite((3, 1, 1, 1, 1)))
    assert len(real.graph.edges) == 18
    real = realize(OddClique(7))
    assert len(real.graph.edges) == 21
    # join of two single vertices per side is K_{2,2}
    real = realize(Join((OddClique(1), OddClique(1)), (OddClique(1), OddClique(1))))
    assert len(real.graph.edges) == 4


def test_expansion_counts():
    # replacing a degree-2 vertex by three clones: 2 + 3*2 = 8 edges
    real = realize(OddExpansion(CompleteBipartite(2, 2), "a0", 3))
    assert len(real.graph.vertices) == 6 and len(real.graph.edges) == 8


def test_apex_of_triangle_with_isolated_is_k5_subdivision_shape():
    tri_plus = ExplicitBase(
        tuple("abcd"), (("ab", "a", "b"), ("bc", "b", "c"), ("ca", "c", "a")), None
    )
    real = realize(Apex(tri_plus, 4))
    assert len(real.graph.vertices) == 8
    assert len(real.graph.edges) == 3 + 16


def test_substitution_by_k1_is_vertex_renaming():
    base = CompleteBipartite(2, 4)
    real0 = realize(base)
    real1 = realize(Substitute(base, "a0", OddClique(1)))
    assert nx.is_isomorphic(_nx(real0.graph), _nx(real1.graph))


def test_join_symmetry():
    left = (OddClique(3), OddClique(1))
    right = (C4,)
    a = realize(Join(left, right)).graph
    b = realize(Join(right, left)).graph
    assert nx.is_isomorphic(_nx(a), _nx(b))


def test_realizations_are_eulerian():
    for seed in range(40):
        recipe = random_recipe(seed, 14)
        real = realize(recipe)
        assert is_eulerian(real.graph), recipe_to_json(recipe)


def test_random_recipe_contract():
    r1 = random_recipe(5, 8)
    r2 = random_recipe(5, 8)
    assert r1 == r2
    assert validate_recipe(r1).ok
    assert len(realize(r1).graph.edges) <= 8
    with pytest.raises(PreconditionError):
        random_recipe(0, 2)


def test_recipe_json_round_trip():
    recipes = [
        CompleteBipartite(2, 4),
        CompleteBipartiteMinusC4(4, 4),
        K5PlusM(2),
        CompleteMultipartite((3, 1, 1)),
        OddClique(7),
        COCLAW,
        OddExpansion(CompleteBipartite(2, 2), "a0", 3),
        Apex(CompleteBipartite(2, 2), 2),
        CliqueJoinK2(CompleteMultipartite((3, 1, 1))),
        Substitute(CompleteBipartite(2, 4), "a0", OddClique(3)),
        TwinSubstitute(CompleteBipartite(2, 2), ("a0", "a1"), C4),
        Join((OddClique(3), OddClique(1)), (C4,)),
        Subdivide.of(CompleteBipartite(2, 2), {"a0:b0": 2, "a0:b1": 1, "a1:b0": 1, "a1:b1": 2}),
    ]
    for r in recipes:
        data = recipe_to_json(r)
        back = recipe_from_json(data)
        assert back == r
        assert recipe_to_json(back) == data
    for seed in range(25):
        r = random_recipe(seed, 12)
        assert recipe_from_json(recipe_to_json(r)) == r


# ---------------------------------------------------------------------------
# precondition checks
# ---------------------------------------------------------------------------

REJECTIONS = [
    (OddClique(5), "five-clique-excluded"),
    (CompleteMultipartite((1, 1, 1, 1, 1)), "five-clique-excluded"),
    (Apex(COCLAW, 2), "apex-coclaw"),
    (Substitute(OddClique(3), "v0", OddClique(3)), "substitute-triangle-degree"),
    (CliqueJoinK2(OddClique(3)), "clique-join-triangle"),
    (TwinSubstitute(CompleteBipartite(2, 2), ("a0", "a1"), COCLAW), "twin-coclaw-degree"),
    (Join((OddClique(3), OddClique(1)), (OddClique(1), OddClique(1))), "join-coclaw-pair"),
    (CompleteBipartite(3, 4), "bipartite-even-sides"),
    (K5PlusM(3), "doubled-k5-even-parallels"),
    (CompleteMultipartite((2, 3)), "multipartite-eulerian"),
]


@pytest.mark.parametrize("recipe,clause", REJECTIONS)
def test_rejections(recipe, clause):
    report = validate_recipe(recipe)
    assert not report.ok
    assert report.failures[0].clause == clause
    with pytest.raises(PreconditionError):
        realize(recipe)


def test_acceptable_boundary_recipes():
    # the same shapes become legal once the hypotheses hold
    assert validate_recipe(Apex(COCLAW, 4)).ok
    assert validate_recipe(Substitute(CompleteBipartite(2, 4), "a0", OddClique(3))).ok
    assert validate_recipe(TwinSubstitute(CompleteBipartite(4, 4), ("a0", "a1"), COCLAW)).ok
    assert validate_recipe(CompleteMultipartite((3, 1, 1, 1, 1))).ok
    assert validate_recipe(OddClique(7)).ok
    assert validate_recipe(Join((OddClique(3), OddClique(1)), (C4,))).ok


def test_explicit_base_requires_strong_decomposability():
    bowtie = ExplicitBase(
        tuple("abcde"),
        (
            ("ab", "a", "b"),
            ("bc", "b", "c"),
            ("ca", "c", "a"),
            ("cd", "c", "d"),
            ("de", "d", "e"),
            ("ec", "e", "c"),
        ),
        None,
    )
    report = validate_recipe(bowtie)
    assert not report.ok
    assert report.failures[0].clause == "explicit-base-strong"
    k4 = ExplicitBase(
        tuple("abcd"),
        tuple((f"{u}{v}", u, v) for u, v in itertools.combinations("abcd", 2)),
        None,
    )
    assert validate_recipe(k4).failures[0].clause == "explicit-base-eulerian"
    weird = ExplicitBase(("a", "b~c"), (), None)
    assert validate_recipe(weird).failures[0].clause == "explicit-base-ids"


def test_explicit_base_trusts_positive_proof_token():
    from evcyc import oracle_is_strongly_ecd

    g = realize(C4).graph
    token = oracle_is_strongly_ecd(g).to_json()
    trusted = ExplicitBase(C4.vertices, C4.edges, token)
    assert validate_recipe(trusted).ok


def test_subdivision_profile_must_cover_child():
    with pytest.raises(PreconditionError):
        realize(Subdivide.of(CompleteBipartite(2, 2), {"a0:b0": 2}))
