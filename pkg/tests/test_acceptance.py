"""Acceptance criteria, one test per criterion.

Every test prints a single pass/fail line (run with -s to see them all) and
enforces the stated runtime budget.  All checks are exact.
"""

import json
import random
import time

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
    Substitute,
    TwinSubstitute,
    decompose_block,
    decompose_k2n,
    decompose_k5_plus,
    decompose_bipartite,
    enumerate_signature_classes,
    is_equivalent,
    oracle_decompose,
    random_recipe,
    realize,
    subdivide,
    validate_certificate,
    validate_recipe,
)
from evcyc.cli import main
from conftest import complete_bipartite_graph, complete_graph, sample_even_signature


def _report(number, label, started, budget):
    elapsed = time.time() - started
    assert elapsed < budget, f"criterion {number} took {elapsed:.1f}s, budget {budget}s"
    print(f"[criterion {number}] PASS {label} ({elapsed:.2f}s < {budget}s)")


def test_criterion_1_k5_negative(tmp_path):
    started = time.time()
    k5 = complete_graph(5, odd_all=True)
    assert oracle_decompose(k5) is None
    recipe = tmp_path / "k5.json"
    recipe.write_text(json.dumps({"node": "CompleteMultipartite", "parts": [1, 1, 1, 1, 1]}))
    assert main(["decompose", "--recipe", str(recipe)]) == 2
    _report(1, "the all-odd 5-clique does not decompose and its recipe exits 2", started, 1)


def test_criterion_2_k5_classification():
    started = time.time()
    k5 = complete_graph(5)
    classes = list(enumerate_signature_classes(k5))
    even = [c for c in classes if len(c.representative) % 2 == 0]
    assert len(classes) == 64 and len(even) == 32
    bad = [
        c for c in even if oracle_decompose(k5.with_signature(c.representative)) is None
    ]
    assert len(bad) == 1
    all_odd = frozenset(k5.edge_ids())
    assert is_equivalent(k5.with_signature(bad[0].representative), all_odd)
    _report(2, "64 classes, 32 even, one bad class equivalent to all-odd", started, 5)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_criterion_3_k2n_sweeps(n):
    started = time.time()
    real = realize(CompleteBipartite(2, n))
    g = real.graph
    count = 0
    for cls in enumerate_signature_classes(g):
        odd = cls.representative
        if len(odd) % 2:
            continue
        count += 1
        cert = decompose_k2n(n, odd)
        assert validate_certificate(g.with_signature(odd), cert).ok
        assert oracle_decompose(g.with_signature(odd)) is not None
    _report(3, f"K_{{2,{n}}}: all {count} even classes decompose and agree", started, 10)


# Transcribed decompositions for the three drawn signatures of K_{4,4} minus
# a 4-cycle, on the canonical realization (deleted 4-cycle a0,a1 x b0,b1).
_FIGURE_CASES = [
    (
        ["a0:b2", "a2:b0"],
        [
            ["a0:b2", "a3:b2", "a3:b0", "a2:b0", "a2:b3", "a0:b3"],
            ["a1:b2", "a2:b2", "a2:b1", "a3:b1", "a3:b3", "a1:b3"],
        ],
    ),
    (
        ["a0:b2", "a2:b0", "a2:b2", "a3:b3"],
        [
            ["a0:b2", "a3:b2", "a3:b0", "a2:b0", "a2:b3", "a0:b3"],
            ["a1:b2", "a2:b2", "a2:b1", "a3:b1", "a3:b3", "a1:b3"],
        ],
    ),
    (
        ["a0:b2", "a2:b0", "a2:b2", "a3:b2"],
        [
            ["a0:b2", "a2:b2", "a2:b1", "a3:b1", "a3:b3", "a0:b3"],
            ["a1:b2", "a3:b2", "a3:b0", "a2:b0", "a2:b3", "a1:b3"],
        ],
    ),
]


def test_criterion_4_k44_minus_c4():
    started = time.time()
    node = CompleteBipartiteMinusC4(4, 4)
    real = realize(node)
    g = real.graph
    count = 0
    for cls in enumerate_signature_classes(g):
        odd = cls.representative
        if len(odd) % 2:
            continue
        count += 1
        cert = decompose_bipartite(node, odd)
        assert validate_certificate(g.with_signature(odd), cert).ok
        assert oracle_decompose(g.with_signature(odd)) is not None
    assert count == 16
    for sig, expected in _FIGURE_CASES:
        cert = decompose_bipartite(node, sig)
        assert cert.to_json() == {
            "cycles": expected,
            "odd_cycle_index": None,
        }
    _report(4, "16 even classes decompose; figure signatures match byte-for-byte", started, 10)


def test_criterion_5_doubled_k5():
    started = time.time()
    real = realize(K5PlusM(2))
    g = real.graph
    count = 0
    for cls in enumerate_signature_classes(g):
        odd = cls.representative
        if len(odd) % 2:
            continue
        count += 1
        cert = decompose_k5_plus(2, odd)
        assert validate_certificate(g.with_signature(odd), cert).ok
        assert oracle_decompose(g.with_signature(odd)) is not None
    assert count == 128
    _report(5, "doubled K5: all 128 even classes decompose and agree", started, 60)


def test_criterion_6_composition_fuzzing():
    started = time.time()
    cases = 0
    for seed in range(500):
        recipe = random_recipe(seed, 16)
        real = realize(recipe, validate=False)
        g = real.graph
        ids = sorted(g.edge_ids())
        assert len(ids) <= 16
        rng = random.Random(seed * 65_537 + 1)
        for _ in range(4):
            odd = sample_even_signature(rng, ids)
            cert = decompose_block(real.block, odd)
            assert validate_certificate(g.with_signature(odd), cert).ok
            assert oracle_decompose(g.with_signature(odd)) is not None
            cases += 1
    assert cases == 2000
    _report(6, "500 recipes x 4 signatures: all valid, all oracle-confirmed", started, 300)


def test_criterion_7_multipartite_desk_scale():
    started = time.time()
    targets = [
        (CompleteMultipartite((2, 2, 2)), "K222"),
        (CompleteMultipartite((2, 4)), "K24"),
        (CompleteMultipartite((4, 4, 2)), "K442"),
        (OddClique(7), "K7"),
        (CompleteMultipartite((3, 1, 1, 1, 1)), "K31111"),
    ]
    for recipe, label in targets:
        real = realize(recipe)
        g = real.graph
        ids = sorted(g.edge_ids())
        rng = random.Random(101)
        spot_checks = 20 if label == "K7" else None
        for i in range(100):
            odd = sample_even_signature(rng, ids)
            cert = decompose_block(real.block, odd)
            assert validate_certificate(g.with_signature(odd), cert).ok, label
            if len(ids) <= 16:
                assert oracle_decompose(g.with_signature(odd)) is not None, label
            elif spot_checks and i < spot_checks:
                assert oracle_decompose(g.with_signature(odd), max_edges=21) is not None, label
    _report(7, "Eulerian multipartite targets: 100 signatures each", started, 600)


def test_criterion_8_subdivision_correspondence():
    started = time.time()
    hosts = [complete_bipartite_graph(2, 2), complete_graph(5)]
    for g in hosts:
        ids = sorted(g.edge_ids())
        for bits in range(1 << len(ids)):
            profile = {e: (2 if bits >> i & 1 else 1) for i, e in enumerate(ids)}
            host, induced = subdivide(g, profile)
            by_length = oracle_decompose(host.with_signature(host.edge_ids()))
            by_sign = oracle_decompose(g.with_signature(induced))
            assert (by_length is None) == (by_sign is None)
    _report(8, "all {1,2} profiles on K22 and K5 agree across the correspondence", started, 60)


_COCLAW = ExplicitBase(
    tuple("abcd"), (("ab", "a", "b"), ("bc", "b", "c"), ("ca", "c", "a")), None
)

_REJECTIONS = [
    (OddClique(5), "five-clique-excluded"),
    (CompleteMultipartite((1, 1, 1, 1, 1)), "five-clique-excluded"),
    (Apex(_COCLAW, 2), "apex-coclaw"),
    (Substitute(OddClique(3), "v0", OddClique(3)), "substitute-triangle-degree"),
    (CliqueJoinK2(OddClique(3)), "clique-join-triangle"),
    (
        TwinSubstitute(CompleteBipartite(2, 2), ("a0", "a1"), _COCLAW),
        "twin-coclaw-degree",
    ),
    (
        Join((OddClique(3), OddClique(1)), (OddClique(1), OddClique(1))),
        "join-coclaw-pair",
    ),
    (CompleteBipartite(3, 4), "bipartite-even-sides"),
    (K5PlusM(3), "doubled-k5-even-parallels"),
    (CompleteMultipartite((2, 3)), "multipartite-eulerian"),
]


def test_criterion_9_boundary_rejections():
    started = time.time()
    assert len(_REJECTIONS) == 10
    for recipe, clause in _REJECTIONS:
        report = validate_recipe(recipe)
        assert not report.ok, recipe
        assert report.failures[0].clause == clause, (recipe, report.failures[0])
    _report(9, "all ten boundary recipes rejected with the right clause", started, 1)
