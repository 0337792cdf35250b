"""The constructive decomposer against the oracle, class by class."""

import itertools
import random

import pytest

from evcyc import (
    Apex,
    CliqueJoinK2,
    CompleteBipartite,
    CompleteBipartiteMinusC4,
    CompleteMultipartite,
    ExplicitBase,
    InternalError,
    Join,
    K5PlusM,
    OddClique,
    OddExpansion,
    PreconditionError,
    Subdivide,
    Substitute,
    TwinSubstitute,
    almost_decompose,
    cycle_parity,
    decompose,
    decompose_block,
    decompose_k2n,
    decompose_k5_plus,
    enumerate_signature_classes,
    find_parity_four_cycle,
    k5_is_bad,
    oracle_decompose,
    realize,
    validate_certificate,
)
from conftest import complete_bipartite_graph, sample_even_signature

COCLAW = ExplicitBase(
    tuple("abcd"), (("ab", "a", "b"), ("bc", "b", "c"), ("ca", "c", "a")), None
)
C4 = ExplicitBase(
    tuple("abcd"),
    (("ab", "a", "b"), ("bc", "b", "c"), ("cd", "c", "d"), ("da", "d", "a")),
    None,
)
C6 = ExplicitBase(
    tuple("abcdef"),
    tuple((f"e{i}", "abcdef"[i], "abcdef"[(i + 1) % 6]) for i in range(6)),
    None,
)
TRI_PLUS_3 = ExplicitBase(
    tuple("abcdef"), (("ab", "a", "b"), ("bc", "b", "c"), ("ca", "c", "a")), None
)


def sweep(recipe, limit=None, oracle_cap=16, max_dim=24):
    """Decompose every (or the first `limit`) even signature classes and
    cross-check against the oracle where feasible."""
    real = realize(recipe)
    g = real.graph
    sigs = [
        cls.representative
        for cls in enumerate_signature_classes(g, max_dim=max_dim)
        if len(cls.representative) % 2 == 0
    ]
    if limit:
        sigs = sigs[:limit]
    for odd in sigs:
        cert = decompose_block(real.block, odd)
        assert validate_certificate(g.with_signature(odd), cert).ok
        assert cert.odd_cycle_index is None
        if len(g.edges) <= oracle_cap:
            assert oracle_decompose(g.with_signature(odd)) is not None
    return len(sigs)


# -- bases ------------------------------------------------------------------


def test_k2n_pairing_examples():
    cert = decompose_k2n(2, ["a1:b0", "a1:b1"])
    assert cert.cycles == (("a0:b0", "a1:b0", "a1:b1", "a0:b1"),)
    cert = decompose_k2n(4, [])
    assert cert.cycles == (
        ("a0:b0", "a1:b0", "a1:b1", "a0:b1"),
        ("a0:b2", "a1:b2", "a1:b3", "a0:b3"),
    )
    # an equivalent signature keeps the cycles valid
    cert = decompose_k2n(4, ["a0:b0", "a1:b0"])
    g = realize(CompleteBipartite(2, 4)).graph.with_signature(["a0:b0", "a1:b0"])
    assert validate_certificate(g, cert).ok


@pytest.mark.parametrize(
    "recipe",
    [
        CompleteBipartite(2, 2),
        CompleteBipartite(2, 4),
        CompleteBipartite(2, 6),
        CompleteBipartite(4, 4),
        CompleteBipartiteMinusC4(4, 4),
        CompleteMultipartite((2, 2, 2)),
        CompleteMultipartite((3, 1, 1)),
        OddClique(3),
    ],
    ids=str,
)
def test_base_class_sweeps(recipe):
    sweep(recipe)


def test_doubled_k5_full_sweep():
    assert sweep(K5PlusM(2)) == 128


def test_doubled_k5_strips_parallel_pairs():
    cert = decompose_k5_plus(4, [])
    g = realize(K5PlusM(4)).graph
    assert validate_certificate(g, cert).ok
    assert any(len(c) == 2 for c in cert.cycles)


def test_parity_four_cycle_exhaustive():
    for n, m in ((2, 2), (4, 4)):
        g = complete_bipartite_graph(n, m)
        ids = sorted(g.edge_ids())
        for bits in range(1 << len(ids)) if n == 2 else range(0, 1 << len(ids), 97):
            odd = frozenset(e for i, e in enumerate(ids) if bits >> i & 1)
            square = find_parity_four_cycle(g, odd)
            want = "odd" if len(odd) % 2 else "even"
            assert cycle_parity(g.with_signature(odd), square) == want


def test_k5_is_bad():
    all_odd = {f"v{i}:v{j}" for i, j in itertools.combinations(range(5), 2)}
    assert k5_is_bad(all_odd)
    assert not k5_is_bad(frozenset())
    star_flipped = {e for e in all_odd if "v0" not in e}
    assert k5_is_bad(star_flipped)
    with pytest.raises(PreconditionError):
        k5_is_bad({"v0:v1"})


# -- almost decompositions ---------------------------------------------------


def test_almost_exhaustive_small():
    recipe = CompleteBipartite(2, 4)
    g = realize(recipe).graph
    ids = sorted(g.edge_ids())
    for bits in range(1 << len(ids)):
        odd = frozenset(e for i, e in enumerate(ids) if bits >> i & 1)
        if len(odd) % 2 == 0:
            continue
        for eid in ids:
            cert = almost_decompose(recipe, odd, eid)
            signed = g.with_signature(odd)
            assert validate_certificate(signed, cert).ok
            flagged = cert.cycles[cert.odd_cycle_index]
            assert eid in flagged
            assert cycle_parity(signed, flagged) == "odd"


def test_almost_triangle():
    cert = almost_decompose(OddClique(3), ["v0:v1"], "v0:v1")
    assert cert.odd_cycle_index == 0 and len(cert.cycles) == 1


def test_almost_requires_odd_signature():
    with pytest.raises(PreconditionError):
        almost_decompose(CompleteBipartite(2, 2), [], "a0:b0")


# -- composition sweeps -------------------------------------------------------


@pytest.mark.parametrize(
    "recipe,limit",
    [
        (OddExpansion(CompleteBipartite(2, 2), "a0", 3), None),
        (OddExpansion(CompleteBipartite(2, 2), "b0", 3), None),
        (OddExpansion(OddClique(3), "v0", 3), None),
        (Apex(CompleteBipartite(2, 2), 2), None),
        (Apex(CompleteMultipartite((2, 2)), 4), 120),
        (Apex(COCLAW, 4), 120),
        (Apex(TRI_PLUS_3, 2), None),
        (Apex(C6, 2), 120),
        (CliqueJoinK2(OddClique(1)), None),
        (CliqueJoinK2(CompleteMultipartite((3, 1, 1))), 120),
        (Substitute(CompleteBipartite(2, 2), "a0", OddClique(1)), None),
        (Substitute(CompleteBipartite(2, 4), "a0", OddClique(3)), 200),
        (Substitute(CompleteBipartite(2, 2), "a0", CompleteMultipartite((3, 1, 1))), 200),
        (TwinSubstitute(CompleteBipartite(2, 2), ("a0", "a1"), CompleteBipartite(2, 2)), None),
        (TwinSubstitute(CompleteBipartite(4, 4), ("a0", "a1"), CompleteBipartite(2, 2)), 60),
        (TwinSubstitute(CompleteBipartite(2, 2), ("a0", "a1"), C6), 100),
        (TwinSubstitute(CompleteBipartite(4, 4), ("a0", "a1"), COCLAW), 40),
        (Join((OddClique(1), OddClique(1)), (OddClique(1), OddClique(1))), None),
        (Join((OddClique(3), OddClique(1)), (OddClique(3), OddClique(1))), 120),
        (Join((C4,), (OddClique(1), OddClique(1))), 100),
        (Join((C4,), (C4,)), 60),
        (Join((OddClique(3), OddClique(1)), (C4,)), 60),
        (Subdivide.of(
            CompleteBipartite(2, 2),
            {"a0:b0": 2, "a0:b1": 1, "a1:b0": 3, "a1:b1": 1},
        ), None),
    ],
    ids=str,
)
def test_composition_sweeps(recipe, limit):
    sweep(recipe, limit=limit)


@pytest.mark.parametrize(
    "recipe,count",
    [
        (OddClique(7), 40),
        (OddClique(9), 15),
        (CompleteMultipartite((3, 1, 1, 1, 1)), 50),
        (CompleteMultipartite((5, 1, 1)), 40),
        (CompleteMultipartite((3, 3, 1)), 40),
        (CompleteMultipartite((4, 4, 2)), 20),
        (CompleteMultipartite((2, 2, 2, 2)), 20),
        (Join((OddClique(3), OddClique(3)), tuple(OddClique(1) for _ in range(6))), 20),
        (Apex(COCLAW, 6), 40),
    ],
    ids=str,
)
def test_seeded_sweeps_larger(recipe, count):
    real = realize(recipe)
    g = real.graph
    ids = sorted(g.edge_ids())
    rng = random.Random(13)
    for _ in range(count):
        odd = sample_even_signature(rng, ids)
        cert = decompose_block(real.block, odd)
        assert validate_certificate(g.with_signature(odd), cert).ok
        if len(ids) <= 16:
            assert oracle_decompose(g.with_signature(odd)) is not None


def test_signature_class_stability():
    # equivalent signatures both yield valid certificates
    recipe = Apex(CompleteBipartite(2, 2), 2)
    real = realize(recipe)
    g = real.graph
    rng = random.Random(3)
    ids = sorted(g.edge_ids())
    for _ in range(15):
        odd = sample_even_signature(rng, ids)
        members = [v for v in g.vertices if rng.randrange(2)]
        from evcyc import cut

        equiv = odd ^ cut(g, members).edges
        for sigma in (odd, frozenset(equiv)):
            cert = decompose_block(real.block, sigma)
            assert validate_certificate(g.with_signature(sigma), cert).ok


def test_decompose_rejects_odd_signature():
    with pytest.raises(PreconditionError):
        decompose(CompleteBipartite(2, 2), ["a0:b0"])
    with pytest.raises(PreconditionError):
        decompose(CompleteBipartite(2, 2), ["nope", "a0:b0"])


def test_decompose_rejects_invalid_recipe():
    with pytest.raises(PreconditionError):
        decompose(CompleteMultipartite((1, 1, 1, 1, 1)), [])


def test_tables_reject_tampering(monkeypatch):
    import evcyc.decomposer as dec

    broken = [(key, cycles) for key, cycles in dec.K44_TABLE]
    broken[0] = (broken[0][0], [c[:] for c in broken[0][1]])
    broken[0][1][0][0] = ("a", "z")  # corrupt one edge of one cycle
    monkeypatch.setattr(dec, "K44_TABLE", broken)
    with pytest.raises(InternalError):
        dec._check_tables()
