"""Construction trees for the decomposable graph classes.

A Recipe describes how a graph is assembled from complete bipartite bases,
doubled K5s, odd cliques and complete multipartite graphs by odd expansion,
apex addition, join with K2, substitution, twin substitution, joins and
subdivision.  validate_recipe checks every operation's hypotheses and says
which clause failed; realize builds the concrete graph together with the
decomposer block tree that produces certificates for it.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import decomposer as dec
from .core import (
    EVEN,
    Edge,
    GraphError,
    PreconditionError,
    SignedMultigraph,
    is_eulerian,
)

_SAFE_ID = re.compile(r"^[A-Za-z0-9_.-]+$")


class Recipe:
    """Base class for construction-tree nodes."""


@dataclass(frozen=True)
class CompleteBipartite(Recipe):
    n: int
    m: int


@dataclass(frozen=True)
class CompleteBipartiteMinusC4(Recipe):
    n: int
    m: int
    deleted: tuple[str, str, str, str] | None = None


@dataclass(frozen=True)
class K5PlusM(Recipe):
    m: int
    pair: tuple[str, str] = ("t", "w")


@dataclass(frozen=True)
class CompleteMultipartite(Recipe):
    parts: tuple[int, ...]


@dataclass(frozen=True)
class OddClique(Recipe):
    n: int


@dataclass(frozen=True)
class ExplicitBase(Recipe):
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]  # (edge id, u, v)
    proof: dict | None = field(default=None, compare=False)


@dataclass(frozen=True)
class OddExpansion(Recipe):
    child: Recipe
    v: str
    count: int


@dataclass(frozen=True)
class Apex(Recipe):
    child: Recipe
    count: int


@dataclass(frozen=True)
class CliqueJoinK2(Recipe):
    child: Recipe


@dataclass(frozen=True)
class Substitute(Recipe):
    g: Recipe
    v: str
    h: Recipe


@dataclass(frozen=True)
class TwinSubstitute(Recipe):
    g: Recipe
    pair: tuple[str, str]
    h: Recipe


@dataclass(frozen=True)
class Join(Recipe):
    left: tuple[Recipe, ...]
    right: tuple[Recipe, ...]


@dataclass(frozen=True)
class Subdivide(Recipe):
    child: Recipe
    lengths: tuple[tuple[str, int], ...]

    @staticmethod
    def of(child: Recipe, lengths: Mapping[str, int]) -> "Subdivide":
        return Subdivide(child, tuple(sorted(lengths.items())))

    @property
    def length_map(self) -> dict[str, int]:
        return dict(self.lengths)


# ---------------------------------------------------------------------------
# realization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Realization:
    recipe: Recipe
    graph: SignedMultigraph
    block: dec.Block


class _BipartiteBlock(dec.Block):
    def __init__(self, n, m, missing=None):
        self.a = [f"a{i}" for i in range(n)]
        self.b = [f"b{j}" for j in range(m)]
        self.missing = missing  # (apair, bpair) or None
        self.vertices = tuple(self.a + self.b)
        self.edges = {}
        skip = set()
        if missing:
            skip = {(x, y) for x in missing[0] for y in missing[1]}
        for x in self.a:
            for y in self.b:
                if (x, y) not in skip:
                    self.edges[f"{x}:{y}"] = (x, y)

    @staticmethod
    def eid(x, y):
        return f"{x}:{y}"

    def decompose(self, odd):
        if self.missing:
            return dec.bipartite_minus_c4_cycles(
                self.a, self.b, self.missing[0], self.missing[1], self.eid, frozenset(odd)
            )
        return dec.complete_bipartite_cycles(self.a, self.b, self.eid, frozenset(odd))


def _sorted_pair_id(u, v):
    return f"{u}:{v}" if u < v else f"{v}:{u}"


class _K5PlusBlock(dec.Block):
    names = ("t", "a", "u", "b", "w")

    def __init__(self, m):
        self.m = m
        self.vertices = self.names
        self.edges = {
            _sorted_pair_id(u, v): tuple(sorted((u, v)))
            for u, v in itertools.combinations(self.names, 2)
        }
        self.parallels = [_sorted_pair_id("t", "w")] + [f"p{i}" for i in range(m)]
        for i in range(m):
            self.edges[f"p{i}"] = ("t", "w")

    def decompose(self, odd):
        roles = {r: r for r in dec._K5_ROLES}
        return dec.k5_plus_view(
            roles,
            lambda ru, rv: _sorted_pair_id(ru, rv),
            self.parallels,
            self.edges,
            frozenset(odd),
        )


class _OddCliqueBlock(dec.Block):
    def __init__(self, n):
        self.vs = [f"v{i}" for i in range(n)]
        self.vertices = tuple(self.vs)
        self.edges = {
            _sorted_pair_id(u, v): tuple(sorted((u, v)))
            for u, v in itertools.combinations(self.vs, 2)
        }

    def decompose(self, odd):
        return dec.odd_clique_pieces(self.vs, _sorted_pair_id, self.edges, frozenset(odd))


class _MultipartiteBlock(dec.Block):
    def __init__(self, parts):
        self.parts = [[f"p{i}.{j}" for j in range(size)] for i, size in enumerate(parts)]
        self.vertices = tuple(v for p in self.parts for v in p)
        self.edges = {}
        for p, q in itertools.combinations(self.parts, 2):
            for u in p:
                for v in q:
                    self.edges[_sorted_pair_id(u, v)] = tuple(sorted((u, v)))

    def decompose(self, odd):
        return dec.multipartite_pieces(self.parts, _sorted_pair_id, self.edges, frozenset(odd))


class _ExpansionBlock(dec.Block):
    def __init__(self, child: dec.Block, pivot: str, count: int):
        self.child = child
        self.pivot = pivot
        self.clones = [f"t{i}" for i in range(count)]
        nbrs = set()
        for e, (u, v) in child.edges.items():
            if pivot in (u, v):
                nbrs.add(v if u == pivot else u)
        self.neighbors_local = sorted(nbrs)
        self.vertices = tuple(
            [f"g.{v}" for v in child.vertices if v != pivot] + self.clones
        )
        self.edges = {}
        self.g_rest = set()
        for e, (u, v) in child.edges.items():
            if pivot not in (u, v):
                self.edges[f"g:{e}"] = (f"g.{u}", f"g.{v}")
                self.g_rest.add(f"g:{e}")
        for t in self.clones:
            for w in self.neighbors_local:
                self.edges[f"{t}~g.{w}"] = (t, f"g.{w}")

    def _reify(self, clone):
        vmap = {v: (clone if v == self.pivot else f"g.{v}") for v in self.child.vertices}
        emap = {}
        for e, (u, v) in self.child.edges.items():
            if self.pivot in (u, v):
                w = v if u == self.pivot else u
                emap[e] = f"{clone}~g.{w}"
            else:
                emap[e] = f"g:{e}"
        return dec.RenamedBlock(self.child, vmap, emap)

    def decompose(self, odd):
        return dec.expansion_view(
            self._reify,
            self.clones,
            [f"g.{w}" for w in self.neighbors_local],
            lambda t, w: f"{t}~{w}",
            frozenset(self.g_rest),
            frozenset(odd),
        )


class _ApexBlock(dec.Block):
    def __init__(self, child: dec.Block, count: int):
        self.inner = dec.RenamedBlock(
            child,
            {v: f"g.{v}" for v in child.vertices},
            {e: f"g:{e}" for e in child.edges},
        )
        self.apexes = [f"x{i}" for i in range(count)]
        self.vertices = tuple(list(self.inner.vertices) + self.apexes)
        self.edges = dict(self.inner.edges)
        for gv in self.inner.vertices:
            for x in self.apexes:
                self.edges[f"{x}~{gv}"] = (x, gv)

    def decompose(self, odd):
        return dec.apex_view(
            self.inner, self.apexes, lambda gv, xv: f"{xv}~{gv}", self.edges, frozenset(odd)
        )


class _CliqueJoinBlock(dec.Block):
    def __init__(self, child: dec.Block):
        self.inner = dec.RenamedBlock(
            child,
            {v: f"g.{v}" for v in child.vertices},
            {e: f"g:{e}" for e in child.edges},
        )
        self.p, self.q = "x0", "x1"
        self.pq = "x0~x1"
        self.vertices = tuple(list(self.inner.vertices) + [self.p, self.q])
        self.edges = dict(self.inner.edges)
        self.edges[self.pq] = (self.p, self.q)
        for gv in self.inner.vertices:
            for x in (self.p, self.q):
                self.edges[f"{x}~{gv}"] = (x, gv)

    def decompose(self, odd):
        return dec.clique_join_view(
            self.inner,
            self.p,
            self.q,
            self.pq,
            lambda gv, xv: f"{xv}~{gv}",
            self.edges,
            frozenset(odd),
        )


class _SubstituteBlock(dec.Block):
    def __init__(self, g: dec.Block, pivot: str, h: dec.Block):
        self.g = g
        self.pivot = pivot
        self.h_inner = dec.RenamedBlock(
            h, {v: f"h.{v}" for v in h.vertices}, {e: f"h:{e}" for e in h.edges}
        )
        nbrs = set()
        for e, (u, v) in g.edges.items():
            if pivot in (u, v):
                nbrs.add(v if u == pivot else u)
        self.neighbors = [f"g.{w}" for w in sorted(nbrs)]
        self.vertices = tuple(
            [f"g.{v}" for v in g.vertices if v != pivot] + list(self.h_inner.vertices)
        )
        self.edges = {}
        self.g_rest = set()
        for e, (u, v) in g.edges.items():
            if pivot not in (u, v):
                self.edges[f"g:{e}"] = (f"g.{u}", f"g.{v}")
                self.g_rest.add(f"g:{e}")
        self.edges.update(self.h_inner.edges)
        for hv in self.h_inner.vertices:
            for w in self.neighbors:
                self.edges[f"{hv}~{w}"] = (hv, w)

    def _reify(self, clone):
        vmap = {v: (clone if v == self.pivot else f"g.{v}") for v in self.g.vertices}
        emap = {}
        for e, (u, v) in self.g.edges.items():
            if self.pivot in (u, v):
                w = v if u == self.pivot else u
                emap[e] = f"{clone}~g.{w}"
            else:
                emap[e] = f"g:{e}"
        return dec.RenamedBlock(self.g, vmap, emap)

    def decompose(self, odd):
        return dec.substitution_view(
            self._reify,
            self.h_inner,
            self.neighbors,
            lambda hv, w: f"{hv}~{w}",
            frozenset(self.g_rest),
            self.edges,
            frozenset(odd),
        )


class _TwinSubstituteBlock(dec.Block):
    def __init__(self, g: dec.Block, pair: tuple[str, str], h: dec.Block):
        self.g = g
        self.u, self.v = pair
        self.h_inner = dec.RenamedBlock(
            h, {v: f"h.{v}" for v in h.vertices}, {e: f"h:{e}" for e in h.edges}
        )
        nbrs = set()
        for e, (a, b) in g.edges.items():
            if self.u in (a, b):
                nbrs.add(b if a == self.u else a)
        self.neighbors = [f"g.{w}" for w in sorted(nbrs)]
        self.vertices = tuple(
            [f"g.{x}" for x in g.vertices if x not in pair] + list(self.h_inner.vertices)
        )
        self.edges = {}
        self.g_rest = set()
        for e, (a, b) in g.edges.items():
            if self.u not in (a, b) and self.v not in (a, b):
                self.edges[f"g:{e}"] = (f"g.{a}", f"g.{b}")
                self.g_rest.add(f"g:{e}")
        self.edges.update(self.h_inner.edges)
        for hv in self.h_inner.vertices:
            for w in self.neighbors:
                self.edges[f"{hv}~{w}"] = (hv, w)

    def _reify_pair(self, t1, t2):
        vmap = {}
        for x in self.g.vertices:
            if x == self.u:
                vmap[x] = t1
            elif x == self.v:
                vmap[x] = t2
            else:
                vmap[x] = f"g.{x}"
        emap = {}
        for e, (a, b) in self.g.edges.items():
            if self.u in (a, b):
                w = b if a == self.u else a
                emap[e] = f"{t1}~g.{w}"
            elif self.v in (a, b):
                w = b if a == self.v else a
                emap[e] = f"{t2}~g.{w}"
            else:
                emap[e] = f"g:{e}"
        return dec.RenamedBlock(self.g, vmap, emap)

    def decompose(self, odd):
        return dec.twin_view(
            self._reify_pair,
            self.h_inner,
            self.neighbors,
            lambda hv, w: f"{hv}~{w}",
            frozenset(self.g_rest),
            self.edges,
            frozenset(odd),
        )


class _JoinBlock(dec.Block):
    def __init__(self, left: Sequence[dec.Block], right: Sequence[dec.Block]):
        self.left_inner = [
            dec.RenamedBlock(b, {v: f"l{i}.{v}" for v in b.vertices}, {e: f"l{i}:{e}" for e in b.edges})
            for i, b in enumerate(left)
        ]
        self.right_inner = [
            dec.RenamedBlock(b, {v: f"r{i}.{v}" for v in b.vertices}, {e: f"r{i}:{e}" for e in b.edges})
            for i, b in enumerate(right)
        ]
        lv = [v for b in self.left_inner for v in b.vertices]
        rv = [v for b in self.right_inner for v in b.vertices]
        self.vertices = tuple(lv + rv)
        self.edges = {}
        for b in self.left_inner + self.right_inner:
            self.edges.update(b.edges)
        for a in lv:
            for c in rv:
                self.edges[f"{a}~{c}"] = (a, c)
        self._lv, self._rv = lv, rv

    @staticmethod
    def layer(a, b):
        return f"{a}~{b}"

    def _side_pieces(self, inners):
        units: list[dec.Block] = []
        singles: list[str] = []
        for b in inners:
            u, s = dec._components_of(b)
            units += u
            singles += s
        return units, singles

    def decompose(self, odd):
        odd = frozenset(odd)
        lu, ls = self._side_pieces(self.left_inner)
        ru, rs = self._side_pieces(self.right_inner)

        def side_is_coclaw(units, singles, total):
            return (
                len(total) == 4
                and len(units) == 1
                and len(units[0].edges) == 3
                and len(singles) == 1
            )

        if side_is_coclaw(lu, ls, self._lv) and side_is_coclaw(ru, rs, self._rv):
            ring1 = dec.chain(self.edges, *([e] for e in sorted(lu[0].edges)))
            ring2 = dec.chain(self.edges, *([e] for e in sorted(ru[0].edges)))
            return dec.coclaw_join_pieces(
                ring1, self._lv, ring2, self._rv, self.layer, self.edges, odd
            )
        return dec.join_pieces(lu, ls, ru, rs, self.layer, self.edges, odd)


class _SubdivideBlock(dec.Block):
    def __init__(self, child: dec.Block, lengths: Mapping[str, int]):
        self.inner = dec.RenamedBlock(
            child,
            {v: f"g.{v}" for v in child.vertices},
            {e: f"g:{e}" for e in child.edges},
        )
        self.expansions = {}
        self.vertices = list(self.inner.vertices)
        self.edges = {}
        self._paths: dict[str, list[str]] = {}
        for e, (u, v) in self.inner.edges.items():
            n = lengths[e[2:]]
            if n == 1:
                self.edges[e] = (u, v)
                self._paths[e] = [e]
                continue
            stops = [u] + [f"{e}:s{i}" for i in range(1, n)] + [v]
            self.vertices.extend(stops[1:-1])
            path = []
            for i in range(n):
                pid = f"{e}:p{i}"
                self.edges[pid] = (stops[i], stops[i + 1])
                path.append(pid)
            self._paths[e] = path
            self.expansions[e] = (u, v, path)
        self.vertices = tuple(self.vertices)

    def decompose(self, odd):
        odd = frozenset(odd)
        inner_odd = frozenset(
            e for e, path in self._paths.items() if dec._parity(odd, path)
        )
        view_edges = dict(self.edges)
        for e, (u, v, _) in self.expansions.items():
            view_edges[e] = (u, v)
        cycles = self.inner.decompose(inner_odd)
        return dec.expand_cycles(cycles, view_edges, self.expansions)


def _build_block(recipe: Recipe) -> dec.Block:
    if isinstance(recipe, CompleteBipartite):
        return _BipartiteBlock(recipe.n, recipe.m)
    if isinstance(recipe, CompleteBipartiteMinusC4):
        deleted = recipe.deleted or ("a0", "a1", "b0", "b1")
        apair = tuple(x for x in deleted if x.startswith("a"))
        bpair = tuple(x for x in deleted if x.startswith("b"))
        return _BipartiteBlock(recipe.n, recipe.m, (apair, bpair))
    if isinstance(recipe, K5PlusM):
        return _K5PlusBlock(recipe.m)
    if isinstance(recipe, CompleteMultipartite):
        return _MultipartiteBlock(recipe.parts)
    if isinstance(recipe, OddClique):
        return _OddCliqueBlock(recipe.n)
    if isinstance(recipe, ExplicitBase):
        return dec.OracleBlock(recipe.vertices, {e: (u, v) for e, u, v in recipe.edges})
    if isinstance(recipe, OddExpansion):
        return _ExpansionBlock(_build_block(recipe.child), recipe.v, recipe.count)
    if isinstance(recipe, Apex):
        return _ApexBlock(_build_block(recipe.child), recipe.count)
    if isinstance(recipe, CliqueJoinK2):
        return _CliqueJoinBlock(_build_block(recipe.child))
    if isinstance(recipe, Substitute):
        return _SubstituteBlock(_build_block(recipe.g), recipe.v, _build_block(recipe.h))
    if isinstance(recipe, TwinSubstitute):
        return _TwinSubstituteBlock(_build_block(recipe.g), recipe.pair, _build_block(recipe.h))
    if isinstance(recipe, Join):
        return _JoinBlock(
            [_build_block(c) for c in recipe.left],
            [_build_block(c) for c in recipe.right],
        )
    if isinstance(recipe, Subdivide):
        return _SubdivideBlock(_build_block(recipe.child), recipe.length_map)
    raise PreconditionError(f"unknown recipe node {type(recipe).__name__}")


def _block_graph(block: dec.Block) -> SignedMultigraph:
    return SignedMultigraph(
        block.vertices,
        [Edge(e, u, v, EVEN) for e, (u, v) in sorted(block.edges.items())],
    )


def realize(recipe: Recipe, validate: bool = True) -> Realization:
    """Build the concrete graph and its decomposer block for a recipe.

    With validate=True (the default) the recipe's hypotheses are checked
    first and a PreconditionError carries the first failing clause.
    """
    if validate:
        report = validate_recipe(recipe)
        if not report.ok:
            first = report.failures[0]
            raise PreconditionError(
                f"recipe invalid at {first.path or 'root'}: [{first.clause}] {first.message}"
            )
    block = _build_block(recipe)
    return Realization(recipe, _block_graph(block), block)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PreconditionEntry:
    path: str
    node: str
    ok: bool
    clause: str | None = None
    message: str | None = None


@dataclass(frozen=True)
class PreconditionReport:
    entries: tuple[PreconditionEntry, ...]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    @property
    def failures(self) -> list[PreconditionEntry]:
        return [e for e in self.entries if not e.ok]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "entries": [
                {
                    "path": e.path,
                    "node": e.node,
                    "ok": e.ok,
                    "clause": e.clause,
                    "message": e.message,
                }
                for e in self.entries
            ],
        }


def is_coclaw(g: SignedMultigraph) -> bool:
    """True iff the graph is the disjoint union of a triangle and one vertex."""
    if len(g.vertices) != 4 or len(g.edges) != 3:
        return False
    touched = set()
    for e in g.edges:
        touched.update((e.u, e.v))
    if len(touched) != 3:
        return False
    pairs = {frozenset((e.u, e.v)) for e in g.edges}
    return len(pairs) == 3


def _is_triangle(g: SignedMultigraph) -> bool:
    return len(g.vertices) == 3 and len(g.edges) == 3 and g.is_simple()


def _graph_of(recipe: Recipe) -> SignedMultigraph:
    return _block_graph(_build_block(recipe))


def validate_recipe(recipe: Recipe) -> PreconditionReport:
    """Check every node's hypotheses; failures carry a clause tag."""
    entries: list[PreconditionEntry] = []

    def ok(path, node):
        entries.append(PreconditionEntry(path, node, True))

    def fail(path, node, clause, message):
        entries.append(PreconditionEntry(path, node, False, clause, message))

    def walk(r: Recipe, path: str):
        name = type(r).__name__
        if isinstance(r, CompleteBipartite) or isinstance(r, CompleteBipartiteMinusC4):
            if r.n % 2 or r.m % 2 or r.n < 2 or r.m < 2:
                fail(path, name, "bipartite-even-sides", "both sides must be even and >= 2")
                return
            if isinstance(r, CompleteBipartiteMinusC4) and r.deleted is not None:
                apair = [x for x in r.deleted if re.fullmatch(r"a\d+", x)]
                bpair = [x for x in r.deleted if re.fullmatch(r"b\d+", x)]
                valid = (
                    len(r.deleted) == 4
                    and len(apair) == 2
                    and len(bpair) == 2
                    and len(set(r.deleted)) == 4
                    and all(int(x[1:]) < r.n for x in apair)
                    and all(int(x[1:]) < r.m for x in bpair)
                )
                if not valid:
                    fail(path, name, "deleted-four-cycle", "deleted vertices must be two per side")
                    return
            ok(path, name)
            return
        if isinstance(r, K5PlusM):
            if r.m % 2 or r.m < 2:
                fail(path, name, "doubled-k5-even-parallels", "parallel count must be even and >= 2")
                return
            ok(path, name)
            return
        if isinstance(r, CompleteMultipartite):
            if not r.parts or any(p < 1 for p in r.parts):
                fail(path, name, "multipartite-parts", "part sizes must be >= 1")
                return
            if tuple(r.parts) == (1, 1, 1, 1, 1):
                fail(path, name, "five-clique-excluded",
                     "the complete graph on five vertices has no even-cycle decomposition")
                return
            evens = all(p % 2 == 0 for p in r.parts)
            odds = all(p % 2 == 1 for p in r.parts) and len(r.parts) % 2 == 1
            if not (evens or odds or len(r.parts) == 1):
                fail(path, name, "multipartite-eulerian",
                     "parts must be all even, or all odd with an odd part count")
                return
            ok(path, name)
            return
        if isinstance(r, OddClique):
            if r.n % 2 == 0 or r.n < 1:
                fail(path, name, "odd-clique-odd", "vertex count must be odd and >= 1")
                return
            if r.n == 5:
                fail(path, name, "five-clique-excluded",
                     "the complete graph on five vertices has no even-cycle decomposition")
                return
            ok(path, name)
            return
        if isinstance(r, ExplicitBase):
            bad_ids = [
                x
                for x in list(r.vertices) + [e for e, _, _ in r.edges]
                if not _SAFE_ID.fullmatch(x)
            ]
            if bad_ids:
                fail(path, name, "explicit-base-ids",
                     f"ids must match [A-Za-z0-9_.-]+: {bad_ids[:3]}")
                return
            try:
                g = _graph_of(r)
            except GraphError as exc:
                fail(path, name, "explicit-base-graph", str(exc))
                return
            if not is_eulerian(g):
                fail(path, name, "explicit-base-eulerian", "every vertex degree must be even")
                return
            from .oracle import max_edge_bound, oracle_is_strongly_ecd

            if len(g.edges) > max_edge_bound():
                fail(path, name, "explicit-base-bound",
                     f"{len(g.edges)} edges exceeds the oracle bound")
                return
            if r.proof and r.proof.get("verdict") == "strongly-decomposable":
                ok(path, name)
                return
            report = oracle_is_strongly_ecd(g)
            if report.verdict != "strongly-decomposable":
                fail(path, name, "explicit-base-strong",
                     "the oracle found a non-decomposable even signature")
                return
            ok(path, name)
            return
        if isinstance(r, OddExpansion):
            walk(r.child, f"{path}.child" if path else "child")
            child = _graph_of(r.child)
            if r.count % 2 == 0 or r.count < 1:
                fail(path, name, "expansion-odd-count", "clone count must be odd and >= 1")
                return
            if not child.is_simple():
                fail(path, name, "expansion-simple-child", "the expanded graph must be simple")
                return
            if not child.has_vertex(r.v):
                fail(path, name, "expansion-pivot", f"no vertex {r.v!r} in the child")
                return
            if child.degree(r.v) == 0:
                fail(path, name, "expansion-pivot", "the expanded vertex must not be isolated")
                return
            ok(path, name)
            return
        if isinstance(r, Apex):
            walk(r.child, f"{path}.child" if path else "child")
            child = _graph_of(r.child)
            if r.count % 2 or r.count < 2:
                fail(path, name, "apex-even-count", "apex count must be even and >= 2")
                return
            if len(child.vertices) % 2:
                fail(path, name, "apex-even-child", "the base graph needs an even vertex count")
                return
            if not child.is_simple():
                fail(path, name, "apex-simple-child", "the base graph must be simple")
                return
            if r.count == 2 and is_coclaw(child):
                fail(path, name, "apex-coclaw",
                     "a triangle plus one vertex with two apexes subdivides the 5-clique")
                return
            ok(path, name)
            return
        if isinstance(r, CliqueJoinK2):
            walk(r.child, f"{path}.child" if path else "child")
            child = _graph_of(r.child)
            if len(child.vertices) % 2 == 0:
                fail(path, name, "clique-join-odd-child", "the base graph needs an odd vertex count")
                return
            if not child.is_simple():
                fail(path, name, "clique-join-simple-child", "the base graph must be simple")
                return
            if _is_triangle(child):
                fail(path, name, "clique-join-triangle",
                     "joining a triangle with an edge yields the 5-clique")
                return
            ok(path, name)
            return
        if isinstance(r, Substitute):
            walk(r.g, f"{path}.g" if path else "g")
            walk(r.h, f"{path}.h" if path else "h")
            g = _graph_of(r.g)
            h = _graph_of(r.h)
            if len(h.vertices) % 2 == 0:
                fail(path, name, "substitute-odd-h", "the substituted graph needs odd vertex count")
                return
            if not g.is_simple() or not h.is_simple():
                fail(path, name, "substitute-simple", "both graphs must be simple")
                return
            if not g.has_vertex(r.v) or g.degree(r.v) == 0:
                fail(path, name, "substitute-pivot", "the substituted vertex must exist and not be isolated")
                return
            if _is_triangle(h) and g.degree(r.v) < 4:
                fail(path, name, "substitute-triangle-degree",
                     "substituting a triangle needs degree >= 4 at the vertex")
                return
            ok(path, name)
            return
        if isinstance(r, TwinSubstitute):
            walk(r.g, f"{path}.g" if path else "g")
            walk(r.h, f"{path}.h" if path else "h")
            g = _graph_of(r.g)
            h = _graph_of(r.h)
            u, v = r.pair
            if not (g.has_vertex(u) and g.has_vertex(v)) or u == v:
                fail(path, name, "twin-pair", "the twin pair must be two distinct vertices")
                return
            if not g.is_simple() or not h.is_simple():
                fail(path, name, "twin-simple", "both graphs must be simple")
                return
            nbrs = {}
            for x in (u, v):
                nbrs[x] = {g.edge(e).other(x) for e in g.incident(x)}
            if v in nbrs[u] or nbrs[u] != nbrs[v]:
                fail(path, name, "twin-pair", "the pair must be non-adjacent with equal neighborhoods")
                return
            if not nbrs[u]:
                fail(path, name, "twin-pair", "the twins must not be isolated")
                return
            if len(h.vertices) % 2:
                fail(path, name, "twin-even-h", "the substituted graph needs even vertex count")
                return
            if is_coclaw(h) and g.degree(v) < 4:
                fail(path, name, "twin-coclaw-degree",
                     "substituting a co-claw needs degree >= 4 at the twins")
                return
            ok(path, name)
            return
        if isinstance(r, Join):
            for i, c in enumerate(r.left):
                walk(c, f"{path}.left[{i}]" if path else f"left[{i}]")
            for i, c in enumerate(r.right):
                walk(c, f"{path}.right[{i}]" if path else f"right[{i}]")
            if not r.left or not r.right:
                fail(path, name, "join-sides", "both sides need at least one component")
                return
            sides = []
            for comps in (r.left, r.right):
                gs = [_graph_of(c) for c in comps]
                total = sum(len(g.vertices) for g in gs)
                simple = all(g.is_simple() for g in gs)
                sides.append((gs, total, simple))
            if sides[0][1] % 2 or sides[1][1] % 2:
                fail(path, name, "join-even-sides", "both sides need even vertex counts")
                return
            if not (sides[0][2] and sides[1][2]):
                fail(path, name, "join-simple", "all components must be simple")
                return

            def union_is_coclaw(gs, total):
                edges = sum(len(g.edges) for g in gs)
                if total != 4 or edges != 3:
                    return False
                withedges = [g for g in gs if g.edges]
                return len(withedges) == 1 and _is_triangle_shape(withedges[0])

            def _is_triangle_shape(g):
                touched = {x for e in g.edges for x in (e.u, e.v)}
                return len(g.edges) == 3 and len(touched) == 3

            def side_edgeless_pair(gs, total):
                return total == 2 and all(not g.edges for g in gs)

            left_cc = union_is_coclaw(sides[0][0], sides[0][1])
            right_cc = union_is_coclaw(sides[1][0], sides[1][1])
            if (left_cc and side_edgeless_pair(sides[1][0], sides[1][1])) or (
                right_cc and side_edgeless_pair(sides[0][0], sides[0][1])
            ):
                fail(path, name, "join-coclaw-pair",
                     "a co-claw joined with two vertices subdivides the 5-clique")
                return
            ok(path, name)
            return
        if isinstance(r, Subdivide):
            walk(r.child, f"{path}.child" if path else "child")
            child = _graph_of(r.child)
            lengths = r.length_map
            if set(lengths) != set(child.edge_ids()):
                fail(path, name, "subdivision-lengths", "profile must cover exactly the child's edges")
                return
            if any(not isinstance(n, int) or n < 1 for n in lengths.values()):
                fail(path, name, "subdivision-lengths", "every length must be an integer >= 1")
                return
            ok(path, name)
            return
        fail(path, type(r).__name__, "unknown-node", "unrecognized recipe node")

    walk(recipe, "")
    return PreconditionReport(tuple(entries))


# ---------------------------------------------------------------------------
# JSON codec
# ---------------------------------------------------------------------------


def recipe_to_json(r: Recipe) -> dict:
    if isinstance(r, CompleteBipartite):
        return {"node": "CompleteBipartite", "n": r.n, "m": r.m}
    if isinstance(r, CompleteBipartiteMinusC4):
        out = {"node": "CompleteBipartiteMinusC4", "n": r.n, "m": r.m}
        if r.deleted:
            out["deleted"] = list(r.deleted)
        return out
    if isinstance(r, K5PlusM):
        return {"node": "K5PlusM", "m": r.m}
    if isinstance(r, CompleteMultipartite):
        return {"node": "CompleteMultipartite", "parts": list(r.parts)}
    if isinstance(r, OddClique):
        return {"node": "OddClique", "n": r.n}
    if isinstance(r, ExplicitBase):
        return {
            "node": "ExplicitBase",
            "graph": {
                "vertices": list(r.vertices),
                "edges": [{"id": e, "u": u, "v": v} for e, u, v in r.edges],
            },
            "proof": r.proof,
        }
    if isinstance(r, OddExpansion):
        return {
            "node": "OddExpansion",
            "child": recipe_to_json(r.child),
            "v": r.v,
            "count": r.count,
        }
    if isinstance(r, Apex):
        return {"node": "Apex", "child": recipe_to_json(r.child), "count": r.count}
    if isinstance(r, CliqueJoinK2):
        return {"node": "CliqueJoinK2", "child": recipe_to_json(r.child)}
    if isinstance(r, Substitute):
        return {
            "node": "Substitute",
            "G": recipe_to_json(r.g),
            "v": r.v,
            "H": recipe_to_json(r.h),
        }
    if isinstance(r, TwinSubstitute):
        return {
            "node": "TwinSubstitute",
            "G": recipe_to_json(r.g),
            "pair": list(r.pair),
            "H": recipe_to_json(r.h),
        }
    if isinstance(r, Join):
        return {
            "node": "Join",
            "left": [recipe_to_json(c) for c in r.left],
            "right": [recipe_to_json(c) for c in r.right],
        }
    if isinstance(r, Subdivide):
        return {
            "node": "Subdivide",
            "child": recipe_to_json(r.child),
            "lengths": {e: n for e, n in r.lengths},
        }
    raise GraphError(f"cannot serialize recipe node {type(r).__name__}")


def recipe_from_json(data) -> Recipe:
    if not isinstance(data, dict) or "node" not in data:
        raise GraphError("recipe JSON must be an object with a 'node' field")
    kind = data["node"]
    try:
        if kind == "CompleteBipartite":
            return CompleteBipartite(int(data["n"]), int(data["m"]))
        if kind == "CompleteBipartiteMinusC4":
            deleted = data.get("deleted")
            return CompleteBipartiteMinusC4(
                int(data["n"]), int(data["m"]), tuple(deleted) if deleted else None
            )
        if kind == "K5PlusM":
            return K5PlusM(int(data["m"]))
        if kind == "CompleteMultipartite":
            return CompleteMultipartite(tuple(int(p) for p in data["parts"]))
        if kind == "OddClique":
            return OddClique(int(data["n"]))
        if kind == "ExplicitBase":
            g = data["graph"]
            return ExplicitBase(
                tuple(str(v) for v in g["vertices"]),
                tuple((str(e["id"]), str(e["u"]), str(e["v"])) for e in g["edges"]),
                data.get("proof"),
            )
        if kind == "OddExpansion":
            return OddExpansion(recipe_from_json(data["child"]), str(data["v"]), int(data["count"]))
        if kind == "Apex":
            return Apex(recipe_from_json(data["child"]), int(data["count"]))
        if kind == "CliqueJoinK2":
            return CliqueJoinK2(recipe_from_json(data["child"]))
        if kind == "Substitute":
            return Substitute(
                recipe_from_json(data["G"]), str(data["v"]), recipe_from_json(data["H"])
            )
        if kind == "TwinSubstitute":
            pair = data["pair"]
            return TwinSubstitute(
                recipe_from_json(data["G"]),
                (str(pair[0]), str(pair[1])),
                recipe_from_json(data["H"]),
            )
        if kind == "Join":
            return Join(
                tuple(recipe_from_json(c) for c in data["left"]),
                tuple(recipe_from_json(c) for c in data["right"]),
            )
        if kind == "Subdivide":
            return Subdivide.of(
                recipe_from_json(data["child"]),
                {str(e): int(n) for e, n in data["lengths"].items()},
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"bad {kind} node: {exc}") from None
    raise GraphError(f"unknown recipe node kind {kind!r}")


# ---------------------------------------------------------------------------
# seeded recipe generator
# ---------------------------------------------------------------------------


def _pick(rng: random.Random, seq):
    return seq[rng.randrange(len(seq))]


_EXPLICIT_CANDIDATES = [
    # (vertices, edges) of tiny Eulerian graphs; kept only if the oracle
    # confirms strong decomposability at generation time
    (
        tuple("abcd"),
        (("ab", "a", "b"), ("bc", "b", "c"), ("cd", "c", "d"), ("da", "d", "a")),
    ),
    (
        tuple("abcdef"),
        (
            ("ab", "a", "b"),
            ("bc", "b", "c"),
            ("cd", "c", "d"),
            ("de", "d", "e"),
            ("ef", "e", "f"),
            ("fa", "f", "a"),
        ),
    ),
    (
        tuple("abcd"),
        (("ab", "a", "b"), ("bc", "b", "c"), ("ca", "c", "a")),
    ),
]


def _explicit_bases() -> list[ExplicitBase]:
    from .oracle import oracle_is_strongly_ecd

    out = []
    for vertices, edges in _EXPLICIT_CANDIDATES:
        g = SignedMultigraph(vertices, [Edge(e, u, v, EVEN) for e, u, v in edges])
        report = oracle_is_strongly_ecd(g)
        if report.verdict == "strongly-decomposable":
            out.append(ExplicitBase(vertices, edges, report.to_json()))
    return out


def random_recipe(seed: int, budget: int) -> Recipe:
    """A valid recipe whose realization has at most `budget` edges.

    Deterministic in the seed; randomness flows through a single
    random.Random instance using only randrange-derived picks.
    """
    rng = random.Random(seed)
    bases: list[Recipe] = [
        CompleteBipartite(2, 2),
        CompleteMultipartite((1, 1, 1)),
        OddClique(3),
    ]
    if budget >= 7:
        bases.append(CompleteMultipartite((3, 1, 1)))
    if budget >= 8:
        bases.append(CompleteBipartite(2, 4))
    if budget >= 12:
        bases += [
            CompleteBipartite(2, 6),
            CompleteBipartiteMinusC4(4, 4),
            K5PlusM(2),
            CompleteMultipartite((2, 2, 2)),
        ]
    if budget >= 16:
        bases.append(CompleteBipartite(4, 4))
    bases += [b for b in _explicit_bases() if len(b.edges) <= budget]
    if not any(_edge_count(b) <= budget for b in bases):
        raise PreconditionError(f"budget {budget} admits no base graph")
    bases = [b for b in bases if _edge_count(b) <= budget]

    def grow(r: Recipe, depth: int) -> Recipe:
        if depth <= 0:
            return r
        for _ in range(6):
            kind = rng.randrange(7)
            cand = _try_grow(rng, r, kind, budget)
            if cand is not None and validate_recipe(cand).ok:
                return grow(cand, depth - 1)
        return r

    root = _pick(rng, bases)
    return grow(root, rng.randrange(1, 4))


def _edge_count(r: Recipe) -> int:
    return len(_build_block(r).edges)


def _try_grow(rng: random.Random, r: Recipe, kind: int, budget: int) -> Recipe | None:
    g = _graph_of(r)
    n_vertices = len(g.vertices)
    n_edges = len(g.edges)
    if kind == 0:  # odd expansion
        pivots = [v for v in g.vertices if g.degree(v) > 0]
        if not pivots or not g.is_simple():
            return None
        v = _pick(rng, sorted(pivots))
        s = _pick(rng, [3, 5])
        cand = OddExpansion(r, v, s)
        return cand if _edge_count(cand) <= budget else None
    if kind == 1:  # apex addition
        if n_vertices % 2 or not g.is_simple():
            return None
        k = _pick(rng, [2, 4])
        cand = Apex(r, k)
        return cand if _edge_count(cand) <= budget else None
    if kind == 2:  # join with K2
        if n_vertices % 2 == 0 or not g.is_simple():
            return None
        cand = CliqueJoinK2(r)
        return cand if _edge_count(cand) <= budget else None
    if kind == 3:  # substitute a vertex of r by a small graph
        pivots = [v for v in g.vertices if g.degree(v) > 0]
        if not pivots or not g.is_simple():
            return None
        v = _pick(rng, sorted(pivots))
        h = _pick(rng, [OddClique(3), OddClique(1), CompleteMultipartite((3, 1, 1))])
        cand = Substitute(r, v, h)
        return cand if _edge_count(cand) <= budget else None
    if kind == 4:  # twin substitution, if r has twins
        if not g.is_simple():
            return None
        twins = []
        nbr = {
            v: frozenset(g.edge(e).other(v) for e in g.incident(v)) for v in g.vertices
        }
        for u, v in itertools.combinations(sorted(g.vertices), 2):
            if v not in nbr[u] and nbr[u] == nbr[v] and nbr[u]:
                twins.append((u, v))
        if not twins:
            return None
        pair = _pick(rng, twins)
        h = _pick(rng, [CompleteBipartite(2, 2), CompleteMultipartite((2, 2))])
        cand = TwinSubstitute(r, pair, h)
        return cand if _edge_count(cand) <= budget else None
    if kind == 5:  # join with a small edgeless or tiny side
        if n_vertices % 2:
            return None
        side = _pick(rng, [
            (OddClique(1), OddClique(1)),
            (OddClique(1), OddClique(1), OddClique(1), OddClique(1)),
            (OddClique(3), OddClique(1)),
        ])
        cand = Join((r,), tuple(side))
        return cand if _edge_count(cand) <= budget else None
    if kind == 6:  # subdivide, keeping the edge total even
        lengths = {}
        flip = []
        for e in g.edge_ids():
            n = _pick(rng, [1, 1, 2])
            lengths[e] = n
            flip.append(e)
        extra = sum(lengths.values())
        if extra % 2:
            lengths[_pick(rng, sorted(flip))] += 1
        cand = Subdivide.of(r, lengths)
        return cand if _edge_count(cand) <= budget else None
    return None
