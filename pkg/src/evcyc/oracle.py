"""Small-scale ground truth by exhaustive search.

Everything here is independent of the constructive decomposer: cycles are
enumerated by depth-first search, decompositions are found by exact-cover
backtracking over the even cycles, and strong decomposability is decided by
sweeping one representative per signature equivalence class.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator

from .core import (
    EVEN,
    ODD,
    BoundExceededError,
    CycleDecomposition,
    PreconditionError,
    SignatureClass,
    SignedMultigraph,
    is_eulerian,
    cycle_space_dimension,
    spanning_forest,
)

DEFAULT_MAX_EDGES = 24
DEFAULT_MAX_DIM = 20


def max_edge_bound() -> int:
    """Default edge bound, overridable through EVCYC_MAX_EDGES."""
    raw = os.environ.get("EVCYC_MAX_EDGES")
    if raw is None:
        return DEFAULT_MAX_EDGES
    try:
        return int(raw)
    except ValueError:
        raise BoundExceededError(f"EVCYC_MAX_EDGES={raw!r} is not an integer") from None


@dataclass(frozen=True)
class CycleCatalog:
    """Every simple cycle of the host graph, in a deterministic order."""

    graph: SignedMultigraph
    cycles: tuple[tuple[str, ...], ...]
    parities: tuple[str, ...]

    def __len__(self):
        return len(self.cycles)

    def even_cycles(self, odd: frozenset[str] | None = None) -> list[tuple[str, ...]]:
        """Cycles that are even under the given signature (default: the host's)."""
        if odd is None:
            return [c for c, p in zip(self.cycles, self.parities) if p == EVEN]
        return [c for c in self.cycles if sum(1 for e in c if e in odd) % 2 == 0]


def _cycle_order(g: SignedMultigraph, edge_set: frozenset[str]) -> tuple[str, ...]:
    """Canonical cyclic edge order: start at the smallest edge id, walk toward
    the smaller of the two possible second edges."""
    ids = sorted(edge_set)
    if len(ids) == 2:
        return tuple(ids)
    start = ids[0]
    incident: dict[str, list[str]] = {}
    for eid in ids:
        u, v = g.endpoints(eid)
        incident.setdefault(u, []).append(eid)
        incident.setdefault(v, []).append(eid)
    e0 = g.edge(start)
    nexts = sorted(
        (eid, v)
        for v in (e0.u, e0.v)
        for eid in incident[v]
        if eid != start
    )
    order = [start]
    eid, at = nexts[0]
    # walked into `at` via start; continue until back to start
    while eid != start:
        order.append(eid)
        at = g.edge(eid).other(at)
        eid = next(x for x in incident[at] if x != eid)
    return tuple(order)


def enumerate_cycles(g: SignedMultigraph, max_edges: int | None = None) -> CycleCatalog:
    """All simple cycles of g, including 2-cycles through parallel edges.

    Cycles are anchored at their smallest vertex (in sorted order) so each is
    found a bounded number of times, deduplicated by edge set, and finally
    sorted lexicographically by their sorted edge-id tuples.
    """
    bound = max_edges if max_edges is not None else max_edge_bound()
    if len(g.edges) > bound:
        raise BoundExceededError(f"{len(g.edges)} edges exceeds the bound of {bound}")
    rank = {v: i for i, v in enumerate(sorted(g.vertices))}
    found: set[frozenset[str]] = set()
    path_edges: list[str] = []

    def extend(anchor: str, at: str, used_vertices: set[str]):
        for eid in g.incident(at):
            w = g.edge(eid).other(at)
            if rank[w] < rank[anchor] or eid in path_set:
                continue
            if w == anchor:
                if len(path_edges) >= 1:
                    found.add(frozenset(path_edges + [eid]))
                continue
            if w in used_vertices:
                continue
            path_edges.append(eid)
            path_set.add(eid)
            used_vertices.add(w)
            extend(anchor, w, used_vertices)
            used_vertices.remove(w)
            path_set.remove(eid)
            path_edges.pop()

    for anchor in sorted(g.vertices, key=rank.get):
        path_set: set[str] = set()
        extend(anchor, anchor, {anchor})

    ordered_sets = sorted(found, key=lambda s: tuple(sorted(s)))
    cycles = tuple(_cycle_order(g, s) for s in ordered_sets)
    odd = g.odd_edges()
    parities = tuple(
        ODD if sum(1 for e in c if e in odd) % 2 else EVEN for c in cycles
    )
    return CycleCatalog(g, cycles, parities)


def exact_cover(
    universe: list[str], candidates: list[frozenset[str]]
) -> list[int] | None:
    """First exact cover of the universe by the candidate sets, if any.

    Deterministic: branches on the lowest-indexed uncovered element and tries
    candidates in list order.  Returns candidate indices.
    """
    index = {x: i for i, x in enumerate(universe)}
    n = len(universe)
    full = (1 << n) - 1
    masks = []
    for cand in candidates:
        m = 0
        for x in cand:
            m |= 1 << index[x]
        masks.append(m)
    by_element: list[list[int]] = [[] for _ in range(n)]
    for ci, m in enumerate(masks):
        for b in range(n):
            if m >> b & 1:
                by_element[b].append(ci)

    chosen: list[int] = []

    def search(covered: int) -> bool:
        if covered == full:
            return True
        free = ~covered & full
        b = (free & -free).bit_length() - 1
        for ci in by_element[b]:
            if masks[ci] & covered:
                continue
            chosen.append(ci)
            if search(covered | masks[ci]):
                return True
            chosen.pop()
        return False

    return chosen if search(0) else None


def oracle_decompose(
    g: SignedMultigraph, max_edges: int | None = None
) -> CycleDecomposition | None:
    """Partition the edges into even cycles by exhaustive search, or None.

    None is returned only after the exact-cover search space is exhausted, so
    it certifies non-decomposability at this size.
    """
    if not g.edges:
        return CycleDecomposition(())
    catalog = enumerate_cycles(g, max_edges)
    even = catalog.even_cycles()
    universe = sorted(g.edge_ids())
    picked = exact_cover(universe, [frozenset(c) for c in even])
    if picked is None:
        return None
    return CycleDecomposition(tuple(even[i] for i in picked))


def enumerate_signature_classes(
    g: SignedMultigraph,
    parity_filter: str | None = None,
    max_dim: int = DEFAULT_MAX_DIM,
) -> Iterator[SignatureClass]:
    """One canonical representative per signature equivalence class.

    Representatives are exactly the subsets of the non-forest edges, emitted
    in lexicographic order of their sorted edge-id tuples.  The parity filter
    requires an Eulerian host, where |signature| mod 2 is a class invariant.
    """
    dim = cycle_space_dimension(g)
    if dim > max_dim:
        raise BoundExceededError(f"cycle space dimension {dim} exceeds the bound of {max_dim}")
    if parity_filter is not None:
        if parity_filter not in (EVEN, ODD):
            raise PreconditionError("parity filter must be 'even' or 'odd'")
        if not is_eulerian(g):
            raise PreconditionError("parity filter requires an Eulerian graph")
    free = sorted(set(g.edge_ids()) - set(spanning_forest(g)))
    assert len(free) == dim

    def subsets(prefix: list[str], rest: list[str]) -> Iterator[frozenset[str]]:
        yield frozenset(prefix)
        for i, e in enumerate(rest):
            yield from subsets(prefix + [e], rest[i + 1 :])

    for rep in subsets([], free):
        if parity_filter is not None:
            parity = ODD if len(rep) % 2 else EVEN
            if parity != parity_filter:
                continue
        yield SignatureClass(g.with_signature(rep), rep)


def _class_decomposable(
    universe: list[str], cycles: tuple[tuple[str, ...], ...], rep: frozenset[str]
) -> bool:
    # module-level so the parallel sweep can pickle it
    even = [frozenset(c) for c in cycles if sum(1 for e in c if e in rep) % 2 == 0]
    return exact_cover(universe, even) is not None


@dataclass(frozen=True)
class StrongEcdReport:
    """Outcome of sweeping every even-size signature class of a graph."""

    verdict: str  # "strongly-decomposable" | "not"
    witness: SignatureClass | None
    classes_total: int
    classes_even: int

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": None
            if self.witness is None
            else {"odd_edges": sorted(self.witness.representative)},
            "classes_total": self.classes_total,
            "classes_even": self.classes_even,
        }


def oracle_is_strongly_ecd(
    g: SignedMultigraph,
    max_edges: int | None = None,
    max_dim: int = DEFAULT_MAX_DIM,
    jobs: int = 1,
) -> StrongEcdReport:
    """Sweep all even-parity signature classes of an Eulerian graph.

    Strongly decomposable iff every class admits an even-cycle decomposition;
    otherwise the lexicographically first failing class is the witness.  The
    cycle catalog is computed once and re-filtered per class.
    """
    if not is_eulerian(g):
        raise PreconditionError("the graph is not Eulerian")
    catalog = enumerate_cycles(g, max_edges)
    universe = sorted(g.edge_ids())
    classes = list(enumerate_signature_classes(g, None, max_dim))
    even_classes = [c for c in classes if c.size_parity == EVEN]
    witness = None
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        from functools import partial

        work = partial(_class_decomposable, universe, catalog.cycles)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            verdicts = list(pool.map(work, [c.representative for c in even_classes]))
        for cls, ok in zip(even_classes, verdicts):
            if not ok:
                witness = cls
                break
    else:
        for cls in even_classes:
            if not _class_decomposable(universe, catalog.cycles, cls.representative):
                witness = cls
                break
    return StrongEcdReport(
        verdict="strongly-decomposable" if witness is None else "not",
        witness=witness,
        classes_total=len(classes),
        classes_even=len(even_classes),
    )
