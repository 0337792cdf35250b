"""Signed multigraphs and the signature algebra they carry.

A signed multigraph is a loopless multigraph whose edges are each labelled
"even" or "odd"; the set of odd edges is the signature.  Two signatures are
equivalent when their symmetric difference is a cut, and equivalent signatures
have exactly the same set of even cycles, which is why certificates produced
for one signature remain valid for every equivalent one.

This module holds the graph type, cuts and re-signing, equivalence testing,
canonical signature representatives, vertex/cycle parities, the subdivision
correspondence, and validation of cycle-decomposition certificates.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

EVEN = "even"
ODD = "odd"

SIGNS = (EVEN, ODD)


class EvcycError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(EvcycError):
    """Malformed graph, unknown vertex/edge id, or bad signature domain."""


class NotACycleError(EvcycError):
    """An edge-id sequence does not describe a simple cycle."""


class BoundExceededError(EvcycError):
    """An instance is larger than the configured search bound."""


class PreconditionError(EvcycError):
    """An operation was invoked outside its stated preconditions."""


class InternalError(EvcycError):
    """A constructed certificate failed its own postcondition; always a bug."""


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    sign: str = EVEN

    def other(self, vertex: str) -> str:
        if vertex == self.u:
            return self.v
        if vertex == self.v:
            return self.u
        raise GraphError(f"vertex {vertex!r} is not an endpoint of edge {self.id!r}")


class SignedMultigraph:
    """Loopless multigraph with an even/odd sign per edge.

    Vertices and edges keep their construction order; parallel edges are
    allowed and carry independent signs.  Instances are immutable: operations
    that change signs return new graphs sharing nothing mutable.
    """

    __slots__ = ("vertices", "edges", "_by_id", "_incident")

    def __init__(self, vertices: Iterable[str], edges: Iterable[Edge | tuple]):
        vs = tuple(str(v) for v in vertices)
        if len(set(vs)) != len(vs):
            raise GraphError("duplicate vertex ids")
        vset = set(vs)
        es = []
        for e in edges:
            if not isinstance(e, Edge):
                e = Edge(*e)
            if e.u == e.v:
                raise GraphError(f"edge {e.id!r} is a loop")
            if e.u not in vset or e.v not in vset:
                raise GraphError(f"edge {e.id!r} has an endpoint outside the vertex list")
            if e.sign not in SIGNS:
                raise GraphError(f"edge {e.id!r} has sign {e.sign!r}, expected 'even' or 'odd'")
            es.append(e)
        by_id = {e.id: e for e in es}
        if len(by_id) != len(es):
            raise GraphError("duplicate edge ids")
        incident: dict[str, list[str]] = {v: [] for v in vs}
        for e in es:
            incident[e.u].append(e.id)
            incident[e.v].append(e.id)
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", tuple(es))
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_incident", {v: tuple(ids) for v, ids in incident.items()})

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("SignedMultigraph is immutable")

    def edge(self, eid: str) -> Edge:
        try:
            return self._by_id[eid]
        except KeyError:
            raise GraphError(f"unknown edge id {eid!r}") from None

    def has_vertex(self, v: str) -> bool:
        return v in self._incident

    def incident(self, v: str) -> tuple[str, ...]:
        try:
            return self._incident[v]
        except KeyError:
            raise GraphError(f"unknown vertex id {v!r}") from None

    def degree(self, v: str) -> int:
        return len(self.incident(v))

    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    def odd_edges(self) -> frozenset[str]:
        return frozenset(e.id for e in self.edges if e.sign == ODD)

    def endpoints(self, eid: str) -> tuple[str, str]:
        e = self.edge(eid)
        return e.u, e.v

    def with_signature(self, odd: Iterable[str]) -> "SignedMultigraph":
        odd_set = frozenset(odd)
        unknown = odd_set - set(self._by_id)
        if unknown:
            raise GraphError(f"signature mentions unknown edge ids: {sorted(unknown)}")
        es = [Edge(e.id, e.u, e.v, ODD if e.id in odd_set else EVEN) for e in self.edges]
        return SignedMultigraph(self.vertices, es)

    def is_simple(self) -> bool:
        seen = set()
        for e in self.edges:
            key = frozenset((e.u, e.v))
            if key in seen:
                return False
            seen.add(key)
        return True

    def __eq__(self, other):
        return (
            isinstance(other, SignedMultigraph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def __repr__(self):
        return f"SignedMultigraph({len(self.vertices)} vertices, {len(self.edges)} edges)"


@dataclass(frozen=True)
class Cut:
    """A vertex subset together with the edge set it induces."""

    members: frozenset[str]
    edges: frozenset[str]


@dataclass(frozen=True)
class CycleDecomposition:
    """Partition of the edge set into simple cycles, given by edge ids.

    odd_cycle_index flags the single odd cycle of an almost-decomposition;
    None means every cycle must be even.
    """

    cycles: tuple[tuple[str, ...], ...]
    odd_cycle_index: int | None = None

    def to_json(self) -> dict:
        return {
            "cycles": [list(c) for c in self.cycles],
            "odd_cycle_index": self.odd_cycle_index,
        }

    @staticmethod
    def from_json(data) -> "CycleDecomposition":
        if not isinstance(data, dict) or "cycles" not in data:
            raise GraphError("certificate JSON must be an object with a 'cycles' list")
        cycles = data["cycles"]
        if not isinstance(cycles, list) or not all(isinstance(c, list) for c in cycles):
            raise GraphError("'cycles' must be a list of edge-id lists")
        idx = data.get("odd_cycle_index")
        if idx is not None and not isinstance(idx, int):
            raise GraphError("'odd_cycle_index' must be null or an integer")
        return CycleDecomposition(tuple(tuple(str(e) for e in c) for c in cycles), idx)


@dataclass(frozen=True)
class SignatureClass:
    """Canonical representative of a signature up to re-signing equivalence.

    The representative is the unique equivalent signature disjoint from the
    graph's canonical spanning forest.
    """

    graph: SignedMultigraph = field(compare=False)
    representative: frozenset[str]

    @property
    def size_parity(self) -> str:
        return ODD if len(self.representative) % 2 else EVEN


@dataclass(frozen=True)
class SubdivisionProfile:
    """Edge-length assignment; length parity induces the sign on the base edge."""

    lengths: Mapping[str, int]

    def induced_signature(self) -> frozenset[str]:
        return frozenset(e for e, n in self.lengths.items() if n % 2 == 1)


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    reason: str | None = None
    cycle_index: int | None = None

    def __bool__(self):
        return self.ok


# ---------------------------------------------------------------------------
# parity and cut algebra
# ---------------------------------------------------------------------------


def vertex_parity(g: SignedMultigraph, v: str) -> str:
    """Parity of the number of odd edges incident with v."""
    count = sum(1 for eid in g.incident(v) if g.edge(eid).sign == ODD)
    return ODD if count % 2 else EVEN


def is_eulerian(g: SignedMultigraph) -> bool:
    """True iff every vertex has even degree; connectivity is not required."""
    return all(len(g.incident(v)) % 2 == 0 for v in g.vertices)


def cut(g: SignedMultigraph, members: Iterable[str]) -> Cut:
    """The cut induced by a vertex subset: edges with exactly one end inside."""
    mset = frozenset(members)
    for v in mset:
        if not g.has_vertex(v):
            raise GraphError(f"unknown vertex id {v!r}")
    edges = frozenset(e.id for e in g.edges if (e.u in mset) != (e.v in mset))
    return Cut(mset, edges)


def resign(g: SignedMultigraph, members: Iterable[str]) -> SignedMultigraph:
    """Flip the signs on the cut induced by the given vertex subset."""
    flipped = cut(g, members).edges
    return g.with_signature(g.odd_edges() ^ flipped)


def spanning_forest(g: SignedMultigraph) -> tuple[str, ...]:
    """Canonical spanning forest: BFS from the smallest vertex id of each
    component, scanning incident edges in edge-id order."""
    visited: set[str] = set()
    tree: list[str] = []
    for root in sorted(g.vertices):
        if root in visited:
            continue
        visited.add(root)
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for eid in sorted(g.incident(v)):
                w = g.edge(eid).other(v)
                if w not in visited:
                    visited.add(w)
                    tree.append(eid)
                    queue.append(w)
    return tuple(tree)


def clear_forest(
    vertices: Iterable[str],
    edges: Mapping[str, tuple[str, str]],
    odd: frozenset[str],
    forest: Iterable[str],
) -> frozenset[str]:
    """Re-sign so that no forest edge is odd; returns the equivalent signature.

    Works on a bare adjacency view so the decomposer can reuse it on subgraph
    slices.  `forest` must be acyclic within `edges`.
    """
    adj: dict[str, list[str]] = {v: [] for v in vertices}
    forest_set = set(forest)
    for eid in forest_set:
        u, v = edges[eid]
        adj[u].append(eid)
        adj[v].append(eid)
    color: dict[str, int] = {}
    for root in sorted(adj):
        if root in color:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for eid in adj[x]:
                u, v = edges[eid]
                y = v if x == u else u
                if y not in color:
                    color[y] = color[x] ^ (1 if eid in odd else 0)
                    queue.append(y)
    flip = frozenset(
        eid
        for eid, (u, v) in edges.items()
        if color.get(u, 0) != color.get(v, 0)
    )
    return odd ^ flip


def normalize_signature(g: SignedMultigraph) -> tuple[SignedMultigraph, SignatureClass]:
    """Re-sign to the canonical representative avoiding the spanning forest.

    Idempotent; two signatures are equivalent iff they normalize to the same
    representative.
    """
    forest = spanning_forest(g)
    edges = {e.id: (e.u, e.v) for e in g.edges}
    rep = clear_forest(g.vertices, edges, g.odd_edges(), forest)
    out = g.with_signature(rep)
    return out, SignatureClass(out, rep)


def _signature_from(g: SignedMultigraph, sigma) -> frozenset[str]:
    """Accept a full edge->sign mapping or a bare odd-edge collection."""
    ids = set(g.edge_ids())
    if isinstance(sigma, Mapping):
        if set(sigma) != ids:
            raise GraphError("signature domain does not match the edge set")
        bad = [e for e, s in sigma.items() if s not in SIGNS]
        if bad:
            raise GraphError(f"bad sign values for edges: {sorted(bad)}")
        return frozenset(e for e, s in sigma.items() if s == ODD)
    odd = frozenset(sigma)
    if not odd <= ids:
        raise GraphError(f"signature mentions unknown edge ids: {sorted(odd - ids)}")
    return odd


def is_cut(g: SignedMultigraph, delta: Iterable[str]) -> bool:
    """True iff the edge set is δ(X) for some vertex subset X.

    Decided by 2-coloring each component: delta edges must cross, all other
    edges must not.
    """
    dset = frozenset(delta)
    color: dict[str, int] = {}
    for root in g.vertices:
        if root in color:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for eid in g.incident(x):
                y = g.edge(eid).other(x)
                want = color[x] ^ (1 if eid in dset else 0)
                if y not in color:
                    color[y] = want
                    queue.append(y)
                elif color[y] != want:
                    return False
    return True


def is_equivalent(g: SignedMultigraph, sigma2) -> bool:
    """True iff g's signature and sigma2 differ by a cut."""
    delta = g.odd_edges() ^ _signature_from(g, sigma2)
    return is_cut(g, delta)


# ---------------------------------------------------------------------------
# cycles and certificates
# ---------------------------------------------------------------------------


def walk_cycle(g: SignedMultigraph, edge_ids: Iterable[str]) -> list[str]:
    """Vertex sequence of a simple cycle given as an edge-id list.

    Raises NotACycleError unless the edges form a closed walk of length >= 2
    with consecutive edges sharing an endpoint and no repeated vertex.
    2-cycles through parallel edges are allowed.
    """
    ids = list(edge_ids)
    if len(ids) < 2:
        raise NotACycleError("a cycle needs at least 2 edges")
    if len(set(ids)) != len(ids):
        raise NotACycleError("repeated edge id in cycle")
    edges = [g.edge(eid) for eid in ids]
    if len(ids) == 2:
        a, b = edges
        if frozenset((a.u, a.v)) != frozenset((b.u, b.v)):
            raise NotACycleError("a 2-cycle needs two parallel edges")
        return [a.u, a.v]
    first = {edges[0].u, edges[0].v}
    second = {edges[1].u, edges[1].v}
    shared = first & second
    if len(shared) != 1:
        raise NotACycleError("consecutive edges must share exactly one vertex")
    v1 = shared.pop()
    seq = [edges[0].other(v1), v1]
    for e in edges[1:-1]:
        nxt = e.other(seq[-1])
        seq.append(nxt)
    last = edges[-1]
    if {last.u, last.v} != {seq[-1], seq[0]}:
        raise NotACycleError("cycle does not close up")
    if len(set(seq)) != len(seq):
        raise NotACycleError("cycle revisits a vertex")
    return seq


def cycle_parity(g: SignedMultigraph, cycle: Iterable[str]) -> str:
    """Parity of the number of odd edges on a simple cycle."""
    ids = list(cycle)
    walk_cycle(g, ids)
    count = sum(1 for eid in ids if g.edge(eid).sign == ODD)
    return ODD if count % 2 else EVEN


def validate_certificate(g: SignedMultigraph, d: CycleDecomposition) -> CertificateCheck:
    """Check a decomposition certificate against its host graph.

    Verifies that the cycles partition the edge set, that each is a simple
    cycle, and that parities match the odd-cycle flag.  The first violation
    found is reported; violations are results, not exceptions.
    """
    all_ids = set(g.edge_ids())
    seen: set[str] = set()
    for i, c in enumerate(d.cycles):
        for eid in c:
            if eid not in all_ids:
                return CertificateCheck(False, f"unknown edge id {eid!r}", i)
            if eid in seen:
                return CertificateCheck(False, f"edge {eid!r} used twice: not a partition", i)
            seen.add(eid)
    missing = all_ids - seen
    if missing:
        return CertificateCheck(False, f"edges not covered: {sorted(missing)[:4]}: not a partition")
    for i, c in enumerate(d.cycles):
        try:
            walk_cycle(g, c)
        except NotACycleError as exc:
            return CertificateCheck(False, f"not a simple cycle: {exc}", i)
    if d.odd_cycle_index is not None and not (0 <= d.odd_cycle_index < len(d.cycles)):
        return CertificateCheck(False, "odd_cycle_index out of range")
    for i, c in enumerate(d.cycles):
        parity = cycle_parity(g, c)
        want = ODD if i == d.odd_cycle_index else EVEN
        if parity != want:
            return CertificateCheck(False, f"cycle has {parity} parity, expected {want}", i)
    return CertificateCheck(True)


# ---------------------------------------------------------------------------
# subdivision correspondence
# ---------------------------------------------------------------------------


def subdivide(
    g: SignedMultigraph, profile: SubdivisionProfile | Mapping[str, int]
) -> tuple[SignedMultigraph, frozenset[str]]:
    """Replace each edge by a path of the given length.

    Returns the subdivided graph (all signs even; it is an unsigned object)
    together with the signature induced on g: an edge is odd iff its path has
    odd length.  Fresh vertices are named "<edge>:s<i>" and path edges
    "<edge>:p<i>".
    """
    lengths = profile.lengths if isinstance(profile, SubdivisionProfile) else profile
    ids = set(g.edge_ids())
    if set(lengths) != ids:
        raise GraphError("profile domain does not match the edge set")
    for eid, n in lengths.items():
        if not isinstance(n, int) or n < 1:
            raise GraphError(f"length of edge {eid!r} must be an integer >= 1")
    vertices = list(g.vertices)
    edges: list[Edge] = []
    for e in g.edges:
        n = lengths[e.id]
        if n == 1:
            edges.append(Edge(e.id, e.u, e.v, EVEN))
            continue
        chain = [e.u] + [f"{e.id}:s{i}" for i in range(1, n)] + [e.v]
        vertices.extend(chain[1:-1])
        for i in range(n):
            edges.append(Edge(f"{e.id}:p{i}", chain[i], chain[i + 1], EVEN))
    induced = frozenset(eid for eid, n in lengths.items() if n % 2 == 1)
    return SignedMultigraph(vertices, edges), induced


def subdivision_paths(
    g: SignedMultigraph, profile: SubdivisionProfile | Mapping[str, int]
) -> dict[str, list[str]]:
    """Edge-id lists of the subdivision paths, oriented from e.u to e.v."""
    lengths = profile.lengths if isinstance(profile, SubdivisionProfile) else profile
    paths = {}
    for e in g.edges:
        n = lengths[e.id]
        paths[e.id] = [e.id] if n == 1 else [f"{e.id}:p{i}" for i in range(n)]
    return paths


def lift_certificate(
    g: SignedMultigraph,
    profile: SubdivisionProfile | Mapping[str, int],
    d: CycleDecomposition,
) -> CycleDecomposition:
    """Map a certificate on (g, induced signature) to one on the subdivision.

    The input must validate with no odd cycle against the induced signature;
    every lifted cycle then has even length.
    """
    lengths = profile.lengths if isinstance(profile, SubdivisionProfile) else profile
    _, induced = subdivide(g, lengths)
    if d.odd_cycle_index is not None:
        raise PreconditionError("lifting is defined only for all-even certificates")
    check = validate_certificate(g.with_signature(induced), d)
    if not check.ok:
        raise PreconditionError(f"certificate invalid against induced signature: {check.reason}")
    paths = subdivision_paths(g, lengths)
    lifted = []
    for c in d.cycles:
        seq = walk_cycle(g, c)
        out: list[str] = []
        for i, eid in enumerate(c):
            tail = seq[i]
            e = g.edge(eid)
            piece = paths[eid]
            out.extend(piece if e.u == tail else list(reversed(piece)))
        lifted.append(tuple(out))
    return CycleDecomposition(tuple(lifted), None)


# ---------------------------------------------------------------------------
# JSON formats (bit-exact contracts shared with the CLI)
# ---------------------------------------------------------------------------


def graph_to_json(g: SignedMultigraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [{"id": e.id, "u": e.u, "v": e.v, "sign": e.sign} for e in g.edges],
    }


def graph_from_json(data) -> SignedMultigraph:
    if not isinstance(data, dict) or "vertices" not in data or "edges" not in data:
        raise GraphError("graph JSON must be an object with 'vertices' and 'edges'")
    if not isinstance(data["vertices"], list):
        raise GraphError("'vertices' must be a list")
    edges = []
    for rec in data["edges"]:
        if not isinstance(rec, dict) or not {"id", "u", "v", "sign"} <= set(rec):
            raise GraphError("each edge needs 'id', 'u', 'v' and 'sign' fields")
        edges.append(Edge(str(rec["id"]), str(rec["u"]), str(rec["v"]), rec["sign"]))
    return SignedMultigraph([str(v) for v in data["vertices"]], edges)


def signature_to_json(odd: Iterable[str]) -> dict:
    return {"odd_edges": sorted(odd)}


def signature_from_json(data, g: SignedMultigraph | None = None) -> frozenset[str]:
    if isinstance(data, dict) and "odd_edges" in data:
        data = data["odd_edges"]
    if not isinstance(data, list):
        raise GraphError("signature JSON must be a list of edge ids or {'odd_edges': [...]}")
    odd = frozenset(str(e) for e in data)
    if g is not None:
        unknown = odd - set(g.edge_ids())
        if unknown:
            raise GraphError(f"signature mentions unknown edge ids: {sorted(unknown)}")
    return odd


def iter_components(g: SignedMultigraph) -> Iterator[frozenset[str]]:
    """Vertex sets of connected components, in order of smallest vertex."""
    seen: set[str] = set()
    for root in sorted(g.vertices):
        if root in seen:
            continue
        comp = {root}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for eid in g.incident(x):
                y = g.edge(eid).other(x)
                if y not in comp:
                    comp.add(y)
                    queue.append(y)
        seen |= comp
        yield frozenset(comp)


def cycle_space_dimension(g: SignedMultigraph) -> int:
    """|E| - |V| + number of components; log2 of the signature-class count."""
    return len(g.edges) - len(g.vertices) + sum(1 for _ in iter_components(g))
