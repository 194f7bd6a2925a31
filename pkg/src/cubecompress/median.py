"""Median graphs and their hyperplane structure.

A finite CAT(0) cube complex is determined by its 1-skeleton, which is a
median graph: a connected graph in which every vertex triple (u, v, w) has
exactly one vertex lying simultaneously on shortest paths between each of
the three pairs.  Everything downstream (cubes, hyperplanes, embeddings)
is computed from that graph alone.

Hyperplanes are equivalence classes of edges under the transitive closure
of "opposite sides of a 4-cycle".  Each class cuts the graph into exactly
two half-spaces, and the edge metric d1 counts the classes separating two
vertices.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    DisconnectedGraph,
    DuplicateEdge,
    HalfspaceViolation,
    LoopEdge,
    MedianViolation,
)

__all__ = [
    "MedianGraph",
    "HyperplaneSet",
    "ValidationReport",
    "build_graph",
    "validate_median",
    "compute_hyperplanes",
    "separates",
    "separating_set",
    "separation_count",
    "d1",
    "bfs_distances",
    "bfs_parents",
    "interval",
    "median",
    "dimension",
]

# Full two-component flood verification of every hyperplane is skipped when
# classes * (vertices + 2*edges) exceeds this budget; the per-edge crossing
# consistency check below still runs in that case.
_FULL_HALFSPACE_CHECK_BUDGET = 12_000_000


class MedianGraph:
    """A simple connected graph on vertices 0..vertex_count-1.

    Instances are immutable after construction; build them with
    :func:`build_graph`.  Edges are stored normalized as (min, max) in
    input order, and that order fixes edge ids everywhere else.
    """

    __slots__ = ("vertex_count", "edges", "adjacency", "_edge_index",
                 "_adj_sets", "_dimension")

    def __init__(self, vertex_count, edges, adjacency, edge_index, adj_sets):
        self.vertex_count = vertex_count
        self.edges = edges
        self.adjacency = adjacency
        self._edge_index = edge_index
        self._adj_sets = adj_sets
        self._dimension = None

    @property
    def edge_count(self):
        return len(self.edges)

    def degree(self, u):
        return len(self.adjacency[u])

    def edge_id(self, u, v):
        """Id of the edge {u, v}, or KeyError if absent."""
        return self._edge_index[(u, v) if u < v else (v, u)]

    def has_edge(self, u, v):
        return v in self._adj_sets[u]

    def __repr__(self):
        return f"MedianGraph({self.vertex_count} vertices, {len(self.edges)} edges)"


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a median check.

    failure_witness is a vertex triple with zero or at least two medians;
    it is present exactly when passed is False.  checks_run records what
    was actually examined (mode, triple count, bipartite outcome).
    """

    passed: bool
    failure_witness: Optional[tuple]
    checks_run: dict


def build_graph(vertex_count: int, edges: Iterable[Sequence[int]]) -> MedianGraph:
    """Construct a MedianGraph after structural checks.

    Raises LoopEdge, DuplicateEdge or DisconnectedGraph.  Endpoints out of
    range raise ValueError.  Median-ness is not checked here; see
    :func:`validate_median`.
    """
    if vertex_count < 1:
        raise ValueError("vertex_count must be at least 1")
    norm = []
    index = {}
    adjacency = [[] for _ in range(vertex_count)]
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise ValueError(f"edge ({u}, {v}) out of range for {vertex_count} vertices")
        if u == v:
            raise LoopEdge(f"loop at vertex {u}")
        key = (u, v) if u < v else (v, u)
        if key in index:
            raise DuplicateEdge(f"edge {key} repeated")
        index[key] = len(norm)
        norm.append(key)
        adjacency[u].append(v)
        adjacency[v].append(u)

    adjacency = tuple(tuple(sorted(nbrs)) for nbrs in adjacency)
    adj_sets = tuple(frozenset(nbrs) for nbrs in adjacency)
    g = MedianGraph(vertex_count, tuple(norm), adjacency, index, adj_sets)

    seen = _bfs_reach(g, 0)
    if len(seen) != vertex_count:
        missing = next(v for v in range(vertex_count) if v not in seen)
        raise DisconnectedGraph(
            f"vertex {missing} unreachable from vertex 0")
    return g


def _bfs_reach(g, source):
    seen = {source}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def bfs_distances(g: MedianGraph, source: int) -> np.ndarray:
    """Distances from source to every vertex, as an int32 array."""
    dist = np.full(g.vertex_count, -1, dtype=np.int32)
    dist[source] = 0
    queue = deque([source])
    adjacency = g.adjacency
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in adjacency[u]:
            if dist[w] < 0:
                dist[w] = du
                queue.append(w)
    return dist


def bfs_parents(g: MedianGraph, source: int) -> list:
    """BFS tree parents from source (parent[source] = -1).

    Neighbors are scanned in sorted order, so the tree, and any geodesic
    recovered by walking parents, is deterministic.
    """
    parent = [-2] * g.vertex_count
    parent[source] = -1
    queue = deque([source])
    adjacency = g.adjacency
    while queue:
        u = queue.popleft()
        for w in adjacency[u]:
            if parent[w] == -2:
                parent[w] = u
                queue.append(w)
    return parent


def d1(g: MedianGraph, u: int, v: int) -> int:
    """Shortest-path (edge metric) distance via BFS with early exit."""
    if u == v:
        return 0
    dist = {u: 0}
    queue = deque([u])
    adjacency = g.adjacency
    while queue:
        x = queue.popleft()
        dx = dist[x] + 1
        for w in adjacency[x]:
            if w not in dist:
                if w == v:
                    return dx
                dist[w] = dx
                queue.append(w)
    raise DisconnectedGraph(f"no path from {u} to {v}")


def interval(g: MedianGraph, hs, u: int, v: int) -> set:
    """All vertices on some geodesic from u to v (the hs argument is
    accepted for signature symmetry and not needed)."""
    du = bfs_distances(g, u)
    dv = bfs_distances(g, v)
    total = int(du[v])
    return {int(w) for w in np.nonzero(du + dv == total)[0]}


def median(g: MedianGraph, hs, u: int, v: int, w: int) -> int:
    """The unique vertex in interval(u,v) & interval(v,w) & interval(u,w).

    Raises MedianViolation when the intersection does not have exactly one
    element, which certifies the graph is not median.
    """
    du = bfs_distances(g, u)
    dv = bfs_distances(g, v)
    dw = bfs_distances(g, w)
    hits = np.nonzero(
        (du + dv == int(du[v]))
        & (dv + dw == int(dv[w]))
        & (du + dw == int(du[w]))
    )[0]
    if len(hits) != 1:
        raise MedianViolation(
            f"triple ({u}, {v}, {w}) has {len(hits)} medians")
    return int(hits[0])


def _triple_median_count(du, dv, dw, uv, vw, uw):
    return int(np.count_nonzero(
        (du + dv == uv) & (dv + dw == vw) & (du + dw == uw)))


def _bipartite_witness(g):
    """Return None when bipartite, else a triple with zero medians.

    A same-depth edge (u, v) in a BFS tree from the root r gives the
    witness (u, v, r): the interval between adjacent u, v is {u, v} and
    neither endpoint can lie on a geodesic from r to the other because
    their depths agree.
    """
    dist = bfs_distances(g, 0)
    for (u, v) in g.edges:
        if dist[u] == dist[v]:
            return (u, v, 0)
    return None


def validate_median(g: MedianGraph, exhaustive_limit: int = 500,
                    sample_count: int = 10_000, seed: int = 0) -> ValidationReport:
    """Check the unique-median property.

    Bipartiteness is tested first as a cheap rejection.  Triples are then
    checked exhaustively when vertex_count <= exhaustive_limit, otherwise
    sample_count triples are drawn with the given seed.  The triple check
    is the ground truth; everything else in the package presumes it.
    """
    checks = {"bipartite_passed": True, "mode": None, "triples_checked": 0}

    bad = _bipartite_witness(g)
    if bad is not None:
        checks["bipartite_passed"] = False
        checks["mode"] = "bipartite-reject"
        checks["triples_checked"] = 1
        checks["witness_median_count"] = 0
        return ValidationReport(False, bad, checks)

    n = g.vertex_count
    if n <= exhaustive_limit:
        checks["mode"] = "exhaustive"
        witness = _validate_exhaustive(g, checks)
    else:
        checks["mode"] = "sampled"
        witness = _validate_sampled(g, sample_count, seed, checks)
    return ValidationReport(witness is None, witness, checks)


def _validate_exhaustive(g, checks):
    """Scan all vertex triples using bit-parallel interval masks."""
    n = g.vertex_count
    rows = [bfs_distances(g, u) for u in range(n)]

    # masks[u][v] has vertex bit x set iff x is on a geodesic from u to v
    masks = [None] * n
    for u in range(n):
        du = rows[u]
        row_masks = [0] * n
        for v in range(u + 1, n):
            ind = (du + rows[v]) == int(du[v])
            row_masks[v] = int.from_bytes(
                np.packbits(ind, bitorder="little").tobytes(), "little")
        masks[u] = row_masks

    count = 0
    for u in range(n - 2):
        mu = masks[u]
        for v in range(u + 1, n - 1):
            muv = mu[v]
            mv = masks[v]
            for w in range(v + 1, n):
                count += 1
                if (muv & mu[w] & mv[w]).bit_count() != 1:
                    checks["triples_checked"] = count
                    checks["witness_median_count"] = (
                        muv & mu[w] & mv[w]).bit_count()
                    return (u, v, w)
    checks["triples_checked"] = count
    return None


def _validate_sampled(g, sample_count, seed, checks):
    n = g.vertex_count
    rng = random.Random(seed)
    row_cache = {}

    def row(u):
        r = row_cache.get(u)
        if r is None:
            r = bfs_distances(g, u)
            row_cache[u] = r
        return r

    count = 0
    for _ in range(sample_count):
        u = rng.randrange(n)
        v = rng.randrange(n)
        w = rng.randrange(n)
        if u == v or v == w or u == w:
            continue
        du, dv, dw = row(u), row(v), row(w)
        count += 1
        c = _triple_median_count(du, dv, dw, int(du[v]), int(dv[w]), int(du[w]))
        if c != 1:
            checks["triples_checked"] = count
            checks["witness_median_count"] = c
            return (u, v, w)
    checks["triples_checked"] = count
    return None


class _UnionFind:
    """Array union-find with path compression."""

    def __init__(self, size):
        self.parent = list(range(size))

    def find(self, x):
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


class HyperplaneSet:
    """Edge classes of a median graph together with side information.

    side is a (vertex_count, count) boolean array: side[v, h] records
    which half-space of hyperplane h contains v, with vertex 0 on the
    False side of every hyperplane.  signatures[v] packs row v into an
    integer whose bit h equals side[v, h], so separating sets of a vertex
    pair are the set bits of an xor.
    """

    __slots__ = ("graph", "count", "class_of_edge", "hyperplane_edges",
                 "side", "signatures")

    def __init__(self, graph, count, class_of_edge, hyperplane_edges,
                 side, signatures):
        self.graph = graph
        self.count = count
        self.class_of_edge = class_of_edge
        self.hyperplane_edges = hyperplane_edges
        self.side = side
        self.signatures = signatures

    def halfspaces(self, h):
        """The two half-space vertex sets of hyperplane h, the one
        containing vertex 0 first.  Materialized on demand."""
        col = self.side[:, h]
        far = np.nonzero(col)[0]
        near = np.nonzero(~col)[0]
        return (frozenset(int(v) for v in near),
                frozenset(int(v) for v in far))

    def edge_class(self, u, v):
        return self.class_of_edge[self.graph.edge_id(u, v)]

    def incident_classes(self, u):
        """Pairs (neighbor, hyperplane id) over the edges at u."""
        g = self.graph
        return [(w, self.class_of_edge[g.edge_id(u, w)])
                for w in g.adjacency[u]]

    def __repr__(self):
        return f"HyperplaneSet({self.count} hyperplanes)"


def compute_hyperplanes(g: MedianGraph, full_check_budget: int = _FULL_HALFSPACE_CHECK_BUDGET) -> HyperplaneSet:
    """Group edges into hyperplanes and orient their half-spaces.

    Two edges are equivalent when they are opposite sides of a 4-cycle;
    classes are the transitive closure of that relation, found by
    union-find over all squares.  Side bits are assigned along a BFS
    spanning tree and then cross-checked on every edge: an edge must flip
    exactly its own class bit, else HalfspaceViolation.  When the
    instance is small enough a full flood fill per class also confirms
    each half-space is one connected piece.

    Expects a graph that passed validate_median; class ids are numbered
    by the smallest edge id they contain.
    """
    n = g.vertex_count
    m = len(g.edges)
    uf = _UnionFind(m)
    adj_sets = g._adj_sets
    edge_index = g._edge_index

    for eid, (u, v) in enumerate(g.edges):
        # squares u-v-w-x with x next to u and w next to both v and x
        for x in g.adjacency[u]:
            if x == v:
                continue
            common = adj_sets[v] & adj_sets[x]
            for w in common:
                if w == u:
                    continue
                other = edge_index[(x, w) if x < w else (w, x)]
                uf.union(eid, other)

    roots = {}
    class_of_edge = [0] * m
    hyperplane_edges = []
    for eid in range(m):
        r = uf.find(eid)
        h = roots.get(r)
        if h is None:
            h = len(hyperplane_edges)
            roots[r] = h
            hyperplane_edges.append([])
        class_of_edge[eid] = h
        hyperplane_edges[h].append(eid)
    count = len(hyperplane_edges)

    # orient sides along a spanning tree from vertex 0
    side = np.zeros((n, count), dtype=bool)
    parent_edge = [-1] * n
    order = deque([0])
    seen = bytearray(n)
    seen[0] = 1
    order_list = []
    while order:
        u = order.popleft()
        order_list.append(u)
        for w in g.adjacency[u]:
            if not seen[w]:
                seen[w] = 1
                parent_edge[w] = g.edge_id(u, w)
                order.append(w)
    for u in order_list[1:]:
        eid = parent_edge[u]
        a, b = g.edges[eid]
        p = a if a != u else b
        side[u] = side[p]
        side[u, class_of_edge[eid]] ^= True

    # every edge must cross exactly its own hyperplane
    for eid, (u, v) in enumerate(g.edges):
        diff = side[u] != side[v]
        k = int(diff.sum())
        if k != 1 or not diff[class_of_edge[eid]]:
            raise HalfspaceViolation(
                f"edge {g.edges[eid]} crosses {k} hyperplane sides")

    occupied = side.sum(axis=0)
    for h in range(count):
        if occupied[h] == 0 or occupied[h] == n:
            raise HalfspaceViolation(f"hyperplane {h} has an empty side")

    if count * (n + 2 * m) <= full_check_budget:
        _flood_check(g, class_of_edge, hyperplane_edges, side)

    signatures = tuple(
        int.from_bytes(np.packbits(side[v], bitorder="little").tobytes(),
                       "little")
        for v in range(n))

    return HyperplaneSet(g, count, tuple(class_of_edge),
                         tuple(tuple(e) for e in hyperplane_edges),
                         side, signatures)


def _flood_check(g, class_of_edge, hyperplane_edges, side):
    """Confirm removing each class leaves exactly the two stored sides."""
    adjacency = g.adjacency
    for h, eids in enumerate(hyperplane_edges):
        banned = set(eids)
        u0, v0 = g.edges[eids[0]]
        col = side[:, h]
        for start in (u0, v0):
            want = bool(col[start])
            comp = {start}
            queue = deque([start])
            while queue:
                x = queue.popleft()
                for w in adjacency[x]:
                    eid = g.edge_id(x, w)
                    if eid in banned or w in comp:
                        continue
                    comp.add(w)
                    queue.append(w)
            stored = int(col.sum()) if want else len(col) - int(col.sum())
            if len(comp) != stored or any(bool(col[x]) != want for x in comp):
                raise HalfspaceViolation(
                    f"hyperplane {h} side containing {start} is not a single"
                    f" component")


def separates(hs: HyperplaneSet, h: int, u: int, v: int) -> bool:
    """True when u and v are in different half-spaces of h."""
    return bool(hs.side[u, h] != hs.side[v, h])


def separating_set(hs: HyperplaneSet, u: int, v: int) -> set:
    """Ids of all hyperplanes separating u from v."""
    x = hs.signatures[u] ^ hs.signatures[v]
    out = set()
    while x:
        low = x & -x
        out.add(low.bit_length() - 1)
        x ^= low
    return out


def separation_count(hs: HyperplaneSet, u: int, v: int) -> int:
    """|separating_set(u, v)| without materializing the set."""
    return (hs.signatures[u] ^ hs.signatures[v]).bit_count()


def _square_neighbors(g, u, a, b):
    """True when edges (u,a) and (u,b) lie on a common 4-cycle through u."""
    return bool((g._adj_sets[a] & g._adj_sets[b]) - {u})


def _max_clique(nodes, neighbors):
    """Exact maximum clique size by branch and bound; nodes is small."""
    best = 0

    def extend(clique_size, candidates):
        nonlocal best
        if clique_size + len(candidates) <= best:
            return
        if not candidates:
            best = max(best, clique_size)
            return
        cand = list(candidates)
        while cand:
            if clique_size + len(cand) <= best:
                return
            v = cand.pop()
            extend(clique_size + 1, [w for w in cand if w in neighbors[v]])

    extend(0, nodes)
    return best


def dimension(g: MedianGraph, hs: HyperplaneSet, exact_degree_limit: int = 20) -> int:
    """Largest cube dimension: the maximum over vertices of the largest
    set of incident edge directions that pairwise span squares.

    Exact (exhaustive clique search) whenever the vertex degree is at
    most exact_degree_limit, greedy beyond that.  The result is cached on
    the graph.
    """
    if g._dimension is not None:
        return g._dimension

    best = 0
    for u in range(g.vertex_count):
        nbrs = g.adjacency[u]
        if len(nbrs) <= best:
            continue
        # one representative edge per incident hyperplane
        reps = {}
        for w in nbrs:
            h = hs.class_of_edge[g.edge_id(u, w)]
            reps.setdefault(h, w)
        dirs = list(reps.values())
        compat = {a: set() for a in dirs}
        for i, a in enumerate(dirs):
            for b in dirs[i + 1:]:
                if _square_neighbors(g, u, a, b):
                    compat[a].add(b)
                    compat[b].add(a)
        if len(dirs) <= exact_degree_limit:
            size = _max_clique(dirs, compat)
        else:
            size = _greedy_clique(dirs, compat)
        best = max(best, size)
    g._dimension = best
    return best


def _greedy_clique(nodes, neighbors):
    order = sorted(nodes, key=lambda v: -len(neighbors[v]))
    clique = []
    for v in order:
        if all(v in neighbors[w] for w in clique):
            clique.append(v)
    return len(clique)
