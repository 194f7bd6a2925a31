"""Normal cube paths and the weights they induce on hyperplanes.

A cube path from s to v is a sequence of cubes, each entered at one
corner and left at the diagonally opposite corner, consecutive cubes
meeting in exactly that corner.  It is normal when each cube also meets
the star of its predecessor (the union of all cubes containing it) in
that single vertex.  Normal cube paths exist and are unique between any
two vertices, and the greedy rule below constructs them: from the
current vertex, cross simultaneously every adjacent hyperplane that
still separates it from the target.

Crossing a hyperplane in cube i of the normal path from s to the
basepoint assigns it weight i + 1; hyperplanes not separating s from the
basepoint keep an implicit weight 0.  Adjacent vertices get weights
differing by at most 1, which is what makes the weighted embeddings
downstream Lipschitz.
"""

from __future__ import annotations

import threading
from collections import OrderedDict, deque
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .errors import NonCrossingPair, NoSuchCube
from .median import HyperplaneSet, MedianGraph

__all__ = [
    "Cube",
    "CubePath",
    "WeightMap",
    "WeightCache",
    "adjacent_separating",
    "cross_cube",
    "cross_sequence",
    "normal_cube_path",
    "star_vertices",
    "verify_normality",
    "weight_map",
]


@dataclass(frozen=True)
class Cube:
    """A cube of the complex, presented from one corner.

    base and diagonal are opposite corners; hyperplanes is the spanning
    set (the cube's dimension is its size); vertices is the full corner
    set, of size 2**dim.
    """

    base: int
    hyperplanes: frozenset
    vertices: frozenset
    diagonal: int

    @property
    def dim(self) -> int:
        return len(self.hyperplanes)


@dataclass(frozen=True)
class CubePath:
    """Cubes C_0..C_n plus the corner sequence v_0..v_{n+1}, where v_i is
    the entry corner of C_i and v_{i+1} its exit."""

    cubes: Tuple[Cube, ...]
    vertices: Tuple[int, ...]

    @property
    def source(self) -> int:
        return self.vertices[0]

    @property
    def target(self) -> int:
        return self.vertices[-1]

    @property
    def total_crossings(self) -> int:
        return sum(c.dim for c in self.cubes)


@dataclass(frozen=True)
class WeightMap:
    """Sparse weights on hyperplanes for one (source, basepoint) pair.

    weights maps hyperplane id -> positive cube index + 1 along the
    normal cube path from source to basepoint; absent ids mean weight 0.
    """

    source: int
    basepoint: int
    weights: Mapping[int, int]


def _incident(g: MedianGraph, hs: HyperplaneSet, u: int):
    class_of_edge = hs.class_of_edge
    return [(w, class_of_edge[g.edge_id(u, w)]) for w in g.adjacency[u]]


def adjacent_separating(g: MedianGraph, hs: HyperplaneSet, u: int,
                        target: int) -> set:
    """Hyperplanes with an edge at u that separate u from target.

    In a median graph these pairwise cross (each pair spans a square at
    u); that is verified and NonCrossingPair raised otherwise, since its
    failure means the input was not median.  Returns the empty set only
    when u == target.
    """
    side = hs.side
    found = []
    for (w, h) in _incident(g, hs, u):
        if side[u, h] != side[target, h]:
            found.append((h, w))
    adj_sets = g._adj_sets
    for i in range(len(found)):
        hi, wi = found[i]
        for j in range(i + 1, len(found)):
            hj, wj = found[j]
            if not (adj_sets[wi] & adj_sets[wj]) - {u}:
                raise NonCrossingPair(
                    f"hyperplanes {hi} and {hj} at vertex {u} do not span a"
                    f" square")
    return {h for (h, _) in found}


def _closure(g: MedianGraph, hs: HyperplaneSet, base: int, spanning) -> set:
    """Vertices reachable from base along edges of the given classes."""
    class_of_edge = hs.class_of_edge
    seen = {base}
    queue = deque([base])
    while queue:
        x = queue.popleft()
        for w in g.adjacency[x]:
            if w in seen:
                continue
            if class_of_edge[g.edge_id(x, w)] in spanning:
                seen.add(w)
                queue.append(w)
    return seen


def _closure_cube(g: MedianGraph, hs: HyperplaneSet, base: int,
                  spanning: frozenset) -> Optional[Cube]:
    """The cube spanned at base by the given classes, or None."""
    verts = _closure(g, hs, base, spanning)
    if len(verts) != 1 << len(spanning):
        return None
    signatures = hs.signatures
    mask = 0
    for h in spanning:
        mask |= 1 << h
    want = signatures[base] ^ mask
    diagonal = None
    for v in verts:
        if signatures[v] == want:
            diagonal = v
            break
    if diagonal is None:
        return None
    return Cube(base, spanning, frozenset(verts), diagonal)


def cross_cube(g: MedianGraph, hs: HyperplaneSet, u: int,
               spanning: Iterable[int]) -> Cube:
    """The cube cornered at u spanned by the given hyperplanes.

    The corner set is computed as a closure (reachability along edges of
    the spanning classes) rather than by crossing in some order, so the
    result cannot depend on ordering.  NoSuchCube is raised when the
    closure is not a full cube or no corner is separated from u by
    exactly the spanning set.
    """
    spanning = frozenset(spanning)
    if not spanning:
        raise NoSuchCube("a cube needs at least one spanning hyperplane")
    cube = _closure_cube(g, hs, u, spanning)
    if cube is None:
        raise NoSuchCube(
            f"hyperplanes {sorted(spanning)} do not span a cube at {u}")
    return cube


def cross_sequence(g: MedianGraph, hs: HyperplaneSet, u: int,
                   order: Sequence[int]) -> int:
    """Cross the listed hyperplanes one edge at a time, in order.

    Used to confirm cross_cube is order-free: any permutation of a
    spanning set must land on the same diagonal.
    """
    x = u
    for h in order:
        step = None
        for (w, c) in _incident(g, hs, x):
            if c == h:
                step = w
                break
        if step is None:
            raise NoSuchCube(f"no edge of hyperplane {h} at vertex {x}")
        x = step
    return x


def normal_cube_path(g: MedianGraph, hs: HyperplaneSet, s: int,
                     v: int) -> CubePath:
    """The normal cube path from s to v (empty when s == v).

    Greedy construction: at each corner cross the full set of adjacent
    separating hyperplanes as one cube.  The result crosses every
    hyperplane separating s from v exactly once and nothing else, so its
    total crossing count is d1(s, v).
    """
    cubes = []
    corners = [s]
    u = s
    while u != v:
        spanning = adjacent_separating(g, hs, u, v)
        cube = cross_cube(g, hs, u, spanning)
        cubes.append(cube)
        u = cube.diagonal
        corners.append(u)
    return CubePath(tuple(cubes), tuple(corners))


def star_vertices(g: MedianGraph, hs: HyperplaneSet, cube: Cube) -> frozenset:
    """Corners of every cube containing the given cube as a face.

    Grown locally: try to extend the spanning set one hyperplane at a
    time with classes incident to the current corner set, keeping each
    extension that still spans a full cube at the same base.
    """
    verts = set(cube.vertices)
    seen = {cube.hyperplanes}
    stack = [(cube.hyperplanes, cube.vertices)]
    class_of_edge = hs.class_of_edge
    while stack:
        spanning, corner_set = stack.pop()
        candidates = set()
        for x in corner_set:
            for w in g.adjacency[x]:
                h = class_of_edge[g.edge_id(x, w)]
                if h not in spanning:
                    candidates.add(h)
        for h in candidates:
            bigger = spanning | {h}
            if bigger in seen:
                continue
            seen.add(bigger)
            grown = _closure_cube(g, hs, cube.base, bigger)
            if grown is not None:
                verts |= grown.vertices
                stack.append((bigger, grown.vertices))
    return frozenset(verts)


def verify_normality(g: MedianGraph, hs: HyperplaneSet,
                     path: CubePath) -> bool:
    """Check the defining condition of a normal cube path.

    For each consecutive pair, the next cube must meet the union of all
    cubes containing the current one in exactly the shared corner.
    Paths with fewer than two cubes pass vacuously.
    """
    for i in range(len(path.cubes) - 1):
        shared = path.vertices[i + 1]
        star = star_vertices(g, hs, path.cubes[i])
        meet = path.cubes[i + 1].vertices & star
        if meet != {shared}:
            return False
    return True


def weight_map(g: MedianGraph, hs: HyperplaneSet, s: int,
               basepoint: int) -> WeightMap:
    """Weights induced on hyperplanes by the normal path from s to
    basepoint: weight i + 1 on everything crossed by cube i.

    The support is exactly the set of hyperplanes separating s from the
    basepoint; at most dim-many hyperplanes share any one weight because
    a cube crosses at most dim hyperplanes.
    """
    weights: Dict[int, int] = {}
    u = s
    level = 1
    side = hs.side
    class_of_edge = hs.class_of_edge
    while u != basepoint:
        found = []
        for w in g.adjacency[u]:
            h = class_of_edge[g.edge_id(u, w)]
            if side[u, h] != side[basepoint, h]:
                found.append(h)
        cube = cross_cube(g, hs, u, found)
        for h in cube.hyperplanes:
            weights[h] = level
        u = cube.diagonal
        level += 1
    return WeightMap(s, basepoint, weights)


class WeightCache:
    """Thread-safe LRU memo of weight maps toward one basepoint.

    Profiling and the per-edge verifications ask for the same sources
    repeatedly; entries are immutable once stored, so concurrent readers
    may share them.  The returned mappings must be treated as read-only.
    """

    def __init__(self, g: MedianGraph, hs: HyperplaneSet, basepoint: int,
                 maxsize: int = 256):
        self.graph = g
        self.hyperplanes = hs
        self.basepoint = basepoint
        self.maxsize = maxsize
        self._lock = threading.Lock()
        self._store: OrderedDict = OrderedDict()

    def weights(self, source: int) -> Mapping[int, int]:
        with self._lock:
            hit = self._store.get(source)
            if hit is not None:
                self._store.move_to_end(source)
                return hit
        computed = weight_map(self.graph, self.hyperplanes, source,
                              self.basepoint).weights
        with self._lock:
            existing = self._store.get(source)
            if existing is not None:
                return existing
            self._store[source] = computed
            while len(self._store) > self.maxsize:
                self._store.popitem(last=False)
        return computed
