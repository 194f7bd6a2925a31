"""Brute-force reference implementations the tests compare against.

Everything here favors clarity over speed and takes a different route
from the package: networkx for distances, power-set coordinate
bijections for cubes, whole-graph cube enumeration for stars, and full
path enumeration filtered by the normality predicate for uniqueness.
"""

import itertools
from collections import deque

import networkx as nx


def to_networkx(g):
    G = nx.Graph()
    G.add_nodes_from(range(g.vertex_count))
    G.add_edges_from(g.edges)
    return G


def nx_distances(g):
    """Dense all-pairs distance table via networkx BFS."""
    G = to_networkx(g)
    n = g.vertex_count
    dist = [[-1] * n for _ in range(n)]
    for u, row in nx.all_pairs_shortest_path_length(G):
        for v, d in row.items():
            dist[u][v] = d
    return dist


def brute_interval(dist, u, v):
    total = dist[u][v]
    return {w for w in range(len(dist)) if dist[u][w] + dist[w][v] == total}


def brute_medians(dist, u, v, w):
    return (brute_interval(dist, u, v)
            & brute_interval(dist, v, w)
            & brute_interval(dist, u, w))


def brute_halfspaces(g, hs, h):
    """Flood the graph with hyperplane h's edges removed."""
    banned = set(hs.hyperplane_edges[h])
    comps = []
    seen = set()
    for start in range(g.vertex_count):
        if start in seen:
            continue
        comp = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in g.adjacency[x]:
                eid = g.edge_id(x, y)
                if eid in banned or y in comp:
                    continue
                comp.add(y)
                queue.append(y)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def brute_separating(g, hs, u, v):
    """Hyperplanes whose removal puts u and v in different components."""
    out = set()
    for h in range(hs.count):
        for comp in brute_halfspaces(g, hs, h):
            if u in comp:
                if v not in comp:
                    out.add(h)
                break
    return out


def is_cube(g, hs, base, spanning):
    """Check that the classes span a cube at base by a coordinate
    bijection: vertices reachable along spanning-class edges must map
    one-to-one onto the power set of the spanning set, the coordinate of
    a vertex being the classes on which its side differs from base."""
    spanning = frozenset(spanning)
    if not spanning:
        return None
    verts = {base}
    queue = deque([base])
    while queue:
        x = queue.popleft()
        for y in g.adjacency[x]:
            if y in verts:
                continue
            if hs.edge_class(x, y) in spanning:
                verts.add(y)
                queue.append(y)
    if len(verts) != 1 << len(spanning):
        return None
    coords = {}
    for v in verts:
        c = frozenset(h for h in range(hs.count)
                      if bool(hs.side[v, h]) != bool(hs.side[base, h]))
        if not c <= spanning or c in coords:
            return None
        coords[c] = v
    if len(coords) != len(verts):
        return None
    return frozenset(verts), coords[spanning]


def all_cubes(g, hs):
    """Every (vertex set, spanning set) cube in the graph, found by
    growing class subsets at each vertex.  Exponential; small graphs
    only."""
    found = {}
    for base in range(g.vertex_count):
        incident = sorted({hs.edge_class(base, w)
                           for w in g.adjacency[base]})
        for k in range(1, len(incident) + 1):
            for combo in itertools.combinations(incident, k):
                got = is_cube(g, hs, base, combo)
                if got is not None:
                    found[got[0]] = frozenset(combo)
    return found


def brute_star(g, hs, cube_vertices):
    """Union of the corner sets of every cube having the given cube as a
    face, from the global cube list (plus the cube itself)."""
    star = set(cube_vertices)
    for verts in all_cubes(g, hs):
        if cube_vertices <= verts:
            star |= verts
    return frozenset(star)


def enumerate_normal_paths(g, hs, s, t, star_fn=None):
    """All cube paths from s to t passing the normality filter.

    Depth-first over (corner, previous cube) states; search states are
    never allowed to repeat along a branch, and the caller should assert
    that pruned is 0 so the enumeration is known exhaustive.  Returns
    (paths, pruned) where each path is a tuple of (vertex set, spanning
    set, entry, exit) cubes.
    """
    star_memo = {}

    def star(verts):
        got = star_memo.get(verts)
        if got is None:
            got = (star_fn(verts) if star_fn is not None
                   else brute_star(g, hs, verts))
            star_memo[verts] = got
        return got

    cubes_at = {}
    for base in range(g.vertex_count):
        incident = sorted({hs.edge_class(base, w)
                           for w in g.adjacency[base]})
        out = []
        for k in range(1, len(incident) + 1):
            for combo in itertools.combinations(incident, k):
                got = is_cube(g, hs, base, combo)
                if got is not None:
                    out.append((got[0], frozenset(combo), base, got[1]))
        cubes_at[base] = out

    paths = []
    pruned = 0

    def walk(u, prev, trail, seen_states):
        nonlocal pruned
        if u == t:
            paths.append(tuple(trail))
            # fall through: a longer path may pass through t and end at
            # t again, and it would count as another path from s to t
        for cand in cubes_at[u]:
            verts, spanning, base, diag = cand
            if prev is not None:
                if star(prev[0]) & verts != {u}:
                    continue
            nxt_state = (diag, verts)
            if nxt_state in seen_states:
                pruned += 1
                continue
            trail.append(cand)
            seen_states.add(nxt_state)
            walk(diag, cand, trail, seen_states)
            seen_states.discard(nxt_state)
            trail.pop()

    walk(s, None, [], {(s, None)})
    return paths, pruned


def series_bound_plain(n, eps, terms):
    """Plain-Python partial sum plus tail for the squared stretch bound."""
    e = float(eps)
    total = 0.0
    for j in range(terms):
        total += (j ** e - (j + 1) ** e) ** 2
    if terms == 1:
        return float("inf")
    tail = e * e * (terms - 1.0) ** (2.0 * e - 1.0) / (1.0 - 2.0 * e)
    return n * (total + tail)
