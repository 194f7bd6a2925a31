"""Tests for cube crossing, greedy normal cube paths, and corner weights."""

import itertools
from concurrent.futures import ThreadPoolExecutor

import pytest

from cubecompress import (
    NoSuchCube,
    WeightCache,
    adjacent_separating,
    compute_hyperplanes,
    cross_cube,
    d1,
    dimension,
    grid,
    normal_cube_path,
    path,
    product,
    random_tree,
    separating_set,
    staircase,
    star_vertices,
    tree,
    verify_normality,
    weight_map,
)
from cubecompress.normalpaths import CubePath, cross_sequence

import oracles


# ------------------------------------------------- adjacent separating


def test_adjacent_separating_on_path_is_single_class(path5):
    g, hs = path5
    got = adjacent_separating(g, hs, 3, 0)
    assert got == {hs.edge_class(3, 2)}


def test_adjacent_separating_grid_corner_pair(grid33):
    # from corner (2,2) toward (0,0) both incident classes separate and
    # bound a square, so they cross together
    g, hs = grid33
    got = adjacent_separating(g, hs, 8, 0)
    assert got == {hs.edge_class(8, 5), hs.edge_class(8, 7)}


def test_adjacent_separating_staircase_concave_corner():
    # at (1,2) heading for (0,0) the x-edge leads away, so only the
    # downward y-class is adjacent and separating
    g = staircase(2)
    hs = compute_hyperplanes(g)
    got = adjacent_separating(g, hs, 4, 0)
    assert got == {hs.edge_class(4, 3)}


def test_adjacent_separating_subset_of_separating(small_median_instances):
    for name, g, hs in small_median_instances:
        for u in range(g.vertex_count):
            for v in range(g.vertex_count):
                if u == v:
                    continue
                adj = adjacent_separating(g, hs, u, v)
                assert adj, (name, u, v)
                assert adj <= separating_set(hs, u, v), (name, u, v)


# ------------------------------------------------------- cube crossing


def test_cross_single_class_is_edge(path5):
    g, hs = path5
    cube = cross_cube(g, hs, 2, {hs.edge_class(2, 3)})
    assert cube.dim == 1
    assert cube.base == 2
    assert cube.diagonal == 3
    assert cube.vertices == frozenset({2, 3})


def test_cross_two_classes_gives_square(grid33):
    g, hs = grid33
    spanning = {hs.edge_class(0, 1), hs.edge_class(0, 3)}
    cube = cross_cube(g, hs, 0, spanning)
    assert cube.dim == 2
    assert cube.vertices == frozenset({0, 1, 3, 4})
    assert cube.diagonal == 4


def test_cross_missing_square_raises():
    # the staircase omits (0,2), so the x-class and the upper y-class do
    # not span a square at (0,1)
    g = staircase(2)
    hs = compute_hyperplanes(g)
    upper_y = hs.edge_class(3, 4)    # y: 1 -> 2
    x_class = hs.edge_class(1, 3)    # x: 0 -> 1
    with pytest.raises(NoSuchCube):
        cross_cube(g, hs, 1, {upper_y, x_class})


def test_cross_rejects_class_not_at_vertex(path5):
    g, hs = path5
    with pytest.raises(NoSuchCube):
        cross_cube(g, hs, 0, {hs.edge_class(3, 4)})


def test_cross_order_independent(small_median_instances):
    # crossing a spanning set one class at a time lands on the diagonal
    # no matter the order
    for name, g, hs in small_median_instances:
        for verts, spanning in oracles.all_cubes(g, hs).items():
            if len(spanning) > 3:
                continue
            for base in verts:
                cube = cross_cube(g, hs, base, spanning)
                assert cube.vertices == verts, name
                for order in itertools.permutations(spanning):
                    assert cross_sequence(g, hs, base, order) == cube.diagonal


def test_cube_vertices_match_oracle(small_median_instances):
    for name, g, hs in small_median_instances:
        for verts, spanning in oracles.all_cubes(g, hs).items():
            base = min(verts)
            cube = cross_cube(g, hs, base, spanning)
            assert cube.vertices == verts, name
            assert cube.dim == len(spanning), name


# --------------------------------------------------- normal cube paths


def test_empty_path_at_same_vertex(grid33):
    g, hs = grid33
    p = normal_cube_path(g, hs, 4, 4)
    assert p.cubes == ()
    assert p.vertices == (4,)
    assert p.total_crossings == 0
    assert p.source == p.target == 4


def test_normal_path_grid_4x3_corner_to_corner(grid43):
    g, hs = grid43
    p = normal_cube_path(g, hs, 11, 0)
    assert p.vertices == (11, 7, 3, 0)
    assert [c.dim for c in p.cubes] == [2, 2, 1]
    assert p.total_crossings == d1(g, 11, 0) == 5


def test_normal_path_on_tree_is_geodesic():
    g = tree(2, 3)
    hs = compute_hyperplanes(g)
    p = normal_cube_path(g, hs, 7, 9)
    assert all(c.dim == 1 for c in p.cubes)
    assert p.total_crossings == d1(g, 7, 9)
    assert len(p.vertices) == d1(g, 7, 9) + 1


def test_normal_path_crossings_equal_distance(small_median_instances):
    for name, g, hs in small_median_instances:
        for s in range(g.vertex_count):
            for v in range(g.vertex_count):
                p = normal_cube_path(g, hs, s, v)
                assert p.source == s and p.target == v, name
                assert p.total_crossings == d1(g, s, v), name
                crossed = set()
                for c in p.cubes:
                    assert not (crossed & c.hyperplanes), name
                    crossed |= c.hyperplanes
                assert crossed == separating_set(hs, s, v), name


def test_greedy_path_is_normal(small_median_instances):
    for name, g, hs in small_median_instances:
        for s in range(g.vertex_count):
            for v in range(g.vertex_count):
                p = normal_cube_path(g, hs, s, v)
                assert verify_normality(g, hs, p), (name, s, v)


def test_two_edge_walk_around_square_is_not_normal():
    # walking 0 -> 1 -> 3 around a square fails the star condition: the
    # second edge stays inside the star of the first
    g = grid([2, 2])
    hs = compute_hyperplanes(g)
    first = cross_cube(g, hs, 0, {hs.edge_class(0, 1)})
    second = cross_cube(g, hs, 1, {hs.edge_class(1, 3)})
    walk = CubePath(cubes=(first, second), vertices=(0, 1, 3))
    assert not verify_normality(g, hs, walk)


def test_single_cube_path_is_normal(grid33):
    g, hs = grid33
    p = normal_cube_path(g, hs, 0, 4)
    assert len(p.cubes) == 1
    assert verify_normality(g, hs, p)


def test_normal_path_unique_on_small_instances():
    cases = [grid([3, 2]), tree(2, 2), staircase(2), path(4)]
    for g in cases:
        hs = compute_hyperplanes(g)
        for s in range(g.vertex_count):
            for v in range(g.vertex_count):
                paths, pruned = oracles.enumerate_normal_paths(g, hs, s, v)
                assert pruned == 0
                assert len(paths) == 1
                greedy = normal_cube_path(g, hs, s, v)
                assert paths[0] == tuple(
                    (c.vertices, c.hyperplanes, c.base, c.diagonal)
                    for c in greedy.cubes)


# ----------------------------------------------------------- the star


def test_star_vertices_match_oracle(small_median_instances):
    for name, g, hs in small_median_instances:
        for verts, spanning in oracles.all_cubes(g, hs).items():
            cube = cross_cube(g, hs, min(verts), spanning)
            assert star_vertices(g, hs, cube) == oracles.brute_star(
                g, hs, verts), name


def test_star_of_edge_in_square_is_whole_square():
    g = grid([2, 2])
    hs = compute_hyperplanes(g)
    edge = cross_cube(g, hs, 0, {hs.edge_class(0, 1)})
    assert star_vertices(g, hs, edge) == frozenset({0, 1, 2, 3})


def test_star_of_max_cube_is_itself(grid33):
    g, hs = grid33
    square = cross_cube(g, hs, 0, {hs.edge_class(0, 1), hs.edge_class(0, 3)})
    assert star_vertices(g, hs, square) == square.vertices


# -------------------------------------------------------- corner weights


def test_weight_map_on_path_counts_steps(path5):
    # walking home one edge per cube: the class nearest the source is
    # crossed first
    g, hs = path5
    wm = weight_map(g, hs, 4, 0)
    assert wm.weights == {
        hs.edge_class(4, 3): 1,
        hs.edge_class(3, 2): 2,
        hs.edge_class(2, 1): 3,
        hs.edge_class(1, 0): 4,
    }


def test_weight_map_on_grid_crosses_in_pairs(grid33):
    g, hs = grid33
    wm = weight_map(g, hs, 8, 0)
    assert wm.weights == {
        hs.edge_class(8, 5): 1,
        hs.edge_class(8, 7): 1,
        hs.edge_class(3, 0): 2,
        hs.edge_class(1, 0): 2,
    }


def test_weight_map_at_basepoint_is_empty(grid33):
    g, hs = grid33
    assert weight_map(g, hs, 0, 0).weights == {}


def test_weight_support_is_separating_set(small_median_instances):
    for name, g, hs in small_median_instances:
        n = dimension(g, hs)
        for b in (0, g.vertex_count - 1):
            for s in range(g.vertex_count):
                wm = weight_map(g, hs, s, b)
                assert set(wm.weights) == separating_set(hs, s, b), name
                if not wm.weights:
                    continue
                levels = {}
                for h, w in wm.weights.items():
                    assert 1 <= w <= len(
                        normal_cube_path(g, hs, s, b).cubes), name
                    levels[w] = levels.get(w, 0) + 1
                # at most one cube's worth of classes per level
                assert max(levels.values()) <= n, name


def test_weights_fellow_travel_within_cubes(small_median_instances):
    # vertices sharing a cube have weight maps differing by at most one
    # on every class
    for name, g, hs in small_median_instances:
        cubes = oracles.all_cubes(g, hs)
        for b in (0, g.vertex_count // 2):
            maps = {s: weight_map(g, hs, s, b).weights
                    for s in range(g.vertex_count)}
            for verts in cubes:
                for u, v in itertools.combinations(sorted(verts), 2):
                    for h in set(maps[u]) | set(maps[v]):
                        gap = abs(maps[u].get(h, 0) - maps[v].get(h, 0))
                        assert gap <= 1, (name, b, u, v, h)


def test_weight_cache_returns_idempotent_maps(grid33):
    g, hs = grid33
    cache = WeightCache(g, hs, 0)
    first = cache.weights(8)
    second = cache.weights(8)
    assert first == second == weight_map(g, hs, 8, 0).weights


def test_weight_cache_respects_maxsize(grid43):
    g, hs = grid43
    cache = WeightCache(g, hs, 0, maxsize=4)
    for s in range(g.vertex_count):
        cache.weights(s)
    # survives eviction churn and still answers correctly
    assert cache.weights(11) == weight_map(g, hs, 11, 0).weights


def test_weight_cache_is_thread_safe():
    g = grid([6, 6])
    hs = compute_hyperplanes(g)
    cache = WeightCache(g, hs, 0, maxsize=8)
    expected = {s: weight_map(g, hs, s, 0).weights
                for s in range(g.vertex_count)}

    def hammer(offset):
        for s in list(range(g.vertex_count))[offset::4] * 5:
            assert cache.weights(s) == expected[s]
        return True

    with ThreadPoolExecutor(max_workers=4) as pool:
        assert all(pool.map(hammer, range(4)))
