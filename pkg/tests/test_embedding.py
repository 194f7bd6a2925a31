"""Tests for the weighted Hilbert-space embeddings and the stretch bound."""

import math

import pytest

from cubecompress import (
    DEFAULT_EPS_GRID,
    Epsilon,
    as_epsilon,
    compute_hyperplanes,
    d1,
    embed_eps,
    embed_unweighted,
    grid,
    hilbert_distance,
    lipschitz_bound,
    path,
    separating_set,
    squared_distance,
    tree,
)

import oracles


# --------------------------------------------------------------- epsilon


@pytest.mark.parametrize("bad", [0.0, 0.5, -0.1, 0.7, 1.0])
def test_epsilon_rejects_out_of_range(bad):
    with pytest.raises(ValueError):
        Epsilon(bad)


def test_epsilon_accepts_open_interval():
    assert Epsilon(0.49).value == 0.49
    assert Epsilon(1e-9).value == 1e-9


def test_as_epsilon_passthrough_and_coercion():
    e = Epsilon(0.3)
    assert as_epsilon(e) is e
    assert as_epsilon(0.3) == e
    with pytest.raises(ValueError):
        as_epsilon(0.5)


def test_default_eps_grid_contents():
    assert tuple(e.value for e in DEFAULT_EPS_GRID) == (
        0.1, 0.2, 0.3, 0.4, 0.45)
    for e in DEFAULT_EPS_GRID:
        assert as_epsilon(e) is e


# ------------------------------------------------------ unweighted map


def test_unweighted_basepoint_is_zero_vector(grid33):
    g, hs = grid33
    vec = embed_unweighted(g, hs, 0, 0)
    assert vec.entries == {}
    assert vec.norm() == 0.0


def test_unweighted_leaf_of_two_edge_tree():
    g = path(2)
    hs = compute_hyperplanes(g)
    vec = embed_unweighted(g, hs, 2, 0)
    assert vec.entries == {hs.edge_class(0, 1): 1.0, hs.edge_class(1, 2): 1.0}


def test_unweighted_is_characteristic_vector(small_median_instances):
    for name, g, hs in small_median_instances:
        b = g.vertex_count // 2
        for s in range(g.vertex_count):
            vec = embed_unweighted(g, hs, s, b)
            assert set(vec.entries) == separating_set(hs, s, b), name
            assert all(x == 1.0 for x in vec.entries.values()), name


def test_unweighted_distance_squared_is_graph_distance(
        small_median_instances):
    for name, g, hs in small_median_instances:
        b = 0
        vecs = [embed_unweighted(g, hs, s, b)
                for s in range(g.vertex_count)]
        for u in range(g.vertex_count):
            for v in range(g.vertex_count):
                got = squared_distance(vecs[u], vecs[v])
                assert got == float(d1(g, u, v)), name


# ------------------------------------------------------- weighted map


def test_embed_eps_two_edge_path():
    g = path(2)
    hs = compute_hyperplanes(g)
    eps = 0.3
    vec = embed_eps(g, hs, 2, 0, eps)
    assert vec.entries == {
        hs.edge_class(1, 2): 1.0,
        hs.edge_class(0, 1): 2.0 ** eps,
    }


def test_embed_eps_path_norm_is_power_sum():
    eps = 0.25
    k = 12
    g = path(k)
    hs = compute_hyperplanes(g)
    vec = embed_eps(g, hs, k, 0, eps)
    expected = sum(j ** (2 * eps) for j in range(1, k + 1))
    assert math.isclose(vec.norm() ** 2, expected, rel_tol=1e-12)


def test_embed_eps_at_basepoint_is_zero(grid33):
    g, hs = grid33
    assert embed_eps(g, hs, 4, 4, 0.2).entries == {}


def test_embed_eps_entries_are_weight_powers(grid43):
    g, hs = grid43
    eps = 0.4
    from cubecompress import weight_map
    for s in (5, 11):
        wm = weight_map(g, hs, s, 0).weights
        vec = embed_eps(g, hs, s, 0, eps)
        assert set(vec.entries) == set(wm)
        for h, w in wm.items():
            assert math.isclose(vec.entries[h], w ** eps, rel_tol=1e-15)


def test_embed_eps_accepts_shared_cache(grid33):
    from cubecompress import WeightCache
    g, hs = grid33
    cache = WeightCache(g, hs, 0)
    with_cache = embed_eps(g, hs, 8, 0, 0.3, cache=cache)
    without = embed_eps(g, hs, 8, 0, 0.3)
    assert with_cache == without


def test_embed_eps_rejects_cache_with_other_basepoint(grid33):
    from cubecompress import WeightCache
    g, hs = grid33
    cache = WeightCache(g, hs, 1)
    with pytest.raises(ValueError):
        embed_eps(g, hs, 8, 0, 0.3, cache=cache)


# ------------------------------------------------------------ distances


def test_hilbert_distance_two_edge_tree_center():
    g = path(2)
    hs = compute_hyperplanes(g)
    x = embed_unweighted(g, hs, 0, 1)
    y = embed_unweighted(g, hs, 2, 1)
    assert math.isclose(hilbert_distance(x, y), math.sqrt(2.0))


def test_distance_to_self_is_zero(grid33):
    g, hs = grid33
    vec = embed_eps(g, hs, 7, 0, 0.45)
    assert hilbert_distance(vec, vec) == 0.0
    assert squared_distance(vec, vec) == 0.0


def test_weighted_distance_dominates_sqrt_distance(small_median_instances):
    # every class separating u from v lies in exactly one support with
    # weight at least one, so the squared gap is at least the distance
    for name, g, hs in small_median_instances:
        b = 0
        for eps in (0.1, 0.45):
            vecs = [embed_eps(g, hs, s, b, eps)
                    for s in range(g.vertex_count)]
            for u in range(g.vertex_count):
                for v in range(g.vertex_count):
                    got = squared_distance(vecs[u], vecs[v])
                    assert got >= d1(g, u, v) - 1e-12, name


def test_edge_pairs_differ_by_at_most_one_per_coordinate(grid43):
    g, hs = grid43
    eps = 0.3
    for b in (0, 5, 11):
        vecs = [embed_eps(g, hs, s, b, eps) for s in range(g.vertex_count)]
        for (u, v) in g.edges:
            keys = set(vecs[u].entries) | set(vecs[v].entries)
            diffs = [abs(vecs[u].entries.get(h, 0.0)
                         - vecs[v].entries.get(h, 0.0)) for h in keys]
            assert max(diffs) <= 1.0 + 1e-12
            # the class the edge crosses contributes exactly one
            crossing = hs.edge_class(u, v)
            gap = abs(vecs[u].entries.get(crossing, 0.0)
                      - vecs[v].entries.get(crossing, 0.0))
            assert math.isclose(gap, 1.0)


# ------------------------------------------------------- stretch bound


def test_lipschitz_bound_frozen_values():
    # plain-sum reference values, one per grid epsilon
    expected = {
        0.1: 1.0122980350344426,
        0.25: 1.1239897392734466,
        0.4: 1.7980680646877212,
        0.45: 3.0228293004888647,
    }
    for eps, value in expected.items():
        assert math.isclose(lipschitz_bound(1, eps), value, rel_tol=1e-9)


def test_lipschitz_bound_matches_plain_oracle():
    for eps in (0.15, 0.3, 0.42):
        for terms in (10, 1000, 50_000):
            want = oracles.series_bound_plain(2, eps, terms)
            got = lipschitz_bound(2, eps, partial_terms=terms)
            assert math.isclose(got, want, rel_tol=1e-9)


def test_lipschitz_bound_scales_linearly_in_dimension():
    one = lipschitz_bound(1, 0.3)
    for n in (2, 3, 7):
        assert math.isclose(lipschitz_bound(n, 0.3), n * one, rel_tol=1e-12)


def test_lipschitz_bound_at_least_dimension():
    # the j=0 term alone contributes n
    for n in (1, 2, 5):
        for eps in DEFAULT_EPS_GRID:
            assert lipschitz_bound(n, eps) >= n


def test_lipschitz_bound_single_term_is_infinite():
    assert lipschitz_bound(1, 0.3, partial_terms=1) == float("inf")


def test_lipschitz_bound_tail_settles():
    # trading tail estimate for exact terms only tightens the bound
    coarse = lipschitz_bound(1, 0.25, partial_terms=10_000)
    fine = lipschitz_bound(1, 0.25, partial_terms=1_000_000)
    assert math.isclose(coarse, fine, rel_tol=1e-4)
    assert fine <= coarse + 1e-12
