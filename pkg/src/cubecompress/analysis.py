"""Empirical verification of metric bounds and compression profiles.

The compression profile of an embedding records, per radius r, the
smallest Hilbert distance over vertex pairs at graph distance >= r; its
log-log slope over a window estimates the compression exponent.  The
verifiers check, pair by pair or edge by edge, the inequalities the
embeddings are designed to satisfy: an upper (Lipschitz) bound on edge
stretch, a polynomial lower bound on pair distances, weights of adjacent
vertices differing by at most one, and geodesics crossing each
hyperplane at most once together with the distance/separating-set
identity.

Pair evaluation is a commutative min-reduction over independent pairs,
so any evaluation order gives identical results; everything here is
evaluated serially with deterministic ordering (sources ascending,
targets ascending), which also fixes the reported witnesses.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .embedding import (
    DEFAULT_EPS_GRID,
    Epsilon,
    EpsilonLike,
    as_epsilon,
    lipschitz_bound,
)
from .errors import InsufficientData, NoSuchCube, RadiusExceedsDiameter
from .median import (
    HyperplaneSet,
    MedianGraph,
    bfs_distances,
    bfs_parents,
    dimension,
    separation_count,
)

__all__ = [
    "CompressionProfile",
    "ExponentFit",
    "BoundReport",
    "SweepReport",
    "DistanceCache",
    "compression_profile",
    "default_radii",
    "fit_exponent",
    "weight_matrix",
    "verify_lower_bound",
    "verify_lipschitz",
    "verify_fellow_traveler",
    "verify_crossing_once",
    "verify_packing_inequalities",
]

DEFAULT_EXHAUSTIVE_CAP = 3000
DEFAULT_SAMPLE_SOURCES = 256
DEFAULT_SAMPLE_TARGETS = 128
MARGIN_TOLERANCE = 1e-9


@dataclass(frozen=True)
class CompressionProfile:
    """Per-radius infimum of embedding distance over far-apart pairs.

    witness_pairs[i] attains rho[i] among the pairs considered and has
    graph distance >= radii[i]; achieving_counts[i] is how many
    considered pairs attain it exactly.  eps is None for the unweighted
    embedding.
    """

    radii: Tuple[int, ...]
    rho: Tuple[float, ...]
    witness_pairs: Tuple[Tuple[int, int], ...]
    achieving_counts: Tuple[int, ...]
    basepoint: int
    eps: Optional[Epsilon]
    exhaustive: bool


@dataclass(frozen=True)
class ExponentFit:
    """Least-squares slope of log rho* against log r over a window."""

    slope: float
    intercept: float
    r_range: Tuple[int, int]
    residual: float
    points_used: int


@dataclass(frozen=True)
class BoundReport:
    """Outcome of one verification sweep.

    worst_margin is the smallest slack observed (bound minus observation,
    oriented so that >= 0 means the bound held); worst_pair is where it
    occurred.  passed is worst_margin >= -1e-9.
    """

    passed: bool
    worst_pair: Optional[Tuple[int, int]]
    worst_margin: float
    pairs_checked: int


@dataclass(frozen=True)
class SweepReport:
    """Numerical check of the two packing inequalities behind the lower
    bound (weight sums dominate averaged power sums)."""

    passed: bool
    violations: Tuple[tuple, ...]
    cases_checked: int


class DistanceCache:
    """BFS distance rows, computed once per source and kept."""

    def __init__(self, g: MedianGraph):
        self.graph = g
        self._rows: Dict[int, np.ndarray] = {}

    def row(self, u: int) -> np.ndarray:
        r = self._rows.get(u)
        if r is None:
            r = bfs_distances(self.graph, u)
            self._rows[u] = r
        return r


def default_radii(max_radius: int) -> Tuple[int, ...]:
    """Radius ladder used by the command line: every integer up to 16,
    then 8 log-spaced points per octave."""
    if max_radius < 1:
        return ()
    out = set(range(1, min(max_radius, 16) + 1))
    i = 0
    while True:
        r = int(round(16.0 * 2.0 ** (i / 8.0)))
        if r > max_radius:
            break
        out.add(r)
        i += 1
    return tuple(sorted(out))


def weight_matrix(g: MedianGraph, hs: HyperplaneSet,
                  basepoint: int) -> np.ndarray:
    """Normal-path weights toward basepoint for every source at once.

    Row s agrees with weight_map(g, hs, s, basepoint) read densely, zeros
    marking hyperplanes that do not separate s from the basepoint.  The
    normal path from s is its first cube followed by the normal path from
    that cube's far corner, so row s is the far corner's row with every
    positive entry raised by one and the first cube's classes set to 1;
    rows are filled in order of increasing distance from the basepoint.
    """
    V, H = g.vertex_count, hs.count
    side = hs.side
    class_of_edge = hs.class_of_edge
    adjacency = g.adjacency
    edge_id = g.edge_id
    base_row = side[basepoint]

    first: List[Optional[list]] = [None] * V
    diag = [0] * V
    for u in range(V):
        if u == basepoint:
            continue
        su = side[u]
        found = [h for w in adjacency[u]
                 for h in (class_of_edge[edge_id(u, w)],)
                 if su[h] != base_row[h]]
        x = u
        for h in found:
            step = None
            for w in adjacency[x]:
                if class_of_edge[edge_id(x, w)] == h:
                    step = w
                    break
            if step is None:
                raise NoSuchCube(
                    f"adjacent separating classes at vertex {u} do not span"
                    f" a cube (no edge of hyperplane {h} at {x})")
            x = step
        first[u] = found
        diag[u] = x

    W = np.zeros((V, H), dtype=np.int32)
    order = np.argsort(bfs_distances(g, basepoint), kind="stable")
    for u in order.tolist():
        if u == basepoint:
            continue
        prev = W[diag[u]]
        row = W[u]
        row[:] = prev + (prev != 0)
        row[first[u]] = 1
    return W


def _embedding_matrix(g: MedianGraph, hs: HyperplaneSet, basepoint: int,
                      eps: Epsilon,
                      weights: Optional[np.ndarray] = None) -> np.ndarray:
    W = weights if weights is not None else weight_matrix(g, hs, basepoint)
    return np.power(W, eps.value)


def _pair_groups(g: MedianGraph, basepoint: int, exhaustive_cap: int,
                 seed: int, sample_sources: int, sample_targets: int):
    """Deterministic pair set, grouped as source -> ascending targets.

    Exhaustive (all unordered pairs) when the graph is small enough;
    otherwise every pair through the basepoint plus sample_sources seeded
    sources with sample_targets seeded targets each.  Pairs are
    normalized to (min, max) and deduplicated, and groups are visited in
    ascending source order, so iteration is lexicographic over the
    considered pairs.
    """
    V = g.vertex_count
    if V <= exhaustive_cap:
        for u in range(V - 1):
            yield u, np.arange(u + 1, V, dtype=np.int64)
        return

    rng = np.random.default_rng(seed)
    k = min(sample_sources, V)
    sources = rng.choice(V, size=k, replace=False)
    by_min: Dict[int, set] = {}
    for w in range(V):
        if w != basepoint:
            a, b = (w, basepoint) if w < basepoint else (basepoint, w)
            by_min.setdefault(a, set()).add(b)
    for s in sources:
        targets = rng.integers(0, V, size=sample_targets)
        for t in targets:
            s_i, t_i = int(s), int(t)
            if s_i == t_i:
                continue
            a, b = (s_i, t_i) if s_i < t_i else (t_i, s_i)
            by_min.setdefault(a, set()).add(b)
    for u in sorted(by_min):
        yield u, np.asarray(sorted(by_min[u]), dtype=np.int64)


def compression_profile(g: MedianGraph, hs: HyperplaneSet, basepoint: int,
                        eps: Optional[EpsilonLike],
                        radii: Sequence[int], *,
                        exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP,
                        seed: int = 0,
                        sample_sources: int = DEFAULT_SAMPLE_SOURCES,
                        sample_targets: int = DEFAULT_SAMPLE_TARGETS,
                        distances: Optional[DistanceCache] = None,
                        weights: Optional[np.ndarray] = None
                        ) -> CompressionProfile:
    """Profile rho(r) = min embedding distance over pairs with d1 >= r.

    eps None profiles the unweighted embedding (distances computed as
    square roots of separating-set sizes); otherwise the weighted one.
    Raises RadiusExceedsDiameter when some radius exceeds the largest
    pair distance available to the run.
    """
    radii = [int(r) for r in radii]
    if not radii or any(r < 1 for r in radii):
        raise ValueError("radii must be positive integers")
    if sorted(set(radii)) != radii:
        raise ValueError("radii must be strictly increasing")

    V = g.vertex_count
    eps_obj = as_epsilon(eps) if eps is not None else None
    exhaustive = V <= exhaustive_cap
    dcache = distances if distances is not None else DistanceCache(g)

    X = None
    signatures = hs.signatures
    if eps_obj is not None:
        X = _embedding_matrix(g, hs, basepoint, eps_obj, weights)

    bucket_min = np.full(V + 1, np.inf)
    bucket_witness: List[Optional[Tuple[int, int]]] = [None] * (V + 1)
    bucket_count = np.zeros(V + 1, dtype=np.int64)
    max_d = 0

    for u, targets in _pair_groups(g, basepoint, exhaustive_cap, seed,
                                   sample_sources, sample_targets):
        if targets.size == 0:
            continue
        dd = dcache.row(u)[targets]
        row_max = int(dd.max())
        if row_max > max_d:
            max_d = row_max
        if eps_obj is None:
            sig_u = signatures[u]
            vals = np.sqrt(np.fromiter(
                ((sig_u ^ signatures[int(w)]).bit_count() for w in targets),
                dtype=np.float64, count=targets.size))
        else:
            xu = X[u]
            vals = np.empty(targets.size, dtype=np.float64)
            step = 1024
            for lo in range(0, targets.size, step):
                block = X[targets[lo:lo + step]] - xu
                vals[lo:lo + step] = np.sqrt(np.einsum("ij,ij->i", block, block))
        cand = np.nonzero(vals <= bucket_min[dd])[0]
        for i in cand:
            b = int(dd[i])
            val = float(vals[i])
            cur = bucket_min[b]
            if val < cur:
                bucket_min[b] = val
                bucket_witness[b] = (u, int(targets[i]))
                bucket_count[b] = 1
            elif val == cur:
                bucket_count[b] += 1

    if max(radii) > max_d:
        raise RadiusExceedsDiameter(
            f"radius {max(radii)} exceeds the largest pair distance"
            f" {max_d} available to this run")

    # suffix minima over the distance buckets
    suf_min = np.full(max_d + 2, np.inf)
    suf_wit: List[Optional[Tuple[int, int]]] = [None] * (max_d + 2)
    suf_cnt = np.zeros(max_d + 2, dtype=np.int64)
    for d in range(max_d, 0, -1):
        below = suf_min[d + 1]
        here = bucket_min[d]
        if here < below:
            suf_min[d] = here
            suf_wit[d] = bucket_witness[d]
            suf_cnt[d] = bucket_count[d]
        elif here == below and bucket_witness[d] is not None:
            suf_min[d] = below
            suf_wit[d] = min(bucket_witness[d], suf_wit[d + 1])
            suf_cnt[d] = bucket_count[d] + suf_cnt[d + 1]
        else:
            suf_min[d] = below
            suf_wit[d] = suf_wit[d + 1]
            suf_cnt[d] = suf_cnt[d + 1]

    rho = tuple(float(suf_min[r]) for r in radii)
    wits = tuple(suf_wit[r] for r in radii)
    counts = tuple(int(suf_cnt[r]) for r in radii)
    return CompressionProfile(tuple(radii), rho, wits, counts, basepoint,
                              eps_obj, exhaustive)


def fit_exponent(profile: CompressionProfile,
                 window: Tuple[int, int]) -> ExponentFit:
    """Least-squares slope of log max(rho, 1) against log r.

    Only radii inside the window whose rho exceeds 1 enter the fit; fewer
    than five such points raise InsufficientData.
    """
    lo, hi = int(window[0]), int(window[1])
    if lo < 1 or hi < lo:
        raise ValueError("window must satisfy 1 <= lo <= hi")
    rs = []
    ys = []
    for r, rho in zip(profile.radii, profile.rho):
        star = max(rho, 1.0)
        if lo <= r <= hi and star > 1.0:
            rs.append(math.log(r))
            ys.append(math.log(star))
    if len(rs) < 5:
        raise InsufficientData(
            f"only {len(rs)} usable radii in window [{lo}, {hi}]")
    slope, intercept = np.polyfit(np.asarray(rs), np.asarray(ys), 1)
    pred = slope * np.asarray(rs) + intercept
    residual = float(np.max(np.abs(pred - np.asarray(ys))))
    return ExponentFit(float(slope), float(intercept), (lo, hi), residual,
                       len(rs))


def verify_lower_bound(g: MedianGraph, hs: HyperplaneSet, basepoint: int,
                       eps: EpsilonLike, *,
                       exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP,
                       seed: int = 0,
                       sample_sources: int = DEFAULT_SAMPLE_SOURCES,
                       sample_targets: int = DEFAULT_SAMPLE_TARGETS,
                       distances: Optional[DistanceCache] = None,
                       weights: Optional[np.ndarray] = None
                       ) -> BoundReport:
    """Check the squared distance lower bound
    d1**(2*eps+1) / (n * 2**(2*eps+1) * (2*eps+1)) pair by pair,
    where n is the cube dimension."""
    eps_obj = as_epsilon(eps)
    e2 = 2.0 * eps_obj.value
    n = dimension(g, hs)
    denom = n * 2.0 ** (e2 + 1.0) * (e2 + 1.0)
    dcache = distances if distances is not None else DistanceCache(g)
    X = _embedding_matrix(g, hs, basepoint, eps_obj, weights)

    worst = math.inf
    worst_pair = None
    checked = 0
    for u, targets in _pair_groups(g, basepoint, exhaustive_cap, seed,
                                   sample_sources, sample_targets):
        if targets.size == 0:
            continue
        dd = dcache.row(u)[targets].astype(np.float64)
        block = X[targets] - X[u]
        lhs = np.einsum("ij,ij->i", block, block)
        rhs = np.power(dd, e2 + 1.0) / denom
        margins = lhs - rhs
        checked += targets.size
        i = int(np.argmin(margins))
        if margins[i] < worst:
            worst = float(margins[i])
            worst_pair = (u, int(targets[i]))
    return BoundReport(worst >= -MARGIN_TOLERANCE, worst_pair, worst, checked)


def verify_lipschitz(g: MedianGraph, hs: HyperplaneSet, basepoint: int,
                     eps: EpsilonLike, *, series_terms: int = 10 ** 6,
                     weights: Optional[np.ndarray] = None) -> BoundReport:
    """Check every edge against the certified squared stretch bound
    n * sum (j**eps - (j+1)**eps)**2."""
    eps_obj = as_epsilon(eps)
    n = dimension(g, hs)
    bound = lipschitz_bound(n, eps_obj, series_terms)
    X = _embedding_matrix(g, hs, basepoint, eps_obj, weights)

    worst = math.inf
    worst_pair = None
    if g.edges:
        E = np.asarray(g.edges, dtype=np.int64)
        step = 1024
        for lo in range(0, len(E), step):
            blk = E[lo:lo + step]
            diff = X[blk[:, 0]] - X[blk[:, 1]]
            obs = np.einsum("ij,ij->i", diff, diff)
            i = int(np.argmax(obs))
            margin = bound - float(obs[i])
            if margin < worst:
                worst = margin
                worst_pair = (int(blk[i, 0]), int(blk[i, 1]))
    if worst_pair is None:
        worst = bound
    return BoundReport(worst >= -MARGIN_TOLERANCE, worst_pair, worst,
                       len(g.edges))


def verify_fellow_traveler(g: MedianGraph, hs: HyperplaneSet, basepoint: int,
                           *, weights: Optional[np.ndarray] = None
                           ) -> BoundReport:
    """Check that weights of adjacent vertices differ by at most 1 on
    every hyperplane separating both endpoints from the basepoint.

    Margins are integers 1 - |difference|; the report is exact.  Edges
    with no hyperplane in both supports are vacuous and cannot be the
    worst pair.
    """
    W = weights if weights is not None else weight_matrix(g, hs, basepoint)
    worst = math.inf
    worst_pair = None
    if g.edges:
        E = np.asarray(g.edges, dtype=np.int64)
        step = 1024
        for lo in range(0, len(E), step):
            blk = E[lo:lo + step]
            Wu = W[blk[:, 0]]
            Wv = W[blk[:, 1]]
            shared = (Wu > 0) & (Wv > 0)
            gaps = np.where(shared, np.abs(Wu - Wv), -1)
            per_edge = gaps.max(axis=1)
            i = int(np.argmax(per_edge))
            if per_edge[i] < 0:
                continue
            margin = 1.0 - float(per_edge[i])
            if margin < worst:
                worst = margin
                worst_pair = (int(blk[i, 0]), int(blk[i, 1]))
    if worst_pair is None:
        worst = 1.0
    return BoundReport(worst >= -MARGIN_TOLERANCE, worst_pair, float(worst),
                       len(g.edges))


def verify_crossing_once(g: MedianGraph, hs: HyperplaneSet, *,
                         sample_pairs: int = 10_000, seed: int = 0,
                         identity_limit: int = 2000,
                         distances: Optional[DistanceCache] = None
                         ) -> BoundReport:
    """Two facts about geodesics and hyperplanes.

    First, d1(u, v) equals the number of separating hyperplanes: checked
    on every pair when the graph has at most identity_limit vertices,
    else on the sampled pairs.  Second, a BFS geodesic for each sampled
    pair crosses no hyperplane twice.  Margins: negative absolute
    distance mismatch for the identity, 1 - max crossings per hyperplane
    for the geodesics; both are 0 exactly when everything holds.
    """
    V = g.vertex_count
    dcache = distances if distances is not None else DistanceCache(g)
    signatures = hs.signatures
    worst = 0.0
    worst_pair = None
    checked = 0

    if V <= identity_limit:
        for u in range(V - 1):
            row = dcache.row(u)
            sig_u = signatures[u]
            for v in range(u + 1, V):
                checked += 1
                mismatch = abs(int(row[v]) -
                               (sig_u ^ signatures[v]).bit_count())
                if mismatch:
                    margin = -float(mismatch)
                    if margin < worst:
                        worst = margin
                        worst_pair = (u, v)

    rng = random.Random(seed)
    parents: Dict[int, list] = {}
    for _ in range(sample_pairs):
        u = rng.randrange(V)
        v = rng.randrange(V)
        if u == v:
            continue
        checked += 1
        par = parents.get(u)
        if par is None:
            par = bfs_parents(g, u)
            parents[u] = par
        if V > identity_limit:
            mismatch = abs(int(dcache.row(u)[v]) -
                           (signatures[u] ^ signatures[v]).bit_count())
            if mismatch:
                margin = -float(mismatch)
                if margin < worst:
                    worst = margin
                    worst_pair = (u, v)
        crossings = Counter()
        x = v
        while x != u:
            p = par[x]
            crossings[hs.class_of_edge[g.edge_id(x, p)]] += 1
            x = p
        top = max(crossings.values())
        if top > 1:
            margin = 1.0 - top
            if margin < worst:
                worst = margin
                worst_pair = (u, v)
    return BoundReport(worst >= -MARGIN_TOLERANCE, worst_pair, worst, checked)


def verify_packing_inequalities(n_max: int = 6, index_max: int = 64,
                                eps_values: Optional[Iterable[float]] = None
                                ) -> SweepReport:
    """Numerical sweep of the two packing inequalities.

    With at most n hyperplanes per weight level, the cheapest way to
    spend M = k*n + m positive integer weights is n each of 1..k plus m
    of k+1, and the inequalities compare that cost with the averaged
    power sum:

      n * i**(2e)       >= (1/n) * sum_{j=(i-1)n+1..in} j**(2e)
      m * (k+1)**(2e)   >= (1/n) * sum_{j=kn+1..kn+m}   j**(2e)

    Strict inequality is required except in the degenerate cases where
    both sides coincide (n = 1 in the first, m = 0 in the second).
    """
    if eps_values is None:
        eps_values = [e.value for e in DEFAULT_EPS_GRID]
    violations = []
    cases = 0
    for e in eps_values:
        p = 2.0 * float(e)
        for n in range(1, n_max + 1):
            for i in range(1, index_max + 1):
                cases += 1
                lhs = n * i ** p
                rhs = sum(j ** p for j in range((i - 1) * n + 1,
                                                i * n + 1)) / n
                ok = (abs(lhs - rhs) <= 1e-9) if n == 1 else (lhs > rhs)
                if not ok:
                    violations.append(("full_block", e, n, i, lhs, rhs))
            for k in range(1, index_max + 1):
                for m in range(0, n):
                    cases += 1
                    lhs = m * (k + 1) ** p
                    rhs = sum(j ** p for j in range(k * n + 1,
                                                    k * n + m + 1)) / n
                    ok = (abs(lhs - rhs) <= 1e-9) if m == 0 else (lhs > rhs)
                    if not ok:
                        violations.append(("remainder", e, n, k, m, lhs, rhs))
    return SweepReport(not violations, tuple(violations), cases)
