"""Hilbert-space embeddings of median graphs.

Each vertex is sent to a finitely supported vector indexed by
hyperplanes.  The unweighted embedding is the characteristic vector of
the hyperplanes separating the vertex from a basepoint; squared
distances then count separating hyperplanes exactly, so the embedding is
an isometry onto its image with the square-root metric.  The weighted
embedding raises the normal-path weight of each separating hyperplane to
a power eps in (0, 1/2), trading the exact isometry for polynomial
distortion bounds with exponent 1/2 + eps.

Floating point note: distances are IEEE double; comparisons elsewhere
use a relative tolerance of 1e-9, while exact identities are checked on
integers (counts), never on floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Union

import numpy as np

from .median import HyperplaneSet, MedianGraph, separating_set
from .normalpaths import WeightCache, weight_map

__all__ = [
    "Epsilon",
    "SparseVector",
    "DEFAULT_EPS_GRID",
    "as_epsilon",
    "embed_unweighted",
    "embed_eps",
    "hilbert_distance",
    "squared_distance",
    "lipschitz_bound",
]


@dataclass(frozen=True)
class Epsilon:
    """A compression exponent parameter, constrained to (0, 1/2).

    The open upper bound matters: the Lipschitz series diverges at 1/2.
    """

    value: float

    def __post_init__(self):
        v = self.value
        if not (0.0 < v < 0.5):
            raise ValueError(f"eps must lie strictly between 0 and 1/2, got {v}")

    def __float__(self):
        return self.value


EpsilonLike = Union[Epsilon, float]

DEFAULT_EPS_GRID = (Epsilon(0.1), Epsilon(0.2), Epsilon(0.3), Epsilon(0.4),
                    Epsilon(0.45))


def as_epsilon(e: EpsilonLike) -> Epsilon:
    return e if isinstance(e, Epsilon) else Epsilon(float(e))


@dataclass(frozen=True)
class SparseVector:
    """Finitely supported vector over hyperplane ids.

    entries never stores zeros and all coordinates are positive; treat it
    as read-only.
    """

    entries: Mapping[int, float]

    def norm(self) -> float:
        return math.sqrt(sum(x * x for x in self.entries.values()))


def embed_unweighted(g: MedianGraph, hs: HyperplaneSet, s: int,
                     basepoint: int) -> SparseVector:
    """Characteristic vector of the hyperplanes separating s from the
    basepoint.  The basepoint itself maps to the zero vector."""
    return SparseVector({h: 1.0 for h in separating_set(hs, s, basepoint)})


def embed_eps(g: MedianGraph, hs: HyperplaneSet, s: int, basepoint: int,
              eps: EpsilonLike,
              cache: Optional[WeightCache] = None) -> SparseVector:
    """Weighted embedding: coordinate w**eps on each hyperplane with
    normal-path weight w >= 1, nothing elsewhere (0**eps is taken as 0,
    matching the empty support)."""
    e = as_epsilon(eps).value
    if cache is not None:
        if cache.basepoint != basepoint:
            raise ValueError(
                f"cache is anchored at basepoint {cache.basepoint},"
                f" not {basepoint}")
        weights = cache.weights(s)
    else:
        weights = weight_map(g, hs, s, basepoint).weights
    return SparseVector({h: w ** e for (h, w) in weights.items()})


def squared_distance(x: SparseVector, y: SparseVector) -> float:
    """Squared Hilbert distance over the union of supports."""
    a = x.entries
    b = y.entries
    total = 0.0
    for h, va in a.items():
        diff = va - b.get(h, 0.0)
        total += diff * diff
    for h, vb in b.items():
        if h not in a:
            total += vb * vb
    return total


def hilbert_distance(x: SparseVector, y: SparseVector) -> float:
    return math.sqrt(squared_distance(x, y))


def lipschitz_bound(n: int, eps: EpsilonLike, partial_terms: int = 10 ** 6) -> float:
    """Certified upper bound for the squared edge stretch of the weighted
    embedding on a complex of dimension n.

    Adjacent vertices have weights differing by at most 1 and at most n
    hyperplanes share any weight, so the squared edge distance is at most
    n * sum_{j>=0} (j**eps - (j+1)**eps)**2.  The first partial_terms
    terms are summed directly; the remainder is covered by the integral
    tail eps**2 * (J-1)**(2*eps-1) / (1-2*eps), valid because each
    increment is at most eps * j**(eps-1).  With a single term the tail
    formula degenerates and +inf is returned, still a correct bound.
    """
    if n < 1:
        raise ValueError("dimension must be at least 1")
    if partial_terms < 1:
        raise ValueError("partial_terms must be at least 1")
    e = as_epsilon(eps).value
    if partial_terms == 1:
        return math.inf
    j = np.arange(partial_terms, dtype=np.float64)
    increments = np.power(j, e) - np.power(j + 1.0, e)
    head = float(np.dot(increments, increments))
    tail = e * e * (partial_terms - 1.0) ** (2.0 * e - 1.0) / (1.0 - 2.0 * e)
    return n * (head + tail)
