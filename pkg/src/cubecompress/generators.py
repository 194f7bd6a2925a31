"""Deterministic builders for standard median-graph families.

Every generator returns a graph that has already passed the median check
(exhaustively up to 500 vertices, sampled above), so downstream code can
rely on median structure.  Vertex labelings are fixed and documented per
family so results are reproducible byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Tuple

from .errors import MedianViolation, SchemaError, SpecTooLarge
from .median import MedianGraph, build_graph, validate_median

__all__ = [
    "GeneratorSpec",
    "spec_from_dict",
    "spec_to_dict",
    "predicted_vertex_count",
    "generate",
    "path",
    "grid",
    "tree",
    "product",
    "staircase",
    "random_tree",
]

DEFAULT_MAX_VERTICES = 1_000_000

_KINDS = ("path", "grid", "tree", "product", "staircase", "random_tree")


@dataclass(frozen=True)
class GeneratorSpec:
    """A recipe for one instance: a kind plus its parameters.

    Parameters by kind:
      path        length (edge count)
      grid        sides (vertices per axis)
      tree        arity, depth
      product     factors (exactly two child specs)
      staircase   steps
      random_tree n, seed
    """

    kind: str
    length: Optional[int] = None
    sides: Optional[Tuple[int, ...]] = None
    arity: Optional[int] = None
    depth: Optional[int] = None
    steps: Optional[int] = None
    n: Optional[int] = None
    seed: Optional[int] = None
    factors: Optional[Tuple["GeneratorSpec", ...]] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise SchemaError(f"unknown generator kind {self.kind!r}")
        need = {
            "path": ("length",),
            "grid": ("sides",),
            "tree": ("arity", "depth"),
            "product": ("factors",),
            "staircase": ("steps",),
            "random_tree": ("n", "seed"),
        }[self.kind]
        for name in need:
            if getattr(self, name) is None:
                raise SchemaError(f"{self.kind} spec needs {name!r}")
        if self.kind == "product" and len(self.factors) != 2:
            raise SchemaError("product takes exactly two factor specs")


def spec_from_dict(d) -> GeneratorSpec:
    """Build a GeneratorSpec from plain JSON data."""
    if not isinstance(d, dict):
        raise SchemaError("generator spec must be an object")
    if "kind" not in d:
        raise SchemaError("generator spec needs a 'kind' field")
    kind = d["kind"]
    try:
        if kind == "path":
            return GeneratorSpec("path", length=int(d["length"]))
        if kind == "grid":
            sides = tuple(int(s) for s in d["sides"])
            return GeneratorSpec("grid", sides=sides)
        if kind == "tree":
            return GeneratorSpec("tree", arity=int(d["arity"]),
                                 depth=int(d["depth"]))
        if kind == "product":
            factors = tuple(spec_from_dict(f) for f in d["factors"])
            return GeneratorSpec("product", factors=factors)
        if kind == "staircase":
            return GeneratorSpec("staircase", steps=int(d["steps"]))
        if kind == "random_tree":
            return GeneratorSpec("random_tree", n=int(d["n"]),
                                 seed=int(d["seed"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad parameters for {kind!r} spec: {exc}") from exc
    raise SchemaError(f"unknown generator kind {kind!r}")


def spec_to_dict(spec: GeneratorSpec) -> dict:
    if spec.kind == "path":
        return {"kind": "path", "length": spec.length}
    if spec.kind == "grid":
        return {"kind": "grid", "sides": list(spec.sides)}
    if spec.kind == "tree":
        return {"kind": "tree", "arity": spec.arity, "depth": spec.depth}
    if spec.kind == "product":
        return {"kind": "product",
                "factors": [spec_to_dict(f) for f in spec.factors]}
    if spec.kind == "staircase":
        return {"kind": "staircase", "steps": spec.steps}
    return {"kind": "random_tree", "n": spec.n, "seed": spec.seed}


def predicted_vertex_count(spec: GeneratorSpec) -> int:
    """Vertex count a generator spec produces, computed without building."""
    if spec.kind == "path":
        _positive(spec.length, "length")
        return spec.length + 1
    if spec.kind == "grid":
        if not spec.sides:
            raise SchemaError("grid needs at least one side")
        total = 1
        for s in spec.sides:
            _positive(s, "side")
            total *= s
        return total
    if spec.kind == "tree":
        _positive(spec.arity, "arity")
        if spec.depth < 0:
            raise SchemaError("depth must be nonnegative")
        if spec.arity == 1:
            return spec.depth + 1
        return (spec.arity ** (spec.depth + 1) - 1) // (spec.arity - 1)
    if spec.kind == "product":
        a, b = spec.factors
        return predicted_vertex_count(a) * predicted_vertex_count(b)
    if spec.kind == "staircase":
        _positive(spec.steps, "steps")
        s = spec.steps
        return sum(min(x + 1, s) + 1 for x in range(s + 1))
    _positive(spec.n, "n")
    return spec.n


def _positive(value, name):
    if value is None or value < 1:
        raise SchemaError(f"{name} must be a positive integer")


def generate(spec: GeneratorSpec, max_vertices: int = DEFAULT_MAX_VERTICES,
             exhaustive_limit: int = 500, sample_count: int = 10_000,
             validation_seed: int = 0) -> MedianGraph:
    """Build the instance described by spec and validate it.

    Raises SpecTooLarge before building anything when the predicted
    vertex count exceeds max_vertices.  The returned graph has passed
    validate_median (exhaustive when small, sampled above
    exhaustive_limit).
    """
    count = predicted_vertex_count(spec)
    if count > max_vertices:
        raise SpecTooLarge(
            f"{spec.kind} spec would produce {count} vertices"
            f" (budget {max_vertices})")
    g = _build(spec)
    report = validate_median(g, exhaustive_limit=exhaustive_limit,
                             sample_count=sample_count, seed=validation_seed)
    if not report.passed:
        raise MedianViolation(
            f"generated {spec.kind} instance failed the median check at"
            f" triple {report.failure_witness}")
    return g


def _build(spec: GeneratorSpec) -> MedianGraph:
    if spec.kind == "path":
        return path(spec.length)
    if spec.kind == "grid":
        return grid(spec.sides)
    if spec.kind == "tree":
        return tree(spec.arity, spec.depth)
    if spec.kind == "product":
        return product(_build(spec.factors[0]), _build(spec.factors[1]))
    if spec.kind == "staircase":
        return staircase(spec.steps)
    return random_tree(spec.n, spec.seed)


def path(length: int) -> MedianGraph:
    """Path with `length` edges on vertices 0..length."""
    _positive(length, "length")
    return build_graph(length + 1, [(i, i + 1) for i in range(length)])


def grid(sides) -> MedianGraph:
    """Axis-aligned grid; sides gives the vertex count per axis.

    A coordinate (c_0, ..., c_{k-1}) gets the row-major label
    sum(c_i * stride_i) with the last axis varying fastest, so
    grid([a, b]) labels (x, y) as x*b + y.
    """
    sides = tuple(int(s) for s in sides)
    if not sides:
        raise SchemaError("grid needs at least one side")
    for s in sides:
        _positive(s, "side")
    total = 1
    for s in sides:
        total *= s
    strides = []
    acc = 1
    for s in reversed(sides):
        strides.append(acc)
        acc *= s
    strides.reverse()

    edges = []
    coord = [0] * len(sides)
    for label in range(total):
        for axis, s in enumerate(sides):
            if coord[axis] + 1 < s:
                edges.append((label, label + strides[axis]))
        for axis in range(len(sides) - 1, -1, -1):
            coord[axis] += 1
            if coord[axis] < sides[axis]:
                break
            coord[axis] = 0
    return build_graph(total, edges)


def tree(arity: int, depth: int) -> MedianGraph:
    """Complete rooted tree, root 0, children labeled in BFS order."""
    _positive(arity, "arity")
    if depth < 0:
        raise SchemaError("depth must be nonnegative")
    edges = []
    level = [0]
    nxt = 1
    for _ in range(depth):
        new_level = []
        for parent in level:
            for _ in range(arity):
                edges.append((parent, nxt))
                new_level.append(nxt)
                nxt += 1
        level = new_level
    return build_graph(nxt, edges)


def product(a: MedianGraph, b: MedianGraph) -> MedianGraph:
    """Cartesian product; the pair (i, j) gets label i * |b| + j.

    The product of median graphs is median, and cube dimensions add.
    """
    nb = b.vertex_count
    edges = []
    for i in range(a.vertex_count):
        base = i * nb
        for (u, v) in b.edges:
            edges.append((base + u, base + v))
    for (u, v) in a.edges:
        for j in range(nb):
            edges.append((u * nb + j, v * nb + j))
    return build_graph(a.vertex_count * nb, edges)


def staircase(steps: int) -> MedianGraph:
    """Staircase region of the grid: lattice points (x, y) with
    0 <= x <= steps, 0 <= y <= steps and y <= x + 1, with grid edges.

    Vertices are labeled in lexicographic (x, y) order.
    """
    _positive(steps, "steps")
    points = [(x, y) for x in range(steps + 1)
              for y in range(min(x + 1, steps) + 1)]
    label = {p: i for i, p in enumerate(points)}
    edges = []
    for (x, y) in points:
        if (x + 1, y) in label:
            edges.append((label[(x, y)], label[(x + 1, y)]))
        if (x, y + 1) in label:
            edges.append((label[(x, y)], label[(x, y + 1)]))
    return build_graph(len(points), edges)


def random_tree(n: int, seed: int) -> MedianGraph:
    """Uniform attachment tree: vertex i joins a uniformly random earlier
    vertex.  Deterministic in seed (random.Random(seed).randrange)."""
    _positive(n, "n")
    rng = random.Random(seed)
    edges = [(rng.randrange(i), i) for i in range(1, n)]
    return build_graph(n, edges)
