"""File formats: graph JSON, profile CSV, report JSON.

A graph file is {"vertices": N, "edges": [[u, v], ...]}.  Profiles are
CSV with header r,rho,witness_u,witness_v.  All writers are
deterministic: keys sorted, floats via repr, newline-terminated.
"""

from __future__ import annotations

import csv
import dataclasses
import json
from typing import Any

from .analysis import BoundReport, SweepReport, CompressionProfile, ExponentFit
from .embedding import Epsilon
from .errors import ParseError, SchemaError
from .median import MedianGraph, ValidationReport, build_graph

__all__ = [
    "load_graph",
    "save_graph",
    "save_profile",
    "save_report",
    "to_jsonable",
]

PROFILE_HEADER = ("r", "rho", "witness_u", "witness_v")


def load_graph(path: str) -> MedianGraph:
    """Read a graph JSON file.

    Syntax problems raise ParseError carrying the line number; shape
    problems (wrong keys or types) raise SchemaError.  Structural edge
    errors from build_graph propagate unchanged.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc.msg} at line {exc.lineno}",
                         line=exc.lineno) from exc
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: top level must be an object")
    if "vertices" not in data or "edges" not in data:
        raise SchemaError(f"{path}: need 'vertices' and 'edges' fields")
    vertices = data["vertices"]
    edges = data["edges"]
    if not isinstance(vertices, int) or isinstance(vertices, bool):
        raise SchemaError(f"{path}: 'vertices' must be an integer")
    if not isinstance(edges, list):
        raise SchemaError(f"{path}: 'edges' must be a list")
    cleaned = []
    for i, e in enumerate(edges):
        if (not isinstance(e, list) or len(e) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool)
                           for x in e)):
            raise SchemaError(f"{path}: edge {i} must be a pair of integers")
        cleaned.append((e[0], e[1]))
    return build_graph(vertices, cleaned)


def save_graph(g: MedianGraph, path: str) -> None:
    data = {"vertices": g.vertex_count,
            "edges": [[u, v] for (u, v) in g.edges]}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, sort_keys=True, indent=2)
        fh.write("\n")


def save_profile(profile: CompressionProfile, path: str) -> None:
    """One CSV row per radius: r,rho,witness_u,witness_v."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PROFILE_HEADER)
        for r, rho, wit in zip(profile.radii, profile.rho,
                               profile.witness_pairs):
            u, v = wit if wit is not None else ("", "")
            writer.writerow([r, repr(float(rho)), u, v])


def to_jsonable(obj: Any) -> Any:
    """Recursively convert report objects to plain JSON data."""
    if isinstance(obj, Epsilon):
        return obj.value
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name))
                for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, float) and not (-1e308 < obj < 1e308):
        return None if obj != obj else repr(obj)
    if hasattr(obj, "item") and callable(obj.item):
        return obj.item()
    return obj


def save_report(report: Any, path: str) -> None:
    """Serialize any report structure as deterministic JSON."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_jsonable(report), fh, sort_keys=True, indent=2)
        fh.write("\n")
