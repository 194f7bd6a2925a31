"""Median graphs, hyperplanes, normal cube paths, and Hilbert-space
embeddings with controlled compression.

The package builds finite median graphs (the edge skeletons of cube
complexes), extracts their hyperplane structure, walks normal cube paths
to a basepoint, and uses the crossing order those paths induce to weight
a characteristic-function embedding so that its distortion can be both
bounded above per edge and below polynomially in the graph distance.
"""

from .analysis import (
    BoundReport,
    SweepReport,
    CompressionProfile,
    DistanceCache,
    ExponentFit,
    compression_profile,
    default_radii,
    fit_exponent,
    verify_packing_inequalities,
    verify_crossing_once,
    verify_fellow_traveler,
    verify_lipschitz,
    verify_lower_bound,
    weight_matrix,
)
from .embedding import (
    DEFAULT_EPS_GRID,
    Epsilon,
    SparseVector,
    as_epsilon,
    embed_eps,
    embed_unweighted,
    hilbert_distance,
    lipschitz_bound,
    squared_distance,
)
from .errors import (
    CubeComplexError,
    DisconnectedGraph,
    DuplicateEdge,
    HalfspaceViolation,
    InsufficientData,
    LoopEdge,
    MedianViolation,
    NonCrossingPair,
    NoSuchCube,
    ParseError,
    RadiusExceedsDiameter,
    SchemaError,
    SpecTooLarge,
)
from .generators import (
    GeneratorSpec,
    generate,
    grid,
    path,
    product,
    random_tree,
    spec_from_dict,
    spec_to_dict,
    staircase,
    tree,
)
from .io import load_graph, save_graph, save_profile, save_report
from .median import (
    HyperplaneSet,
    MedianGraph,
    ValidationReport,
    bfs_distances,
    build_graph,
    compute_hyperplanes,
    d1,
    dimension,
    interval,
    median,
    separates,
    separating_set,
    separation_count,
    validate_median,
)
from .normalpaths import (
    Cube,
    CubePath,
    WeightCache,
    WeightMap,
    adjacent_separating,
    cross_cube,
    normal_cube_path,
    star_vertices,
    verify_normality,
    weight_map,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # graphs and hyperplanes
    "MedianGraph", "ValidationReport", "HyperplaneSet",
    "build_graph", "validate_median", "compute_hyperplanes",
    "bfs_distances", "d1", "interval", "median",
    "separates", "separating_set", "separation_count", "dimension",
    # generators
    "GeneratorSpec", "generate", "spec_from_dict", "spec_to_dict",
    "path", "grid", "tree", "product", "staircase", "random_tree",
    # normal cube paths
    "Cube", "CubePath", "WeightMap", "WeightCache",
    "adjacent_separating", "cross_cube", "normal_cube_path",
    "star_vertices", "verify_normality", "weight_map",
    # embeddings
    "Epsilon", "DEFAULT_EPS_GRID", "SparseVector", "as_epsilon",
    "embed_unweighted", "embed_eps", "squared_distance",
    "hilbert_distance", "lipschitz_bound",
    # analysis
    "CompressionProfile", "ExponentFit", "BoundReport", "SweepReport",
    "DistanceCache", "compression_profile", "default_radii",
    "fit_exponent", "weight_matrix", "verify_lower_bound", "verify_lipschitz",
    "verify_fellow_traveler", "verify_crossing_once",
    "verify_packing_inequalities",
    # io
    "load_graph", "save_graph", "save_profile", "save_report",
    # errors
    "CubeComplexError", "LoopEdge", "DuplicateEdge", "DisconnectedGraph",
    "MedianViolation", "HalfspaceViolation", "NonCrossingPair",
    "NoSuchCube", "SpecTooLarge", "RadiusExceedsDiameter",
    "InsufficientData", "ParseError", "SchemaError",
]
