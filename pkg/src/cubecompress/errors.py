"""Exception types shared across the package."""


class CubeComplexError(Exception):
    """Base class for all structural and numerical errors raised here."""


class LoopEdge(CubeComplexError):
    """An edge joins a vertex to itself."""


class DuplicateEdge(CubeComplexError):
    """The same unordered vertex pair appears twice in an edge list."""


class DisconnectedGraph(CubeComplexError):
    """The input graph is not connected."""


class MedianViolation(CubeComplexError):
    """A vertex triple has zero or several medians."""


class HalfspaceViolation(CubeComplexError):
    """Removing a hyperplane's edges does not split the graph into two
    consistent half-spaces.  Signals non-median input that slipped past
    validation."""


class NonCrossingPair(CubeComplexError):
    """Two hyperplanes expected to span a square do not cross."""


class NoSuchCube(CubeComplexError):
    """A requested set of hyperplanes does not span a cube at the given
    base vertex."""


class SpecTooLarge(CubeComplexError):
    """A generator request would exceed the configured vertex budget."""


class RadiusExceedsDiameter(CubeComplexError):
    """A profile radius is larger than any available pair distance."""


class InsufficientData(CubeComplexError):
    """Too few usable radii to fit a log-log exponent."""


class ParseError(CubeComplexError):
    """Input file is not syntactically valid.

    Carries the 1-based line number when known.
    """

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class SchemaError(CubeComplexError):
    """Input parses but does not match the expected shape."""
