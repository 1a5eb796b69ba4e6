"""Exception types shared across the package."""


class CutvolError(Exception):
    """Base class for all package-specific errors."""


class UnsupportedFamilyError(CutvolError, ValueError):
    """Raised when an operation requires a recognized sparse graph family."""


class UnsupportedGraphError(CutvolError, ValueError):
    """Raised when elliptope membership is asked for a non-completable graph."""


class SizeLimitError(CutvolError, ValueError):
    """Raised when an enumeration or recursion would exceed its size cap."""


class UnboundedPolytopeError(CutvolError, ValueError):
    """Raised when a polytope expected to be bounded is not."""


class EmptyPolytopeError(CutvolError, ValueError):
    """Raised when an inequality system has no feasible point."""


class InvalidStartError(CutvolError, ValueError):
    """Raised when a random walk is started from a non-interior point."""


class DegenerateFitError(CutvolError, ValueError):
    """Raised when a least-squares fit is rank deficient."""


class ParseError(CutvolError, ValueError):
    """Polyhedron or graph file syntax error, with a 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line
