"""Exception types shared across the package."""


class DomainError(ValueError):
    """A mathematical precondition was violated (reducible input, divergent closure, ...)."""


class DimensionMismatchError(DomainError):
    """Operand shapes are incompatible."""


class ReducibleMatrixError(DomainError):
    """The operation needs an irreducible matrix (strongly connected digraph)."""


class EnumerationCapError(DomainError):
    """Brute-force tree enumeration was asked for a graph above the node cap."""


class MatrixParseError(ValueError):
    """A matrix file or payload could not be parsed into a valid matrix."""
