"""Exception hierarchy shared by all hamcube modules."""

from __future__ import annotations


class HamcubeError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(HamcubeError):
    """Cube dimension outside the supported range."""


class EdgeOutOfRange(HamcubeError):
    """Edge refers to a vertex or direction that does not exist in the cube."""


class InvalidEdge(HamcubeError):
    """Vertex pair is not a hypercube edge (endpoints differ in != 1 bit)."""


class NotDisjoint(HamcubeError):
    """Two faulty edges share a vertex."""

    def __init__(self, vertex, first, second):
        self.vertex = vertex
        self.first = first
        self.second = second
        super().__init__(
            f"faulty edges {first} and {second} share vertex {vertex}"
        )


class WrongDimension(HamcubeError):
    """Operation invoked on a cube dimension it is not defined for."""


class PreconditionViolated(HamcubeError):
    """Documented precondition of a construction does not hold."""


class NotHamiltonian(HamcubeError):
    """No Hamiltonian cycle exists; carries the blocking certificate."""

    def __init__(self, certificate, message=None):
        self.certificate = certificate
        super().__init__(message or f"cube is not Hamiltonian: {certificate}")


class NoDimensionFound(HamcubeError):
    """Partition-dimension scan failed.

    Unreachable under the documented preconditions; raising it signals an
    implementation bug, never an unlucky input.
    """


class DimensionTooLarge(HamcubeError):
    """Exhaustive search requested above the configured dimension bound."""


class SearchBudgetExceeded(HamcubeError):
    """Exhaustive search ran out of its node-expansion budget.

    This is an explicit refusal to answer, never a false negative.
    """


class ConstraintUnsatisfiable(HamcubeError):
    """Random instance generator could not meet the requested constraint."""


class ParseError(HamcubeError):
    """Malformed fault file or certificate file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConstructionError(HamcubeError):
    """A constructed route failed its own verification (internal bug)."""
