#!/usr/bin/env python3
"""Exception hierarchy for orf-spectral.

Two families, each with its own CLI exit status:
ValidationError for rejected input (exit 2) and NumericalError for
computations that cannot be completed reliably (exit 3).
"""


class OrfError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class ValidationError(OrfError, ValueError):
    """Input rejected before any numerical work (margins, lengths, schema)."""

    exit_code = 2


class NumericalError(OrfError, ArithmeticError):
    """A computation failed or would produce unreliable output."""

    exit_code = 3


class ConditioningError(NumericalError):
    """Matrix to invert has a condition estimate above the configured limit."""


class PoleEvaluationError(NumericalError):
    """Evaluation point lies within tolerance of a pole."""

    def __init__(self, message: str, pole: complex | None = None, index: int | None = None):
        super().__init__(message)
        self.pole = pole
        self.index = index


class BreakdownError(NumericalError):
    """Gram-Schmidt lost rank before the requested order."""

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


class NodeCollisionError(NumericalError):
    """Two quadrature nodes coincide within tolerance."""


class IndefinitePencilError(NumericalError):
    """T - zS is singular for every z."""


class MassAtInfinityError(NumericalError):
    """Eigenvalue 1 blocks a real-line inverse transform; infinity carries mass."""


class ExcludedBoundaryError(NumericalError):
    """Real-line PORF parameter places a node at infinity.

    Pass allow_infinity=True to rl_quadrature to compute the nodes through the
    circle-side unitary representation instead.
    """

    def __init__(self, message: str, excluded: complex):
        super().__init__(message)
        self.excluded = excluded


def error_payload(error: OrfError) -> dict[str, object]:
    """Build the machine-readable error body written by the CLI.

    Args:
        error: The library error that ended the command.

    Returns:
        Dictionary with error message, type name and exit code.
    """
    return {
        "error": str(error),
        "type": type(error).__name__,
        "exitCode": error.exit_code,
    }
