#!/usr/bin/env python3
"""Operator Möbius transformations on finite matrices.

ζ_A and its inverse ζ̃_A for a diagonal parameter A, in both domains:

circle: ζ_A(T) = η_A (1 − TA†)⁻¹ (T − A) η_A⁻¹,
        ζ̃_A(S) = η_A⁻¹ (S + A) (1 + A†S)⁻¹ η_A,      η_A = √(1 − AA†)
line:   ζ_A(T) = η_A (T − A†)⁻¹ (T − A) η_A⁻¹,
        ζ̃_A(S) = η_A⁻¹ (A − A†S) (1 − S)⁻¹ η_A,      η_A = √(Im A)

Every inversion goes through an LU factorization guarded by a condition
estimate, so ill-posed transforms fail loudly.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

try:
    from .config import DEFAULT_CONFIG, debug_log
    from .errors import ConditioningError, MassAtInfinityError, ValidationError
    from .moebius import DEFAULT_MARGIN, Domain, PoleSeq
except ImportError:
    from config import DEFAULT_CONFIG, debug_log
    from errors import ConditioningError, MassAtInfinityError, ValidationError
    from moebius import DEFAULT_MARGIN, Domain, PoleSeq


CONDITION_LIMIT = DEFAULT_CONFIG["conditionLimit"]
UNIT_TOLERANCE = DEFAULT_CONFIG["unitEigenvalueTolerance"]


@dataclass(frozen=True, eq=False)
class DiagParam:
    """Diagonal operator parameter 𝒜 = diag(α_0, α_1, ..., α_{n−1})."""

    diag: np.ndarray
    domain: Domain = Domain.CIRCLE
    margin: float = field(default=DEFAULT_MARGIN)

    def __post_init__(self) -> None:
        values = np.asarray(self.diag, dtype=complex).reshape(-1)
        object.__setattr__(self, "diag", values)
        if not np.all(np.isfinite(values)):
            raise ValidationError("diagonal parameter has non-finite entries")
        if self.domain is Domain.CIRCLE:
            worst = float(np.max(np.abs(values))) if values.size else 0.0
            if worst > 1.0 - self.margin:
                raise ValidationError(
                    f"diagonal entry of modulus {worst} violates the compactness margin "
                    f"{self.margin}"
                )
        else:
            lowest = float(np.min(values.imag)) if values.size else 1.0
            if lowest < self.margin:
                raise ValidationError(
                    f"diagonal entry with Im = {lowest} violates the compactness margin "
                    f"{self.margin}"
                )

    @classmethod
    def from_poles(cls, poles: PoleSeq, n: int) -> "DiagParam":
        """𝒜_n built from α_0..α_{n−1} of a pole sequence."""
        return cls(poles.with_base(n), poles.domain, poles.margin)

    @classmethod
    def scalar(cls, alpha: complex, n: int, domain: Domain = Domain.CIRCLE) -> "DiagParam":
        return cls(np.full(n, alpha, dtype=complex), domain)

    def __len__(self) -> int:
        return int(self.diag.size)

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.diag)

    def adjoint(self) -> "DiagParam":
        """A† (circle only; conjugation leaves the upper half plane)."""
        if self.domain is not Domain.CIRCLE:
            raise ValidationError("the adjoint of a line parameter is not a line parameter")
        return DiagParam(self.diag.conj(), self.domain, self.margin)


def _eta_entries(A: DiagParam) -> np.ndarray:
    if A.domain is Domain.CIRCLE:
        return np.sqrt(1.0 - np.abs(A.diag) ** 2)
    return np.sqrt(A.diag.imag)


def _check_square(A: DiagParam, T: np.ndarray, name: str) -> np.ndarray:
    T = np.asarray(T, dtype=complex)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise ValidationError(f"{name} must be a square matrix, got shape {T.shape}")
    if T.shape[0] != len(A):
        raise ValidationError(
            f"dimension mismatch: {name} is {T.shape[0]}x{T.shape[1]}, parameter has {len(A)}"
        )
    if not np.all(np.isfinite(T)):
        raise ValidationError(f"{name} has non-finite entries")
    return T


def lu_guarded(M: np.ndarray, what: str, condition_limit: float = CONDITION_LIMIT):
    """LU-factor M after checking its condition number.

    Raises:
        ConditioningError: If cond(M) exceeds condition_limit.
    """
    condition = np.linalg.cond(M)
    if not np.isfinite(condition) or condition > condition_limit:
        raise ConditioningError(
            f"{what} is numerically singular (condition {condition:.3e} > {condition_limit:.1e})"
        )
    return scipy.linalg.lu_factor(M)


def solve_left(M: np.ndarray, B: np.ndarray, what: str, condition_limit: float = CONDITION_LIMIT):
    """Return M⁻¹B."""
    return scipy.linalg.lu_solve(lu_guarded(M, what, condition_limit), B)


def solve_right(B: np.ndarray, M: np.ndarray, what: str, condition_limit: float = CONDITION_LIMIT):
    """Return BM⁻¹ by solving Mᵀ Xᵀ = Bᵀ."""
    return scipy.linalg.lu_solve(lu_guarded(M, what, condition_limit), B.T, trans=1).T


def op_eta(A: DiagParam) -> np.ndarray:
    """Return the positive diagonal matrix η_A.

    Examples:
        op_eta(diag(0, 0.5)) is diag(1, 0.8660254...).
    """
    return np.diag(_eta_entries(A)).astype(complex)


def conjugate_by_eta(A: DiagParam, T: np.ndarray) -> np.ndarray:
    """Return T_A = η_A⁻¹ T η_A.

    Raises:
        ValidationError: On dimension mismatch.
    """
    T = _check_square(A, T, "T")
    eta = _eta_entries(A)
    return (T / eta[:, None]) * eta[None, :]


def op_mobius_forward(
    A: DiagParam, T: np.ndarray, condition_limit: float = CONDITION_LIMIT
) -> np.ndarray:
    """Apply ζ_A to a matrix.

    Args:
        A: Diagonal parameter (its domain selects the circle or line map).
        T: Square matrix, a contraction on the circle or with Im T >= 0 on the line.
        condition_limit: Largest acceptable condition number of ϖ_A(T).

    Returns:
        ζ_A(T).

    Raises:
        ValidationError: On shape mismatch.
        ConditioningError: If ϖ_A(T) is numerically singular.
    """
    T = _check_square(A, T, "T")
    eta = _eta_entries(A)
    identity = np.eye(len(A), dtype=complex)
    if A.domain is Domain.CIRCLE:
        denominator = identity - T * A.diag.conj()[None, :]
    else:
        denominator = T - np.diag(A.diag.conj())
    numerator = T - np.diag(A.diag)
    core = solve_left(denominator, numerator, "varpi_A(T)", condition_limit)
    return (core * eta[:, None]) / eta[None, :]


def op_mobius_inverse(
    A: DiagParam,
    S: np.ndarray,
    condition_limit: float = CONDITION_LIMIT,
    unit_tolerance: float = UNIT_TOLERANCE,
) -> np.ndarray:
    """Apply ζ̃_A to a matrix.

    On the circle ζ̃_A = ζ_{−A}. On the line the map needs 1 ∉ σ(S); an
    eigenvalue within unit_tolerance of 1 means the represented measure has
    mass at infinity.

    Raises:
        ValidationError: On shape mismatch.
        ConditioningError: If ϖ̃_A(S) is numerically singular.
        MassAtInfinityError: Line domain, eigenvalue of S at 1.
    """
    S = _check_square(A, S, "S")
    eta = _eta_entries(A)
    identity = np.eye(len(A), dtype=complex)
    if A.domain is Domain.CIRCLE:
        numerator = S + np.diag(A.diag)
        denominator = identity + A.diag.conj()[:, None] * S
    else:
        distance = float(np.min(np.abs(np.linalg.eigvals(S) - 1.0))) if len(A) else np.inf
        if distance < unit_tolerance:
            debug_log("opmoebius", f"eigenvalue at distance {distance:.3e} from 1")
            raise MassAtInfinityError(
                f"S has an eigenvalue within {unit_tolerance:.1e} of 1 "
                f"(distance {distance:.3e}); infinity is a mass point, "
                "use the circle-side representation"
            )
        numerator = np.diag(A.diag) - A.diag.conj()[:, None] * S
        denominator = identity - S
    core = solve_right(numerator, denominator, "varpi~_A(S)", condition_limit)
    return (core / eta[:, None]) * eta[None, :]


def pair_factors(A: DiagParam, M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return (ϖ̃*_A(M), ϖ̃_A(M)), the pencil whose spectrum is that of ζ̃_A(M) up to η."""
    M = _check_square(A, M, "M")
    identity = np.eye(len(A), dtype=complex)
    if A.domain is Domain.CIRCLE:
        return M + np.diag(A.diag), identity + A.diag.conj()[:, None] * M
    return np.diag(A.diag) - A.diag.conj()[:, None] * M, identity - M
