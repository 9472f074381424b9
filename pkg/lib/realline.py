#!/usr/bin/env python3
"""Orthogonal rational functions on the extended real line.

The Cayley transform ζ(z) = (z − i)/(z + i) carries R̄ onto T with ∞ ↦ 1.
Line poles α_n in the upper half plane become circle poles β_n = ζ(α_n), and
with ξ_n = (1 − β_n)/|1 − β_n| the parameters convert as

    b_n = ξ_0² ξ_1² ⋯ ξ_{n−1}² a_n

The unitary ζ̃_𝓑(ξ 𝒞_n ξ) is the Cayley image of the self-adjoint line
representation and exists even when the line one does not (a mass point at
infinity shows up as its eigenvalue 1), so every path touching ∞ goes through it.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

try:
    from .config import DEFAULT_CONFIG, debug_log
    from .errors import ExcludedBoundaryError, NumericalError, ValidationError
    from .matrices import Family, cmv_matrix
    from .measures import DiscreteMeasure
    from .moebius import INFINITY, POLE_PROXIMITY, CPoint, Domain, PoleSeq, as_point
    from .moebius import zeta as scalar_zeta
    from .moebius import zeta_inverse as scalar_zeta_inverse
    from .opmoebius import CONDITION_LIMIT, DiagParam, op_mobius_forward, op_mobius_inverse
    from .orfcore import POLE_TOLERANCE, ParamSeq, eval_orf, porf_u
    from .spectral import (
        MAX_ORDER,
        NODE_COLLISION,
        Quadrature,
        boundary_quadrature,
        eigensolve,
        orf_weights,
    )
except ImportError:
    from config import DEFAULT_CONFIG, debug_log
    from errors import ExcludedBoundaryError, NumericalError, ValidationError
    from matrices import Family, cmv_matrix
    from measures import DiscreteMeasure
    from moebius import INFINITY, POLE_PROXIMITY, CPoint, Domain, PoleSeq, as_point
    from moebius import zeta as scalar_zeta
    from moebius import zeta_inverse as scalar_zeta_inverse
    from opmoebius import CONDITION_LIMIT, DiagParam, op_mobius_forward, op_mobius_inverse
    from orfcore import POLE_TOLERANCE, ParamSeq, eval_orf, porf_u
    from spectral import (
        MAX_ORDER,
        NODE_COLLISION,
        Quadrature,
        boundary_quadrature,
        eigensolve,
        orf_weights,
    )


UNIT_TOLERANCE = DEFAULT_CONFIG["unitEigenvalueTolerance"]
EXCLUDED_TOLERANCE = 1e-10


class Direction(Enum):
    FORWARD = "forward"
    INVERSE = "inverse"


@dataclass(frozen=True, eq=False)
class LineConversion:
    """Circle data equivalent to a line parameter/pole sequence.

    Arrays are indexed from 0; entry k of xi, gamma and lambda_ is ξ_k, γ_k, λ_k.
    """

    beta: PoleSeq  # β_k = ζ(α_k) on the circle
    b: ParamSeq
    xi: np.ndarray
    gamma: np.ndarray
    lambda_: np.ndarray

    def xi_matrix(self, n: int) -> np.ndarray:
        return np.diag(self.xi[:n])

    def gamma_matrix(self, n: int) -> np.ndarray:
        return np.diag(self.gamma[:n])

    def lambda_matrix(self, n: int) -> np.ndarray:
        return np.diag(self.lambda_[:n])

    def boundary_factor(self, n: int) -> complex:
        """ξ_0²⋯ξ_{n−1}², the factor taking a line boundary u at order n to the circle."""
        return complex(np.prod(self.xi[:n] ** 2))


@dataclass(frozen=True)
class MassAtInfinity:
    """Result of mass_at_infinity_check."""

    result: bool
    margin: float  # distance from 1 of the nearest eigenvalue


def _check_upper(alpha: complex) -> complex:
    alpha = complex(alpha)
    if alpha.imag <= 0.0:
        raise ValidationError(f"alpha = {alpha} is not in the upper half plane")
    return alpha


def rl_mobius(
    alpha: complex,
    z: "complex | CPoint",
    direction: Direction | str = Direction.FORWARD,
    proximity: float = POLE_PROXIMITY,
) -> CPoint:
    """Evaluate ζ_α(z) = (z − α)/(z − ᾱ) or its inverse ζ̃_α(w) = (α − ᾱw)/(1 − w).

    Forward maps R̄ onto T (∞ ↦ 1) and the upper half plane onto the disk.
    Points within proximity of the pole (ᾱ forward, 1 inverse) map to ∞.

    Raises:
        ValidationError: If Im alpha <= 0.
    """
    alpha = _check_upper(alpha)
    point = as_point(z)
    if Direction(direction) is Direction.FORWARD:
        if point.at_infinity:
            return CPoint(1.0, 0.0)
        value = point.to_complex()
        if abs(value - alpha.conjugate()) < proximity:
            return INFINITY
        return CPoint.from_complex(scalar_zeta(alpha, value, Domain.LINE))
    if point.at_infinity:
        return CPoint.from_complex(alpha.conjugate())
    value = point.to_complex()
    if abs(1.0 - value) < proximity:
        return INFINITY
    return CPoint.from_complex(scalar_zeta_inverse(alpha, value, Domain.LINE))


def cayley(
    z: "complex | CPoint",
    direction: Direction | str = Direction.FORWARD,
    proximity: float = POLE_PROXIMITY,
) -> CPoint:
    """The Cayley transform (z − i)/(z + i), i.e. rl_mobius at α_0 = i.

    Examples:
        cayley(0) is −1, cayley(1) is −i and cayley(INFINITY) is 1.
    """
    return rl_mobius(1j, z, direction, proximity)


def _line_param(A: "DiagParam | np.ndarray") -> DiagParam:
    if isinstance(A, DiagParam):
        if A.domain is not Domain.LINE:
            raise ValidationError("rl_op_mobius needs a line parameter")
        return A
    return DiagParam(np.asarray(A, dtype=complex), Domain.LINE)


def rl_op_mobius(
    A: "DiagParam | np.ndarray",
    T: np.ndarray,
    direction: Direction | str = Direction.FORWARD,
    condition_limit: float = CONDITION_LIMIT,
    unit_tolerance: float = UNIT_TOLERANCE,
) -> np.ndarray:
    """Apply the line operator map ζ_A or ζ̃_A.

    Forward ζ_A(T) = η_A (T − A†)⁻¹ (T − A) η_A⁻¹ is unitary for self-adjoint T;
    inverse ζ̃_A(S) = η_A⁻¹ (A − A†S)(1 − S)⁻¹ η_A is self-adjoint for unitary S.

    Raises:
        ValidationError: On shape or parameter problems.
        MassAtInfinityError: Inverse with S having an eigenvalue at 1.
        ConditioningError: On a numerically singular denominator.
    """
    param = _line_param(A)
    if Direction(direction) is Direction.FORWARD:
        return op_mobius_forward(param, T, condition_limit)
    return op_mobius_inverse(param, T, condition_limit, unit_tolerance)


def matrix_cayley(T: np.ndarray, condition_limit: float = CONDITION_LIMIT) -> np.ndarray:
    """ζ(T) = (T + i)⁻¹(T − i)."""
    T = np.asarray(T, dtype=complex)
    return rl_op_mobius(
        DiagParam.scalar(1j, T.shape[0], Domain.LINE), T, condition_limit=condition_limit
    )


def _cayley_poles(poles: PoleSeq, count: int) -> tuple[np.ndarray, np.ndarray]:
    """β_0..β_{count−1} and ξ_0..ξ_{count−1} for a line pole sequence."""
    if poles.domain is not Domain.LINE:
        raise ValidationError("expected a pole sequence on the real line")
    alphas = poles.with_base(count)
    beta = (alphas - 1j) / (alphas + 1j)
    shifted = 1.0 - beta
    return beta, shifted / np.abs(shifted)


def _gamma_lambda(xi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    count = xi.size
    squares = xi**2
    gamma = np.ones(count, dtype=complex)
    lambda_ = np.ones(count, dtype=complex)
    for n in range(1, count):
        if n % 2:
            gamma[n] = np.conj(np.prod(squares[0:n:2]))
            lambda_[n] = gamma[n - 1] * xi[n]
        else:
            gamma[n] = np.prod(squares[1:n:2])
            lambda_[n] = gamma[n - 1] * np.conj(xi[n])
    return gamma, lambda_


def circle_line_params(a: ParamSeq, poles: PoleSeq) -> LineConversion:
    """Convert line parameters and poles to the equivalent circle data.

    A terminal value converts with the same rule as a parameter of index N + 1.

    Raises:
        ValidationError: If poles are not on the line or too few are given.
    """
    poles.require(a.order)
    beta, xi = _cayley_poles(poles, len(poles) + 1)
    gamma, lambda_ = _gamma_lambda(xi)
    chains = np.cumprod(xi**2)
    b = tuple(chains[k] * value for k, value in enumerate(a.a))
    terminal = None if a.terminal is None else complex(chains[a.order - 1] * a.terminal)
    circle_poles = PoleSeq(tuple(beta[1:]), Domain.CIRCLE, margin=0.0)
    return LineConversion(circle_poles, ParamSeq(b, terminal), xi, gamma, lambda_)


def circle_side_unitary(
    a: ParamSeq,
    poles: PoleSeq,
    n: int,
    boundary: complex | None = None,
    condition_limit: float = CONDITION_LIMIT,
) -> np.ndarray:
    """Return ζ̃_𝓑(ξ 𝒞_n ξ) with 𝓑 = diag(β_0..β_{n−1}).

    Equal to ζ(𝒰⁽ⁿ⁾) whenever the line representation 𝒰⁽ⁿ⁾ exists, and unitary
    when a boundary value is given.
    """
    beta, xi = _cayley_poles(poles, n)
    C = cmv_matrix(a.coefficients(n, boundary))
    scaled = (xi[:, None] * C) * xi[None, :]
    return op_mobius_inverse(DiagParam(beta, Domain.CIRCLE, margin=0.0), scaled, condition_limit)


def excluded_boundary(
    a: ParamSeq, poles: PoleSeq, n: int, proximity: float = POLE_PROXIMITY
) -> complex:
    """The v with Q_n^v(∞) = 0, i.e. −φ_n(∞)/φ_n*(∞).

    Raises:
        ValidationError: On the circle domain.
        NumericalError: If φ_n*(∞) vanishes.
    """
    if poles.domain is not Domain.LINE:
        raise ValidationError("the excluded boundary value exists on the real line only")
    value = eval_orf(a, poles, n, INFINITY)
    if abs(value.phi_star) < proximity:
        raise NumericalError("phi_n*(inf) vanishes; the excluded value is undefined")
    return -value.phi / value.phi_star


def _measure_from_unitary(
    W: np.ndarray, force_infinity: bool, unit_tolerance: float, max_order: int = MAX_ORDER
) -> DiscreteMeasure:
    """Line measure from the eigenpairs of the circle-side unitary."""
    result = eigensolve(W, want_right=True, max_order=max_order)
    weights = np.abs(result.right_vectors[0, :]) ** 2
    weights = weights / weights.sum()
    distance = np.abs(result.values - 1.0)
    nearest = int(np.argmin(distance))
    has_infinity = force_infinity or float(distance[nearest]) < unit_tolerance
    keep = np.ones(result.values.size, dtype=bool)
    infinity_weight = None
    if has_infinity:
        keep[nearest] = False
        infinity_weight = float(weights[nearest])
    w = result.values[keep]
    nodes = 1j * (1.0 + w) / (1.0 - w)
    debug_log(
        "realline",
        f"circle-side nodes: infinity={has_infinity}, "
        f"max |Im| {float(np.max(np.abs(nodes.imag), initial=0.0)):.2e}",
    )
    return DiscreteMeasure.from_values(nodes, weights[keep], Domain.LINE, infinity_weight)


def rl_quadrature(
    a: ParamSeq,
    poles: PoleSeq,
    n: int,
    v: complex,
    allow_infinity: bool = False,
    excluded_tolerance: float = EXCLUDED_TOLERANCE,
    collision_tolerance: float = NODE_COLLISION,
    max_order: int = MAX_ORDER,
    condition_limit: float = CONDITION_LIMIT,
    unit_tolerance: float = UNIT_TOLERANCE,
    pole_tolerance: float = POLE_TOLERANCE,
    proximity: float = POLE_PROXIMITY,
) -> Quadrature:
    """Quadrature on R̄ from the zeros of Q_n^v.

    The nodes are the eigenvalues of the self-adjoint 𝒰⁽ⁿ;ᵘ⁾. At the excluded
    value one zero sits at ∞ and 𝒰⁽ⁿ;ᵘ⁾ is undefined; with allow_infinity the
    circle-side unitary gives n − 1 real nodes plus ∞.

    Raises:
        ExcludedBoundaryError: v at the excluded value and allow_infinity False.
        NodeCollisionError: If two nodes coincide within collision_tolerance.
        ValidationError: If |v| != 1 or data is missing.
    """
    if poles.domain is not Domain.LINE:
        raise ValidationError("rl_quadrature needs a pole sequence on the real line")
    u = porf_u(a.param(n), v)
    excluded = excluded_boundary(a, poles, n, proximity)
    if abs(complex(v) - excluded) >= excluded_tolerance:
        return boundary_quadrature(
            a,
            poles,
            n,
            u,
            Family.U,
            complex(v),
            collision_tolerance,
            max_order=max_order,
            condition_limit=condition_limit,
            unit_tolerance=unit_tolerance,
            pole_tolerance=pole_tolerance,
        )
    if not allow_infinity:
        raise ExcludedBoundaryError(
            f"v = {complex(v)} places a zero of Q_n^v at infinity; "
            "pass allow_infinity to use the circle-side representation",
            excluded=excluded,
        )
    W = circle_side_unitary(a, poles, n, u, condition_limit)
    measure = _measure_from_unitary(W, True, unit_tolerance, max_order)
    points = list(measure.points)
    formula = orf_weights(a, poles, n, points, pole_tolerance) if n > 1 else np.ones(1)
    return Quadrature(measure, n, complex(v), u, formula)


def rl_reconstruct_measure(
    a: ParamSeq,
    poles: PoleSeq,
    unit_tolerance: float = UNIT_TOLERANCE,
    max_order: int = MAX_ORDER,
    condition_limit: float = CONDITION_LIMIT,
) -> DiscreteMeasure:
    """Recover an N-point measure on R̄ from parameters with a terminal value.

    An eigenvalue of the circle-side unitary within unit_tolerance of 1
    becomes the support point ∞.

    Raises:
        ValidationError: Without a terminal value or on the circle domain.
    """
    if a.terminal is None:
        raise ValidationError("reconstruction needs a terminal boundary value")
    W = circle_side_unitary(a, poles, a.order, a.terminal, condition_limit)
    return _measure_from_unitary(W, False, unit_tolerance, max_order)


def mass_at_infinity_check(
    a: ParamSeq,
    n: int | None = None,
    tolerance: float = UNIT_TOLERANCE,
    max_order: int = MAX_ORDER,
) -> MassAtInfinity:
    """Test whether ∞ carries mass: 1 ∈ σ(𝒞_n^u) with u the terminal value.

    Examples:
        A single terminal u = −1 gives 𝒞 = (1), so the result is True;
        u = 1 gives False with margin 2.

    Raises:
        ValidationError: Without a terminal value or if n differs from the order.
    """
    if a.terminal is None:
        raise ValidationError("the mass at infinity check needs a terminal value")
    if n is None:
        n = a.order
    if n != a.order:
        raise ValidationError(f"order {n} does not match the terminal order {a.order}")
    values = eigensolve(cmv_matrix(a.coefficients(n, a.terminal)), max_order=max_order).values
    margin = float(np.min(np.abs(values - 1.0)))
    return MassAtInfinity(margin < tolerance, margin)
