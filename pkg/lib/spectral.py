#!/usr/bin/env python3
"""Spectral computations on the matrix representations.

Zeros of φ_n are eigenvalues of 𝒱⁽ⁿ⁾ or 𝒰⁽ⁿ⁾ (or of the matching pencils);
nodes of the para-orthogonal functions are eigenvalues of the unitary
𝒰⁽ⁿ;ᵘ⁾ and the quadrature weights are the squared first components of its
normalized eigenvectors. The diagnostics at the end turn the parameter
sequence into finite-order evidence about the limit points of the support.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

try:
    from .config import DEFAULT_CONFIG, debug_log
    from .errors import (
        IndefinitePencilError,
        NodeCollisionError,
        NumericalError,
        ValidationError,
    )
    from .matrices import Family, pair_rep, tridiagonal_pair, truncated_rep
    from .opmoebius import CONDITION_LIMIT, UNIT_TOLERANCE
    from .measures import DiscreteMeasure
    from .moebius import Domain, PoleSeq, as_point, varpi, varpi_star, zeta, zeta_inverse
    from .orfcore import POLE_TOLERANCE, ParamSeq, derived_params, eval_orf_sequence, porf_u
except ImportError:
    from config import DEFAULT_CONFIG, debug_log
    from errors import (
        IndefinitePencilError,
        NodeCollisionError,
        NumericalError,
        ValidationError,
    )
    from matrices import Family, pair_rep, tridiagonal_pair, truncated_rep
    from opmoebius import CONDITION_LIMIT, UNIT_TOLERANCE
    from measures import DiscreteMeasure
    from moebius import Domain, PoleSeq, as_point, varpi, varpi_star, zeta, zeta_inverse
    from orfcore import POLE_TOLERANCE, ParamSeq, derived_params, eval_orf_sequence, porf_u


MAX_ORDER = DEFAULT_CONFIG["eigensolverMaxOrder"]
NODE_COLLISION = DEFAULT_CONFIG["nodeCollisionTolerance"]
CLUSTER_TOLERANCE = DEFAULT_CONFIG["clusterTolerance"]
CLUSTER_TAIL = DEFAULT_CONFIG["clusterTailFraction"]
PENCIL_TOLERANCE = 1e-12
NODE_UNIMODULAR = 1e-8
NODE_REAL = 1e-9


class ZeroRoute(Enum):
    """Matrix route used by zeros_orf."""

    V = "V"  # 𝒱⁽ⁿ⁾ = ζ̃_𝒜(ℋ_n)
    U = "U"  # 𝒰⁽ⁿ⁾ = ζ̃_𝒜(𝒞_n)
    PAIR = "pair"  # five-diagonal pencil
    TRIDIAGONAL = "tridiagonal"  # pencil from the unitary CMV factor


@dataclass(frozen=True, eq=False)
class EigenResult:
    """Eigenvalues with optional eigenvectors (as columns) and residuals.

    Left vectors follow the LAPACK convention y^H M = λ y^H. Infinite pencil
    eigenvalues are stored as complex infinity.
    """

    values: np.ndarray
    right_vectors: np.ndarray | None
    left_vectors: np.ndarray | None
    residuals: np.ndarray

    @property
    def infinite(self) -> np.ndarray:
        return ~np.isfinite(self.values)

    @property
    def finite_values(self) -> np.ndarray:
        return self.values[np.isfinite(self.values)]


@dataclass(frozen=True, eq=False)
class Quadrature:
    """Nodes and weights of a para-orthogonal quadrature."""

    measure: DiscreteMeasure  # nodes with eigenvector weights
    n: int
    v: complex | None
    u: complex
    formula_weights: np.ndarray  # (Σ_{k<n} |φ_k(λ)|²)⁻¹ per node

    @property
    def nodes(self) -> np.ndarray:
        return self.measure.values()

    @property
    def weights(self) -> np.ndarray:
        return self.measure.weights


@dataclass(frozen=True)
class LimitCluster:
    """Group of trailing limit-point values."""

    center: complex
    size: int


@dataclass(frozen=True, eq=False)
class KreinSequences:
    """Moduli of the three two-point conditions, n = 2..N−1."""

    indices: np.ndarray
    rho_products: np.ndarray  # ρ_n ρ_{n+1}
    mixed: np.ndarray
    quadratic: np.ndarray

    def tail_max(self, fraction: float = CLUSTER_TAIL) -> tuple[float, float, float]:
        """Largest value of each sequence over its trailing fraction."""
        count = max(1, math.ceil(fraction * self.indices.size))
        return (
            float(np.max(self.rho_products[-count:])),
            float(np.max(self.mixed[-count:])),
            float(np.max(self.quadratic[-count:])),
        )


@dataclass(frozen=True)
class ArcDescriptor:
    """Image ζ̃_α(Γ) of the arc Γ = {λe^{iθ}: |θ| < half_angle}."""

    alpha: complex
    lam: complex
    half_angle: float  # 2 arcsin a
    start: complex  # ζ̃_α(λ e^{−i half_angle})
    end: complex  # ζ̃_α(λ e^{+i half_angle})

    @property
    def is_empty(self) -> bool:
        return self.half_angle == 0.0

    @property
    def excluded_point(self) -> complex:
        """ζ̃_α(−λ), the one point of T the arc never covers."""
        return complex(zeta_inverse(self.alpha, -self.lam))

    def _relative_angle(self, z: complex) -> float:
        return abs(float(np.angle(zeta(self.alpha, complex(z)) / self.lam)))

    def arc_contains(self, z: complex, tolerance: float = 1e-9) -> bool:
        """True if z lies on the open arc ζ̃_α(Γ)."""
        if abs(abs(z) - 1.0) > tolerance:
            return False
        return self._relative_angle(z) < self.half_angle

    def contains(self, z: complex, tolerance: float = 1e-9) -> bool:
        """Membership in the predicted derived set T ∖ ζ̃_α(Γ)."""
        if abs(abs(z) - 1.0) > tolerance:
            return False
        return not self.arc_contains(z, tolerance)


def _order(values: np.ndarray) -> np.ndarray:
    finite = np.isfinite(values)
    safe = np.where(finite, values, 0)
    return np.lexsort((np.abs(safe), np.round(np.angle(safe), 13), ~finite))


def _check_matrix(M: np.ndarray, max_order: int, name: str = "M") -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {M.shape}")
    if M.shape[0] > max_order:
        raise ValidationError(f"{name} has order {M.shape[0]}, above the cap {max_order}")
    if not np.all(np.isfinite(M)):
        raise ValidationError(f"{name} has non-finite entries")
    return M


def eigensolve(
    M: np.ndarray,
    want_left: bool = False,
    want_right: bool = False,
    max_order: int = MAX_ORDER,
) -> EigenResult:
    """Backward-stable dense eigendecomposition (LAPACK geev).

    Args:
        M: Square complex matrix.
        want_left: Return left eigenvectors.
        want_right: Return right eigenvectors (unit norm columns).
        max_order: Largest accepted order.

    Returns:
        EigenResult ordered by ascending argument, then modulus; residuals are
        ‖Mx − λx‖/‖M‖ per eigenpair.

    Raises:
        ValidationError: For non-square, non-finite or oversized input.
        NumericalError: If the QR iteration does not converge.
    """
    M = _check_matrix(M, max_order)
    try:
        if want_left:
            values, left, right = scipy.linalg.eig(M, left=True, right=True)
        else:
            values, right = scipy.linalg.eig(M, right=True)
            left = None
    except scipy.linalg.LinAlgError as e:
        raise NumericalError(f"eigensolver did not converge: {e}") from e

    right = right / np.linalg.norm(right, axis=0)[None, :]
    scale = np.linalg.norm(M, 2) or 1.0
    residuals = np.linalg.norm(M @ right - right * values[None, :], axis=0) / scale
    order = _order(values)
    debug_log("spectral", f"eigensolve n={M.shape[0]} max residual {residuals.max(initial=0):.2e}")
    return EigenResult(
        values=values[order],
        right_vectors=right[:, order] if want_right else None,
        left_vectors=left[:, order] if left is not None else None,
        residuals=residuals[order],
    )


def pair_spectrum(
    T: np.ndarray,
    S: np.ndarray,
    max_order: int = MAX_ORDER,
    tolerance: float = PENCIL_TOLERANCE,
) -> EigenResult:
    """Eigenvalues of the pencil T − λS (LAPACK ggev).

    Eigenvalues come as homogeneous pairs (α, β); β ≈ 0 gives an eigenvalue
    at infinity, α ≈ β ≈ 0 means the pencil is singular.

    Raises:
        ValidationError: On shape problems.
        IndefinitePencilError: If T and S share a null vector.
        NumericalError: If the QZ iteration fails.
    """
    T = _check_matrix(T, max_order, "T")
    S = _check_matrix(S, max_order, "S")
    if T.shape != S.shape:
        raise ValidationError(f"pencil shapes differ: {T.shape} and {S.shape}")
    try:
        homogeneous, right = scipy.linalg.eig(T, S, right=True, homogeneous_eigvals=True)
    except scipy.linalg.LinAlgError as e:
        raise NumericalError(f"generalized eigensolver did not converge: {e}") from e

    alpha, beta = homogeneous[0], homogeneous[1]
    norm_t = np.linalg.norm(T, 2) or 1.0
    norm_s = np.linalg.norm(S, 2) or 1.0
    singular = (np.abs(alpha) <= tolerance * norm_t) & (np.abs(beta) <= tolerance * norm_s)
    if singular.any():
        raise IndefinitePencilError("T and S are singular on a common vector")
    at_infinity = np.abs(beta) <= tolerance * norm_s
    safe_beta = np.where(at_infinity, 1.0, beta)
    values = np.where(at_infinity, complex(math.inf, 0.0), alpha / safe_beta)

    right = right / np.linalg.norm(right, axis=0)[None, :]
    finite_values = np.where(at_infinity, 0.0, values)
    residual_finite = np.linalg.norm(T @ right - (S @ right) * finite_values[None, :], axis=0)
    residual_finite /= norm_t + np.abs(finite_values) * norm_s
    residual_infinite = np.linalg.norm(S @ right, axis=0) / norm_s
    residuals = np.where(at_infinity, residual_infinite, residual_finite)
    order = _order(values)
    return EigenResult(values[order], right[:, order], None, residuals[order])


def zeros_orf(
    a: ParamSeq,
    poles: PoleSeq,
    n: int,
    via: ZeroRoute | str = ZeroRoute.U,
    max_order: int = MAX_ORDER,
    condition_limit: float = CONDITION_LIMIT,
) -> np.ndarray:
    """Zeros of φ_n as eigenvalues of the chosen representation.

    max_order caps the eigensolver; condition_limit guards the Möbius
    transform of the V and U routes.

    Raises:
        ValidationError: If fewer than n parameters or poles are given.
        NumericalError: Propagated from the eigensolvers.
    """
    route = ZeroRoute(via)
    if route is ZeroRoute.V:
        M = truncated_rep(a, poles, n, Family.V, condition_limit=condition_limit)
        return eigensolve(M, max_order=max_order).values
    if route is ZeroRoute.U:
        M = truncated_rep(a, poles, n, Family.U, condition_limit=condition_limit)
        return eigensolve(M, max_order=max_order).values
    if route is ZeroRoute.PAIR:
        return pair_spectrum(*pair_rep(a, poles, n, Family.U), max_order=max_order).values
    return pair_spectrum(*tridiagonal_pair(a, poles, n), max_order=max_order).values


def orf_weights(
    a: ParamSeq, poles: PoleSeq, n: int, points, pole_tolerance: float = POLE_TOLERANCE
) -> np.ndarray:
    """(Σ_{k<n} |φ_k(λ)|²)⁻¹ at each point."""
    phi, _ = eval_orf_sequence(a, poles, n - 1, points, pole_tolerance)
    return 1.0 / np.sum(np.abs(phi) ** 2, axis=0)


def _check_collisions(nodes: np.ndarray, tolerance: float) -> None:
    if nodes.size < 2:
        return
    gaps = np.abs(nodes[:, None] - nodes[None, :])
    np.fill_diagonal(gaps, np.inf)
    closest = float(gaps.min())
    if closest < tolerance:
        raise NodeCollisionError(f"quadrature nodes collide (distance {closest:.3e})")


def boundary_quadrature(
    a: ParamSeq,
    poles: PoleSeq,
    n: int,
    u: complex,
    family: Family | str = Family.U,
    v: complex | None = None,
    collision_tolerance: float = NODE_COLLISION,
    max_order: int = MAX_ORDER,
    condition_limit: float = CONDITION_LIMIT,
    unit_tolerance: float = UNIT_TOLERANCE,
    pole_tolerance: float = POLE_TOLERANCE,
) -> Quadrature:
    """Quadrature from the boundary-extended unitary (self-adjoint on the line).

    Needs a_1..a_{n−1} only; u replaces a_n. The trailing keywords carry the
    loaded settings down to the Möbius transform, eigensolver and formula weights.

    Raises:
        NodeCollisionError: If two nodes coincide within tolerance.
        NumericalError: If nodes leave T (circle) or R (line).
    """
    M = truncated_rep(
        a,
        poles,
        n,
        family,
        boundary=u,
        condition_limit=condition_limit,
        unit_tolerance=unit_tolerance,
    )
    result = eigensolve(M, want_right=True, max_order=max_order)
    nodes = result.values
    if poles.domain is Domain.CIRCLE:
        deviation = float(np.max(np.abs(np.abs(nodes) - 1.0)))
        if deviation > NODE_UNIMODULAR:
            raise NumericalError(f"quadrature nodes leave the unit circle by {deviation:.3e}")
    else:
        deviation = float(np.max(np.abs(nodes.imag)))
        if deviation > NODE_REAL:
            raise NumericalError(f"quadrature nodes leave the real line by {deviation:.3e}")
    _check_collisions(nodes, collision_tolerance)

    weights = np.abs(result.right_vectors[0, :]) ** 2
    weights = weights / weights.sum()
    formula = orf_weights(a, poles, n, nodes, pole_tolerance) if n > 1 else np.ones(1)
    measure = DiscreteMeasure.from_values(nodes, weights, poles.domain)
    debug_log(
        "spectral",
        f"quadrature n={n} weight mismatch {float(np.max(np.abs(weights - formula))):.2e}",
    )
    return Quadrature(measure, n, v, complex(u), formula)


def porf_quadrature(
    a: ParamSeq,
    poles: PoleSeq,
    n: int,
    v: complex,
    collision_tolerance: float = NODE_COLLISION,
    **settings,
) -> Quadrature:
    """Nodes (zeros of Q_n^v) and weights of the rational Szegő quadrature.

    The nodes are the eigenvalues of 𝒰⁽ⁿ;ᵘ⁾ with u = ζ̃_{a_n}(v); the rule is
    exact on B_p B_{q*} for p, q < n.
    Extra keywords go to boundary_quadrature.

    Raises:
        ValidationError: If |v| != 1 or data is missing.
        NodeCollisionError: If nodes coincide.
    """
    u = porf_u(a.param(n), v)
    return boundary_quadrature(
        a, poles, n, u, Family.U, complex(v), collision_tolerance, **settings
    )


def reconstruct_measure(a: ParamSeq, poles: PoleSeq, **settings) -> DiscreteMeasure:
    """Recover the N-point circle measure from parameters with a terminal value.

    Extra keywords go to boundary_quadrature.

    Raises:
        ValidationError: Without a terminal or on the line domain (use
            realline.rl_reconstruct_measure there).
    """
    if a.terminal is None:
        raise ValidationError("reconstruction needs a terminal boundary value")
    if poles.domain is not Domain.CIRCLE:
        raise ValidationError("reconstruct_measure works on the circle; use rl_reconstruct_measure")
    return boundary_quadrature(a, poles, a.order, a.terminal, **settings).measure


def mass_point_weight(
    a: ParamSeq, poles: PoleSeq, lam, N: int, pole_tolerance: float = POLE_TOLERANCE
) -> float:
    """Order-N approximation (Σ_{k<N}|φ_k(λ)|²)⁻¹ to μ({λ}).

    Raises:
        ValidationError: If λ is not on the unit circle (circle domain).
    """
    point = as_point(lam)
    if poles.domain is Domain.CIRCLE and abs(abs(point.to_complex()) - 1.0) > NODE_UNIMODULAR:
        raise ValidationError(f"lambda = {point} is not on the unit circle")
    if N < 1:
        raise ValidationError(f"order must be at least 1, got {N}")
    return float(orf_weights(a, poles, N, [point], pole_tolerance)[0])


def limit_point_sequence(a: ParamSeq, poles: PoleSeq) -> np.ndarray:
    """w_n = ζ̃_{α_n}(−ā_n a_{n+1}) for n = 1..N−1.

    Raises:
        ValidationError: With fewer than two parameters.
    """
    count = len(a)
    if count < 2:
        raise ValidationError("the limit point sequence needs at least two parameters")
    poles.require(count - 1)
    values = np.array(a.a, dtype=complex)
    alphas = poles.with_base(count)[1:]
    return zeta_inverse(alphas, -np.conj(values[:-1]) * values[1:], poles.domain)


def trailing_clusters(
    values: np.ndarray, tolerance: float = CLUSTER_TOLERANCE, fraction: float = CLUSTER_TAIL
) -> list[LimitCluster]:
    """Group the trailing fraction of a sequence into clusters of given radius."""
    values = np.asarray(values, dtype=complex)
    if values.size == 0:
        return []
    tail = values[-max(1, math.ceil(fraction * values.size)) :]
    members: list[list[complex]] = []
    for value in tail:
        for group in members:
            if abs(value - np.mean(group)) <= tolerance:
                group.append(value)
                break
        else:
            members.append([value])
    clusters = [LimitCluster(complex(np.mean(group)), len(group)) for group in members]
    return sorted(clusters, key=lambda c: (-c.size, np.angle(c.center)))


def krein_single_point(a: ParamSeq, poles: PoleSeq, lam: complex) -> np.ndarray:
    """|w_n − λ|; the derived set is {λ} iff this tends to 0."""
    return np.abs(limit_point_sequence(a, poles) - complex(lam))


def krein_k(a: ParamSeq, poles: PoleSeq, n: int, z):
    """k_n(z) = a_n ϖ*_n(z) + a_{n+1} ϖ_n(z), for 1 <= n <= N−1."""
    if not 1 <= n < len(a):
        raise ValidationError(f"k_n needs 1 <= n < {len(a)}, got {n}")
    alpha = poles.pole(n)
    return a.param(n) * varpi_star(alpha, z, poles.domain) + a.param(n + 1) * varpi(
        alpha, z, poles.domain
    )


def krein_two_point(
    a: ParamSeq, poles: PoleSeq, lambda1: complex, lambda2: complex
) -> KreinSequences:
    """The three two-point conditions, as moduli, for n = 2..N−1.

    {supp μ}′ ⊂ {λ₁, λ₂} is indicated when all three sequences tend to 0.

    Raises:
        ValidationError: With fewer than three parameters or λ off the circle.
    """
    for lam in (lambda1, lambda2):
        if abs(abs(lam) - 1.0) > NODE_UNIMODULAR:
            raise ValidationError(f"lambda = {lam} is not on the unit circle")
    count = len(a)
    if count < 3:
        raise ValidationError("the two-point conditions need at least three parameters")
    poles.require(count)
    dp = derived_params(a, poles)
    domain = poles.domain
    l1, l2 = complex(lambda1), complex(lambda2)
    indices = np.arange(2, count)
    products, mixed, quadratic = [], [], []
    for n in indices:
        alpha_prev, alpha, alpha_next = poles.pole(n - 1), poles.pole(n), poles.pole(n + 1)
        rho_n = dp.rho[n - 1]
        products.append(rho_n * dp.rho[n])
        k_n1, k_n2 = krein_k(a, poles, n, l1), krein_k(a, poles, n, l2)
        k_prev1 = krein_k(a, poles, n - 1, l1)
        mixed.append(
            rho_n
            * (
                varpi(alpha, l1, domain) / varpi(alpha, alpha, domain) * k_n2
                - varpi_star(alpha_prev, l2, domain)
                / varpi(alpha_prev, alpha_prev, domain)
                * k_prev1
            )
        )
        quadratic.append(
            np.conj(k_n1) * k_n2
            + dp.rho_minus[n - 1] ** 2
            * np.conj(varpi_star(alpha_prev, l1, domain))
            * varpi_star(alpha_prev, l2, domain)
            + dp.rho_plus[n] ** 2
            * np.conj(varpi(alpha_next, l1, domain))
            * varpi(alpha_next, l2, domain)
        )
    return KreinSequences(
        indices=indices,
        rho_products=np.abs(np.array(products)),
        mixed=np.abs(np.array(mixed, dtype=complex)),
        quadratic=np.abs(np.array(quadratic, dtype=complex)),
    )


def lopez_arc(alpha: complex, a: float, lam: complex) -> ArcDescriptor:
    """Arc ζ̃_α(Γ_{λ,a}), Γ_{λ,a} = {λe^{iθ}: |θ| < 2 arcsin a}.

    Constant poles α with |a_n| → a and a_{n+1}/a_n → λ give T ∖ ζ̃_α(Γ_{λ,a})
    as derived set; ArcDescriptor.contains tests membership.

    Raises:
        ValidationError: If a is outside [0, 1], |λ| != 1 or |α| >= 1.
    """
    alpha, lam = complex(alpha), complex(lam)
    if not 0.0 <= a <= 1.0:
        raise ValidationError(f"a = {a} is outside [0, 1]")
    if abs(abs(lam) - 1.0) > NODE_UNIMODULAR:
        raise ValidationError(f"lambda = {lam} is not on the unit circle")
    if abs(alpha) >= 1.0:
        raise ValidationError(f"|alpha| = {abs(alpha)} is not inside the unit disk")
    half = 2.0 * math.asin(a)
    start = complex(zeta_inverse(alpha, lam * np.exp(-1j * half)))
    end = complex(zeta_inverse(alpha, lam * np.exp(1j * half)))
    return ArcDescriptor(alpha, lam, half, start, end)


def hausdorff_distance(x: np.ndarray, y: np.ndarray) -> float:
    distances = np.abs(np.asarray(x)[:, None] - np.asarray(y)[None, :])
    return float(max(distances.min(axis=1).max(), distances.min(axis=0).max()))


def compare_truncated_spectra(
    a: ParamSeq,
    poles_a: PoleSeq,
    b: ParamSeq,
    poles_b: PoleSeq,
    n: int,
    max_order: int = MAX_ORDER,
    condition_limit: float = CONDITION_LIMIT,
) -> float:
    """Hausdorff distance between the spectra of the two 𝒰⁽ⁿ;¹⁾ matrices."""
    spectra = [
        eigensolve(
            truncated_rep(x, poles, n, Family.U, boundary=1.0, condition_limit=condition_limit),
            max_order=max_order,
        ).values
        for x, poles in ((a, poles_a), (b, poles_b))
    ]
    return hausdorff_distance(*spectra)


def match_eigenvalues(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, float]:
    """Optimal matching of two eigenvalue lists.

    Returns:
        (permutation, distance) with y[permutation] aligned to x and distance
        the largest matched gap.
    """
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != y.shape:
        raise ValidationError(f"cannot match {x.size} values against {y.size}")
    rows, cols = linear_sum_assignment(np.abs(x[:, None] - y[None, :]))
    permutation = cols[np.argsort(rows)]
    return permutation, float(np.max(np.abs(x - y[permutation]), initial=0.0))


def quadrature_to_csv(q: Quadrature, precision: int = 17) -> str:
    """CSV with header node_re,node_im,weight; a node at infinity is written as inf."""
    lines = ["node_re,node_im,weight"]
    for point, weight in zip(q.measure.points, q.weights):
        if point.at_infinity:
            lines.append(f"inf,0,{weight:.{precision}g}")
        else:
            coords = f"{point.re:.{precision}g},{point.im:.{precision}g}"
            lines.append(f"{coords},{weight:.{precision}g}")
    return "\n".join(lines) + "\n"


def eigen_result_to_json(result: EigenResult) -> dict:
    return {
        "values": [
            {"re": float(z.real), "im": float(z.imag), "infinity": False}
            if np.isfinite(z)
            else {"re": 0.0, "im": 0.0, "infinity": True}
            for z in result.values
        ],
        "residuals": [float(r) for r in result.residuals],
    }
