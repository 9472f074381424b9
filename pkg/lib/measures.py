#!/usr/bin/env python3
"""Discrete measures and the measure -> parameter map.

A DiscreteMeasure is a finitely supported probability measure on the unit
circle or on the extended real line. orf_from_measure orthonormalizes the
Blaschke basis B_0, B_1, ... in L²_μ and reads off the recurrence parameters,
including the unimodular terminal value when the basis exhausts the support.
"""

import json
import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg

try:
    from .config import DEFAULT_CONFIG, debug_log
    from .errors import BreakdownError, NumericalError, ValidationError
    from .moebius import CPoint, Domain, PoleSeq, as_point, eta_of, varpi, zeta
    from .orfcore import POLE_TOLERANCE, OrfValue, ParamSeq, check_poles, orf_table
except ImportError:
    from config import DEFAULT_CONFIG, debug_log
    from errors import BreakdownError, NumericalError, ValidationError
    from moebius import CPoint, Domain, PoleSeq, as_point, eta_of, varpi, zeta
    from orfcore import POLE_TOLERANCE, OrfValue, ParamSeq, check_poles, orf_table


BREAKDOWN_RATIO = DEFAULT_CONFIG["gramBreakdownRatio"]
WEIGHT_SUM_TOLERANCE = 1e-12
CIRCLE_TOLERANCE = 1e-12
MIN_SEPARATION = 1e-10
TERMINAL_TOLERANCE = 1e-6


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Finitely supported probability measure.

    Circle points satisfy ||z| − 1| < 1e-12. Line points are real, and at most
    one of them may be the point at infinity.
    """

    points: tuple[CPoint, ...]
    weights: np.ndarray
    domain: Domain = Domain.CIRCLE

    def __post_init__(self) -> None:
        points = tuple(as_point(p) for p in self.points)
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)

        if not points:
            raise ValidationError("measure has no support points")
        if len(points) != weights.size:
            raise ValidationError(
                f"measure has {len(points)} points but {weights.size} weights"
            )
        if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
            raise ValidationError("measure weights must be positive and finite")
        total = float(weights.sum())
        if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise ValidationError(f"measure weights sum to {total!r}, expected 1")

        infinite = [p for p in points if p.at_infinity]
        if infinite and self.domain is Domain.CIRCLE:
            raise ValidationError("the point at infinity is not allowed on the circle")
        if len(infinite) > 1:
            raise ValidationError("at most one support point may be at infinity")
        for p in points:
            if p.at_infinity:
                continue
            if self.domain is Domain.CIRCLE and abs(abs(p.to_complex()) - 1.0) > CIRCLE_TOLERANCE:
                raise ValidationError(f"support point {p} is not on the unit circle")
            if self.domain is Domain.LINE and p.im != 0.0:
                raise ValidationError(f"support point {p} is not real")

        finite = self.finite_values
        if finite.size > 1:
            gaps = np.abs(finite[:, None] - finite[None, :])
            np.fill_diagonal(gaps, np.inf)
            if float(gaps.min()) <= MIN_SEPARATION:
                raise ValidationError(
                    f"support points closer than {MIN_SEPARATION:.0e} ({float(gaps.min()):.3e})"
                )

    @classmethod
    def from_values(
        cls,
        values: Iterable[complex],
        weights: Iterable[float],
        domain: Domain = Domain.CIRCLE,
        infinity_weight: float | None = None,
    ) -> "DiscreteMeasure":
        """Build a measure from complex support values.

        Circle values are projected onto T; line values keep their real part.
        infinity_weight adds the point at infinity (line only).
        """
        values = np.asarray(list(values), dtype=complex)
        weights = list(weights)
        if domain is Domain.CIRCLE:
            points = [CPoint.from_complex(z / abs(z)) for z in values]
        else:
            points = [CPoint(float(z.real), 0.0) for z in values]
        if infinity_weight is not None:
            points.append(CPoint(at_infinity=True))
            weights.append(infinity_weight)
        return cls(tuple(points), np.array(weights, dtype=float), domain)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def infinity_mask(self) -> np.ndarray:
        return np.array([p.at_infinity for p in self.points], dtype=bool)

    @property
    def finite_values(self) -> np.ndarray:
        return np.array([p.to_complex() for p in self.points if p.is_finite], dtype=complex)

    def values(self) -> np.ndarray:
        """Support points as complex numbers, infinity as complex inf."""
        return np.array(
            [complex(math.inf, 0.0) if p.at_infinity else p.to_complex() for p in self.points],
            dtype=complex,
        )


@dataclass(frozen=True, eq=False)
class GramSchmidtResult:
    """Output of orf_from_measure."""

    orf_values: np.ndarray  # row k: φ_k at every support point
    a: ParamSeq  # extracted parameters, terminal included when the support is exhausted

    @property
    def terminal(self) -> complex | None:
        return self.a.terminal


def inner_product(mu: DiscreteMeasure, f_values, g_values) -> complex:
    """Return ⟨f, g⟩_μ = Σ_j w_j conj(f_j) g_j.

    Raises:
        ValidationError: If the value lists do not match the support.
    """
    f = np.asarray(f_values, dtype=complex).reshape(-1)
    g = np.asarray(g_values, dtype=complex).reshape(-1)
    if f.size != len(mu) or g.size != len(mu):
        raise ValidationError(
            f"value lists of length {f.size} and {g.size} for a measure with {len(mu)} points"
        )
    return complex(np.sum(mu.weights * np.conj(f) * g))


def gram_schmidt(
    vectors: np.ndarray, weights: np.ndarray, breakdown_ratio: float = BREAKDOWN_RATIO
) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormalize columns in the weighted inner product Σ w_j conj(x_j) y_j.

    Modified Gram-Schmidt with one reorthogonalization pass, so that
    vectors = Q R with Q orthonormal for the weights and R upper triangular.

    Raises:
        BreakdownError: If a pivot drops below breakdown_ratio times the first.
    """
    scale = np.sqrt(np.asarray(weights, dtype=float))[:, None]
    work = np.asarray(vectors, dtype=complex) * scale
    rows, count = work.shape
    Q = np.zeros((rows, count), dtype=complex)
    R = np.zeros((count, count), dtype=complex)
    leading = None
    for j in range(count):
        v = work[:, j].copy()
        for _ in range(2):
            for i in range(j):
                coefficient = np.vdot(Q[:, i], v)
                R[i, j] += coefficient
                v -= coefficient * Q[:, i]
        pivot = float(np.linalg.norm(v))
        if leading is None:
            leading = pivot
        if pivot <= breakdown_ratio * leading:
            raise BreakdownError(
                f"Gram-Schmidt breakdown at basis function {j} "
                f"(pivot {pivot:.3e}, leading {leading:.3e})",
                index=j,
            )
        R[j, j] = pivot
        Q[:, j] = v / pivot
    return Q / scale, R


def _blaschke_columns(poles: PoleSeq, count: int, mu: DiscreteMeasure) -> np.ndarray:
    """Values B_0..B_{count−1} at the support, one column per function."""
    values = np.array([0j if p.at_infinity else p.to_complex() for p in mu.points])
    mask = mu.infinity_mask
    columns = np.ones((len(mu), count), dtype=complex)
    for k in range(1, count):
        factor = zeta(poles.pole(k), values, poles.domain)
        factor[mask] = 1.0
        columns[:, k] = columns[:, k - 1] * factor
    return columns


def _expansion_at(poles: PoleSeq, coefficients: np.ndarray, n: int, point: complex):
    """Evaluate φ̂_n and φ̂_n* at a point from the expansion φ̂_n = Σ c_j B_j."""
    zetas = np.array([zeta(poles.pole(i), point, poles.domain) for i in range(1, n + 1)])
    blaschke = np.concatenate(([1.0 + 0j], np.cumprod(zetas)))
    value = np.sum(coefficients[: n + 1] * blaschke)
    # B_n/B_j = ζ_{j+1}⋯ζ_n
    tails = np.ones(n + 1, dtype=complex)
    for j in range(n - 1, -1, -1):
        tails[j] = tails[j + 1] * zetas[j]
    star = np.sum(np.conj(coefficients[: n + 1]) * tails)
    return complex(value), complex(star)


def orf_from_measure(
    mu: DiscreteMeasure,
    poles: PoleSeq,
    order: int,
    breakdown_ratio: float = BREAKDOWN_RATIO,
    pole_tolerance: float = POLE_TOLERANCE,
) -> GramSchmidtResult:
    """Orthonormalize the Blaschke basis and extract a_1..a_order.

    Gram-Schmidt returns φ̂_n = c φ_n with an unknown phase |c| = 1. It is
    fixed one order at a time: |a_n| is the modulus of φ̂_n(α_{n−1})/φ̂_n*(α_{n−1}),
    the recurrence at z = α_{n−1} (where ζ_{n−1} vanishes) gives
    φ_n*(α_{n−1}) = e_n ϖ_{n−1}(α_{n−1})/ϖ_n(α_{n−1}) φ*_{n−1}(α_{n−1}), so
    c̄ = φ̂_n*(α_{n−1})/φ_n*(α_{n−1}) and a_n = c̄² φ̂_n(α_{n−1})/φ̂_n*(α_{n−1}).

    When order equals the number of support points the last parameter is
    the unimodular terminal u for which ζ_{N−1}φ_{N−1} + uφ*_{N−1} vanishes on
    the support.

    Args:
        mu: The measure.
        poles: Pole sequence of the same domain, at least order poles.
        order: Number of parameters N, at most the number of support points.
        breakdown_ratio: Pivot ratio that signals a degenerate support.
        pole_tolerance: Smallest distance allowed between a support point and a pole.

    Returns:
        GramSchmidtResult with the phase-fixed φ_k values and the parameters.

    Raises:
        ValidationError: If order is out of range or the domains differ.
        BreakdownError: If the basis loses rank before the requested order.
    """
    if mu.domain is not poles.domain:
        raise ValidationError(
            f"measure lives on the {mu.domain.value}, poles on the {poles.domain.value}"
        )
    size = len(mu)
    if not 1 <= order <= size:
        raise ValidationError(f"order must be in 1..{size} for a {size}-point measure, got {order}")
    poles.require(order)
    finite = np.array([p.to_complex() for p in mu.points if p.is_finite], dtype=complex)
    check_poles(poles, order, finite, pole_tolerance)

    exhausts = order == size
    count = order if exhausts else order + 1
    Q, R = gram_schmidt(_blaschke_columns(poles, count, mu), mu.weights, breakdown_ratio)
    coefficients = scipy.linalg.solve_triangular(R, np.eye(count, dtype=complex))

    orf_values = np.empty_like(Q)
    orf_values[:, 0] = Q[:, 0]
    params: list[complex] = []
    for n in range(1, count):
        prev_alpha = poles.pole(n - 1)
        hat_phi, hat_star = _expansion_at(poles, coefficients[:, n], n, prev_alpha)
        ratio = hat_phi / hat_star
        modulus = abs(ratio)
        if modulus >= 1.0:
            raise NumericalError(f"extracted |a_{n}| = {modulus} is not inside the unit disk")
        if n == 1:
            prev_star = 1.0 + 0j
        else:
            _, stars = orf_table(np.array(params), poles, [prev_alpha], pole_tolerance)
            prev_star = complex(stars[n - 1, 0])
        e_n = eta_of(poles.pole(n), poles.domain) / (
            eta_of(prev_alpha, poles.domain) * math.sqrt(1.0 - modulus**2)
        )
        star = (
            e_n
            * varpi(prev_alpha, prev_alpha, poles.domain)
            / varpi(poles.pole(n), prev_alpha, poles.domain)
            * prev_star
        )
        phase = hat_star / star
        phase /= abs(phase)
        params.append(complex(ratio * phase**2))
        orf_values[:, n] = Q[:, n] * phase
        debug_log("measures", f"a_{n} = {params[-1]!r}")

    terminal = None
    if exhausts:
        terminal = _terminal_value(mu, poles, np.array(params), order, pole_tolerance)
    return GramSchmidtResult(orf_values.T.copy(), ParamSeq(tuple(params), terminal))


def _terminal_value(
    mu: DiscreteMeasure, poles: PoleSeq, params: np.ndarray, order: int, tolerance: float
) -> complex:
    """Least-squares u with ζ_{N−1}φ_{N−1} + uφ*_{N−1} = 0 on the support."""
    phi, phi_star = orf_table(params, poles, list(mu.points), tolerance)
    last, last_star = phi[order - 1], phi_star[order - 1]
    values = np.array([0j if p.at_infinity else p.to_complex() for p in mu.points])
    shift = zeta(poles.pole(order - 1), values, poles.domain)
    shift[mu.infinity_mask] = 1.0
    numerator = np.sum(mu.weights * np.conj(last_star) * shift * last)
    denominator = np.sum(mu.weights * np.abs(last_star) ** 2)
    u = -numerator / denominator
    deviation = abs(abs(u) - 1.0)
    debug_log("measures", f"terminal {u!r}, | |u| - 1 | = {deviation:.3e}")
    if deviation > TERMINAL_TOLERANCE:
        raise NumericalError(f"terminal value {u} is not unimodular (deviation {deviation:.3e})")
    return complex(u / abs(u))


def lebesgue_orf(poles: PoleSeq, n: int, z) -> OrfValue:
    """Closed-form ORF for parameters a = 0.

    φ_n = (η_n/η_0) ϖ*_0(z)/ϖ_n(z) B_{n−1}(z) and φ_n* = (η_n/η_0) ϖ_0(z)/ϖ_n(z);
    on the circle these are orthonormal for the Lebesgue measure.

    Raises:
        PoleEvaluationError: Near a pole α̂_k.
    """
    point = as_point(z)
    if n == 0:
        return OrfValue(0, point, 1 + 0j, 1 + 0j)
    poles.require(n)
    value = point.to_complex()
    check_poles(poles, n, np.array([value]))
    scale = eta_of(poles.pole(n), poles.domain) / eta_of(poles.alpha0, poles.domain)
    den = varpi(poles.pole(n), value, poles.domain)
    product = 1 + 0j
    for k in range(1, n):
        product *= zeta(poles.pole(k), value, poles.domain)
    phi = scale * (value - poles.alpha0) / den * product
    phi_star = scale * varpi(poles.alpha0, value, poles.domain) / den
    return OrfValue(n, point, complex(phi), complex(phi_star))


def discretize_density(density: Callable[[np.ndarray], np.ndarray], points: int) -> DiscreteMeasure:
    """Uniform-grid discretization of a positive density on the unit circle.

    Nodes are the points-th roots of unity, weights are proportional to the
    density values there.

    Raises:
        ValidationError: If points < 1 or the density is not positive.
    """
    if points < 1:
        raise ValidationError(f"need at least one grid point, got {points}")
    nodes = np.exp(2j * np.pi * np.arange(points) / points)
    values = np.asarray(density(nodes), dtype=float) * np.ones(points)
    if np.any(values <= 0) or not np.all(np.isfinite(values)):
        raise ValidationError("density must be positive and finite on the grid")
    return DiscreteMeasure.from_values(nodes, values / values.sum(), Domain.CIRCLE)


def lebesgue_measure(points: int) -> DiscreteMeasure:
    """Normalized Lebesgue measure on T sampled at the points-th roots of unity."""
    return discretize_density(lambda z: np.ones(z.shape), points)


def measure_to_json(mu: DiscreteMeasure) -> dict:
    """Serialize to {"domain", "points": [{"re", "im", "infinity"}], "weights"}."""
    return {
        "domain": mu.domain.value,
        "points": [
            {
                "re": 0.0 if p.at_infinity else float(p.re),
                "im": 0.0 if p.at_infinity else float(p.im),
                "infinity": p.at_infinity,
            }
            for p in mu.points
        ],
        "weights": [float(w) for w in mu.weights],
    }


def measure_from_json(data: dict) -> DiscreteMeasure:
    """Parse the measure JSON document.

    Raises:
        ValidationError: On schema or invariant violations.
    """
    try:
        domain = Domain(data.get("domain", "circle"))
        points = tuple(
            CPoint(at_infinity=True)
            if entry.get("infinity", False)
            else CPoint(float(entry["re"]), float(entry.get("im", 0.0)))
            for entry in data["points"]
        )
        weights = np.array([float(w) for w in data["weights"]], dtype=float)
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise ValidationError(f"measure JSON is malformed: {e}") from e
    return DiscreteMeasure(points, weights, domain)


def load_measure(path: str | Path) -> DiscreteMeasure:
    """Read a measure JSON file.

    Raises:
        ValidationError: If the file is unreadable or malformed.
    """
    try:
        with open(path) as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ValidationError(f"cannot read measure file {path}: {e}") from e
    return measure_from_json(data)


def save_measure(mu: DiscreteMeasure, path: str | Path) -> None:
    with open(path, "w") as f:
        json.dump(measure_to_json(mu), f, indent=2)
        f.write("\n")
