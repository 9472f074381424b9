#!/usr/bin/env python3
"""Recurrence evaluation of orthogonal rational functions.

φ_0 = φ_0* = 1 and, for n >= 1,

    φ_n  = e_n (ϖ_{n−1}/ϖ_n) (ζ_{n−1} φ_{n−1} + a_n φ*_{n−1})
    φ_n* = e_n (ϖ_{n−1}/ϖ_n) (ā_n ζ_{n−1} φ_{n−1} + φ*_{n−1})

with e_n = η_n / (η_{n−1} ρ_n). The same recurrence serves the circle and the
real line; only ϖ, ζ and η change with the domain of the pole sequence.
"""

import math
from dataclasses import dataclass

import numpy as np

try:
    from .config import DEFAULT_CONFIG
    from .errors import PoleEvaluationError, ValidationError
    from .moebius import CPoint, Domain, PoleSeq, as_point, eta_of, hat_point, varpi, varpi_star
except ImportError:
    from config import DEFAULT_CONFIG
    from errors import PoleEvaluationError, ValidationError
    from moebius import CPoint, Domain, PoleSeq, as_point, eta_of, hat_point, varpi, varpi_star


POLE_TOLERANCE = DEFAULT_CONFIG["poleEvaluationTolerance"]
UNIMODULAR_TOLERANCE = 1e-10


@dataclass(frozen=True)
class ParamSeq:
    """Recurrence parameters a_1..a_N and an optional terminal value.

    With a terminal u (|u| = 1) the sequence describes an order N+1 boundary
    problem: u takes the place of a_{N+1} in the boundary constructions.
    """

    a: tuple[complex, ...]
    terminal: complex | None = None

    def __post_init__(self) -> None:
        values = tuple(complex(x) for x in self.a)
        object.__setattr__(self, "a", values)
        for k, value in enumerate(values, start=1):
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise ValidationError(f"a_{k} is not finite")
            if abs(value) >= 1.0:
                raise ValidationError(f"|a_{k}| = {abs(value)} is not inside the unit disk")
        if self.terminal is not None:
            u = complex(self.terminal)
            object.__setattr__(self, "terminal", u)
            if abs(abs(u) - 1.0) > UNIMODULAR_TOLERANCE:
                raise ValidationError(f"terminal value {u} is not unimodular (|u| = {abs(u)})")

    @classmethod
    def zeros(cls, count: int) -> "ParamSeq":
        return cls(tuple([0j] * count))

    def __len__(self) -> int:
        return len(self.a)

    @property
    def order(self) -> int:
        """Largest order the sequence supports, counting the terminal."""
        return len(self.a) + (1 if self.terminal is not None else 0)

    def param(self, k: int) -> complex:
        """Return a_k (1-based)."""
        if not 1 <= k <= len(self.a):
            raise ValidationError(f"parameter index {k} out of range 1..{len(self.a)}")
        return self.a[k - 1]

    def coefficients(self, n: int, boundary: complex | None = None) -> np.ndarray:
        """Return a_1..a_n, with a_n replaced by boundary when given.

        Raises:
            ValidationError: If too few parameters are available.
        """
        if n < 1:
            raise ValidationError(f"order must be at least 1, got {n}")
        if boundary is None:
            if n > len(self.a):
                raise ValidationError(f"order {n} needs {n} parameters, only {len(self.a)} given")
            return np.array(self.a[:n], dtype=complex)
        if n - 1 > len(self.a):
            raise ValidationError(
                f"order {n} with boundary needs {n - 1} parameters, only {len(self.a)} given"
            )
        u = complex(boundary)
        if abs(abs(u) - 1.0) > UNIMODULAR_TOLERANCE:
            raise ValidationError(f"boundary value {u} is not unimodular")
        return np.array((*self.a[: n - 1], u), dtype=complex)


@dataclass(frozen=True, eq=False)
class DerivedParams:
    """ρ_k, ρ_k^±, e_k for k = 1..N (index 0 holds k = 1)."""

    rho: np.ndarray  # √(1 − |a_k|²)
    rho_plus: np.ndarray  # (η_{k−1}/η_k) ρ_k
    rho_minus: np.ndarray  # (η_k/η_{k−1}) ρ_k
    e: np.ndarray  # η_k / (η_{k−1} ρ_k)


@dataclass(frozen=True)
class OrfValue:
    """Paired evaluation (φ_n(z), φ_n*(z)) or (χ_n(z), χ_{n*}(z))."""

    n: int
    z: CPoint
    phi: complex
    phi_star: complex


def pole_etas(poles: PoleSeq, n: int) -> np.ndarray:
    """Return η_0..η_n for the pole sequence."""
    poles.require(n)
    return np.array([eta_of(poles.pole(k), poles.domain) for k in range(n + 1)])


def derived_params(a: ParamSeq, poles: PoleSeq) -> DerivedParams:
    """Compute ρ, ρ^±, e for every parameter.

    Args:
        a: Parameters a_1..a_N, all inside the disk.
        poles: At least N poles.

    Returns:
        DerivedParams with arrays of length N.

    Raises:
        ValidationError: If fewer than N poles are given.
    """
    count = len(a)
    etas = pole_etas(poles, count)
    values = np.array(a.a, dtype=complex)
    rho = np.sqrt(1.0 - np.abs(values) ** 2)
    ratio = etas[:-1] / etas[1:]
    return DerivedParams(
        rho=rho,
        rho_plus=ratio * rho,
        rho_minus=rho / ratio,
        e=1.0 / (ratio * rho),
    )


def _split_points(z) -> tuple[np.ndarray, np.ndarray]:
    """Return (finite values, infinity mask) for a point or an iterable of points."""
    if isinstance(z, CPoint):
        z = [z]
    elif np.isscalar(z):
        z = [z]
    points = [as_point(p) for p in z]
    mask = np.array([p.at_infinity for p in points], dtype=bool)
    values = np.array([0j if p.at_infinity else p.to_complex() for p in points], dtype=complex)
    return values, mask


def check_poles(
    poles: PoleSeq, n: int, z: np.ndarray, tolerance: float = POLE_TOLERANCE, first: int = 1
) -> None:
    """Raise if any finite z is within tolerance of α̂_k, first <= k <= n."""
    for k in range(first, n + 1):
        pole = hat_point(poles.pole(k), poles.domain)
        if pole.at_infinity or z.size == 0:
            continue
        distance = float(np.min(np.abs(z - pole.to_complex())))
        if distance < tolerance:
            raise PoleEvaluationError(
                f"evaluation point within {distance:.3e} of the pole {pole} of alpha_{k}",
                pole=pole.to_complex(),
                index=k,
            )


def check_blaschke_zeros(
    poles: PoleSeq, n: int, z: np.ndarray, tolerance: float = POLE_TOLERANCE
) -> None:
    """Raise if any finite z is within tolerance of α_k, 1 <= k <= n, where ζ_k vanishes."""
    if z.size == 0:
        return
    for k in range(1, n + 1):
        alpha = poles.pole(k)
        distance = float(np.min(np.abs(z - alpha)))
        if distance < tolerance:
            raise PoleEvaluationError(
                f"evaluation point within {distance:.3e} of alpha_{k} = {alpha}, "
                "where a Blaschke divisor vanishes",
                pole=alpha,
                index=k,
            )


def orf_table(
    coefs: np.ndarray,
    poles: PoleSeq,
    z,
    tolerance: float = POLE_TOLERANCE,
) -> tuple[np.ndarray, np.ndarray]:
    """Iterate the recurrence for all orders at once.

    Args:
        coefs: a_1..a_n (all inside the disk).
        poles: Pole sequence with at least n poles.
        z: One point or an iterable of points; infinity allowed on the line.
        tolerance: Pole proximity that raises.

    Returns:
        (phi, phi_star), complex arrays of shape (n + 1, m) with row k holding
        φ_k and φ_k* at the m points.

    Raises:
        PoleEvaluationError: Near a pole α̂_k, or at infinity on the circle.
    """
    coefs = np.asarray(coefs, dtype=complex)
    n = coefs.size
    values, at_inf = _split_points(z)
    if at_inf.any() and poles.domain is Domain.CIRCLE:
        raise PoleEvaluationError("the point at infinity is not supported on the circle")
    check_poles(poles, n, values[~at_inf], tolerance)

    etas = pole_etas(poles, n)
    m = values.size
    phi = np.ones((n + 1, m), dtype=complex)
    phi_star = np.ones((n + 1, m), dtype=complex)
    for k in range(1, n + 1):
        a_k = coefs[k - 1]
        e_k = etas[k] / (etas[k - 1] * math.sqrt(1.0 - abs(a_k) ** 2))
        prev_alpha = poles.pole(k - 1)
        alpha = poles.pole(k)
        with np.errstate(divide="ignore", invalid="ignore"):
            den = varpi(alpha, values, poles.domain)
            shifted = varpi_star(prev_alpha, values, poles.domain) / den
            ratio = varpi(prev_alpha, values, poles.domain) / den
        shifted[at_inf] = 1.0
        ratio[at_inf] = 1.0
        phi[k] = e_k * (shifted * phi[k - 1] + a_k * ratio * phi_star[k - 1])
        phi_star[k] = e_k * (np.conj(a_k) * shifted * phi[k - 1] + ratio * phi_star[k - 1])
    return phi, phi_star


def eval_orf_sequence(
    a: ParamSeq, poles: PoleSeq, n: int, z, tolerance: float = POLE_TOLERANCE
) -> tuple[np.ndarray, np.ndarray]:
    """Return φ_0..φ_n and φ*_0..φ*_n at one or many points."""
    if n == 0:
        values, _ = _split_points(z)
        return np.ones((1, values.size), dtype=complex), np.ones((1, values.size), dtype=complex)
    return orf_table(a.coefficients(n), poles, z, tolerance)


def eval_orf(
    a: ParamSeq, poles: PoleSeq, n: int, z, tolerance: float = POLE_TOLERANCE
) -> OrfValue:
    """Evaluate (φ_n(z), φ_n*(z)) by the two-term recurrence.

    Args:
        a: Parameters, at least n of them.
        poles: Poles, at least n of them.
        n: Order.
        z: Evaluation point (complex or CPoint).
        tolerance: Distance to a pole α̂_k that raises.

    Returns:
        OrfValue for order n.

    Raises:
        ValidationError: If n exceeds the available data.
        PoleEvaluationError: If z is within tolerance of a pole α̂_k, k <= n.
    """
    if n < 0:
        raise ValidationError(f"order must be non-negative, got {n}")
    phi, phi_star = eval_orf_sequence(a, poles, n, z, tolerance)
    return OrfValue(n, as_point(z), complex(phi[n, 0]), complex(phi_star[n, 0]))


def _zeta_factors(poles: PoleSeq, indices, values: np.ndarray, at_inf: np.ndarray) -> np.ndarray:
    """Product of ζ_k over the given indices, at every point."""
    product = np.ones(values.size, dtype=complex)
    for k in indices:
        alpha = poles.pole(k)
        with np.errstate(divide="ignore", invalid="ignore"):
            factor = varpi_star(alpha, values, poles.domain) / varpi(alpha, values, poles.domain)
        factor[at_inf] = 1.0
        product *= factor
    return product


def chi_table(
    a: ParamSeq, poles: PoleSeq, n: int, z, tolerance: float = POLE_TOLERANCE
) -> tuple[np.ndarray, np.ndarray]:
    """Return χ_0..χ_n and χ_{0*}..χ_{n*} at one or many points.

    χ_{2m} = φ*_{2m}/B^e_m, χ_{2m+1} = φ_{2m+1}/B^e_m,
    χ_{2m*} = φ_{2m}/B^o_m, χ_{2m+1*} = φ*_{2m+1}/B^o_{m+1}.
    """
    values, at_inf = _split_points(z)
    check_poles(poles, n, values[~at_inf], tolerance)
    check_blaschke_zeros(poles, n, values[~at_inf], tolerance)
    phi, phi_star = eval_orf_sequence(a, poles, n, z, tolerance)
    chi = np.empty_like(phi)
    chi_star = np.empty_like(phi)
    for k in range(n + 1):
        m = k // 2
        even_product = _zeta_factors(poles, range(2, 2 * m + 1, 2), values, at_inf)
        if k % 2 == 0:
            odd_product = _zeta_factors(poles, range(1, 2 * m, 2), values, at_inf)
            chi[k] = phi_star[k] / even_product
            chi_star[k] = phi[k] / odd_product
        else:
            odd_product = _zeta_factors(poles, range(1, 2 * m + 2, 2), values, at_inf)
            chi[k] = phi[k] / even_product
            chi_star[k] = phi_star[k] / odd_product
    return chi, chi_star


def eval_chi(
    a: ParamSeq, poles: PoleSeq, n: int, z, tolerance: float = POLE_TOLERANCE
) -> OrfValue:
    """Evaluate (χ_n(z), χ_{n*}(z)) for the Laurent-type basis.

    The division by Blaschke factors is undefined where they vanish
    (z = α_k); callers needing those points use eigenvector_rows.

    Raises:
        PoleEvaluationError: Near a pole α̂_k or a zero α_k, k <= n.
    """
    chi, chi_star = chi_table(a, poles, n, z, tolerance)
    return OrfValue(n, as_point(z), complex(chi[n, 0]), complex(chi_star[n, 0]))


def eigenvector_rows(
    a: ParamSeq, poles: PoleSeq, n: int, lam: complex, tolerance: float = POLE_TOLERANCE
) -> tuple[np.ndarray, np.ndarray]:
    """Return (X_n(λ), Y_n(λ)), the left and transposed right eigenvectors.

    X_n = B^e_l (χ_0 ... χ_{n−1}) with l = [(n−1)/2] and
    Y_n = B^o_m (χ_{0*} ... χ_{n−1*}) with m = [n/2]; the Blaschke ratios are
    formed as products so no division by a vanishing factor occurs.
    """
    phi, phi_star = eval_orf_sequence(a, poles, n - 1, lam, tolerance)
    values, at_inf = _split_points(lam)
    l_index = (n - 1) // 2
    m_index = n // 2
    x = np.empty(n, dtype=complex)
    y = np.empty(n, dtype=complex)
    for k in range(n):
        half = k // 2
        if k % 2 == 0:
            x_scale = _zeta_factors(poles, range(2 * half + 2, 2 * l_index + 1, 2), values, at_inf)
            y_scale = _zeta_factors(poles, range(2 * half + 1, 2 * m_index, 2), values, at_inf)
            x[k] = x_scale[0] * phi_star[k, 0]
            y[k] = y_scale[0] * phi[k, 0]
        else:
            x_scale = _zeta_factors(poles, range(2 * half + 2, 2 * l_index + 1, 2), values, at_inf)
            y_scale = _zeta_factors(poles, range(2 * half + 3, 2 * m_index, 2), values, at_inf)
            x[k] = x_scale[0] * phi[k, 0]
            y[k] = y_scale[0] * phi_star[k, 0]
    return x, y


def porf_u(a_n: complex, v: complex) -> complex:
    """Return u = ζ̃_{a_n}(v) = (v + a_n)/(1 + ā_n v).

    Examples:
        porf_u(0.5, 1) == 1 for real a_n.
    """
    a_n = complex(a_n)
    v = complex(v)
    if abs(a_n) >= 1.0:
        raise ValidationError(f"|a_n| = {abs(a_n)} is not inside the unit disk")
    if abs(abs(v) - 1.0) > UNIMODULAR_TOLERANCE:
        raise ValidationError(f"v = {v} is not unimodular")
    return (v + a_n) / (1 + a_n.conjugate() * v)


def eval_porf(
    a: ParamSeq, poles: PoleSeq, n: int, v: complex, z, tolerance: float = POLE_TOLERANCE
) -> complex:
    """Evaluate the para-orthogonal function Q_n^v(z) = φ_n(z) + v φ_n*(z).

    Raises:
        ValidationError: If |v| != 1.
        PoleEvaluationError: Near a pole.
    """
    v = complex(v)
    if abs(abs(v) - 1.0) > UNIMODULAR_TOLERANCE:
        raise ValidationError(f"v = {v} is not unimodular")
    value = eval_orf(a, poles, n, z, tolerance)
    return value.phi + v * value.phi_star


def porf_kernel(
    a: ParamSeq, poles: PoleSeq, n: int, u: complex, z, tolerance: float = POLE_TOLERANCE
) -> complex:
    """Return (ϖ_{n−1}/ϖ_n)(z) (ζ_{n−1}(z) φ_{n−1}(z) + u φ*_{n−1}(z)).

    Q_n^v equals (1 + ā_n v) e_n times this kernel when u = ζ̃_{a_n}(v); the
    kernel stays defined for a boundary u with only n − 1 parameters known.
    """
    if n < 1:
        raise ValidationError(f"order must be at least 1, got {n}")
    phi, phi_star = eval_orf_sequence(a, poles, n - 1, z, tolerance)
    values, at_inf = _split_points(z)
    check_poles(poles, n, values[~at_inf], tolerance)
    if at_inf[0]:
        if poles.domain is Domain.CIRCLE:
            raise PoleEvaluationError("the point at infinity is not supported on the circle")
        return complex(phi[n - 1, 0] + u * phi_star[n - 1, 0])
    point = values[0]
    den = varpi(poles.pole(n), point, poles.domain)
    shifted = varpi_star(poles.pole(n - 1), point, poles.domain) / den
    ratio = varpi(poles.pole(n - 1), point, poles.domain) / den
    return complex(shifted * phi[n - 1, 0] + u * ratio * phi_star[n - 1, 0])


def _normalizing_factors(poles: PoleSeq, count: int) -> list[complex]:
    factors = []
    for k in range(1, count + 1):
        alpha = poles.pole(k)
        factors.append(1 + 0j if alpha == 0 else -abs(alpha) / alpha)
    return factors


def normalize_standard(a: ParamSeq, poles: PoleSeq) -> tuple[ParamSeq, list[complex]]:
    """Convert to the standard normalization Φ_n = z_1⋯z_n φ_n.

    With z_n = −|α_n|/α_n (1 when α_n = 0) the parameters relate by
    a_n = z̄_1⋯z̄_n b_n, hence b_n = z_1⋯z_n a_n.

    A terminal value is converted as the parameter of index N + 1.

    Returns:
        (b, zfactors).
    """
    poles.require(a.order)
    factors = _normalizing_factors(poles, a.order)
    chains = np.cumprod(factors)
    b = tuple(chain * value for chain, value in zip(chains, a.a))
    terminal = None if a.terminal is None else complex(chains[-1] * a.terminal)
    return ParamSeq(b, terminal), factors


def denormalize_standard(b: ParamSeq, poles: PoleSeq) -> ParamSeq:
    """Inverse of normalize_standard: a_n = z̄_1⋯z̄_n b_n."""
    poles.require(b.order)
    chains = np.conj(np.cumprod(_normalizing_factors(poles, b.order)))
    a = tuple(chain * value for chain, value in zip(chains, b.a))
    terminal = None if b.terminal is None else complex(chains[-1] * b.terminal)
    return ParamSeq(a, terminal)
