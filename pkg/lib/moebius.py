#!/usr/bin/env python3
"""Scalar Möbius maps, Blaschke products and eta factors.

Circle domain: ζ_α(z) = (z − α)/(1 − ᾱz) with ϖ_α(z) = 1 − ᾱz, ϖ*_α(z) = z − α,
an automorphism of the unit disk. Line domain: ζ_α(z) = (z − α)/(z − ᾱ) with
ϖ_α(z) = z − ᾱ, mapping the upper half plane onto the disk. The helpers
`varpi`, `varpi_star`, `zeta` and `zeta_inverse` are vectorized over numpy
arrays and shared by every other module.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

try:
    from .config import DEFAULT_CONFIG
    from .errors import PoleEvaluationError, ValidationError
except ImportError:
    from config import DEFAULT_CONFIG
    from errors import PoleEvaluationError, ValidationError


DEFAULT_MARGIN = DEFAULT_CONFIG["compactnessMargin"]
POLE_PROXIMITY = DEFAULT_CONFIG["poleProximity"]


class Domain(Enum):
    """Where the orthogonality measure lives."""

    CIRCLE = "circle"  # unit circle T, poles in the disk
    LINE = "line"  # extended real line, poles in the upper half plane

    @property
    def alpha0(self) -> complex:
        """Distinguished base point α_0."""
        return 0j if self is Domain.CIRCLE else 1j


class BlaschkeVariant(Enum):
    """Which ζ_k factors enter a Blaschke product."""

    FULL = "full"  # ζ_1 ζ_2 ... ζ_n
    ODD = "odd"  # ζ_1 ζ_3 ... ζ_{2n-1}
    EVEN = "even"  # ζ_2 ζ_4 ... ζ_{2n}


@dataclass(frozen=True)
class CPoint:
    """A point of the extended complex plane."""

    re: float = 0.0
    im: float = 0.0
    at_infinity: bool = False  # re/im ignored when set

    @classmethod
    def from_complex(cls, z: complex) -> "CPoint":
        z = complex(z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            return INFINITY
        return cls(z.real, z.imag)

    @property
    def is_finite(self) -> bool:
        return not self.at_infinity

    def to_complex(self) -> complex:
        """Return the finite value.

        Raises:
            ValidationError: If the point is at infinity.
        """
        if self.at_infinity:
            raise ValidationError("point at infinity has no finite value")
        return complex(self.re, self.im)

    def __str__(self) -> str:
        if self.at_infinity:
            return "inf"
        return f"{self.re!r},{self.im!r}"


INFINITY = CPoint(at_infinity=True)


def as_point(z: "complex | float | CPoint") -> CPoint:
    """Coerce a number or CPoint to a CPoint."""
    if isinstance(z, CPoint):
        return z
    return CPoint.from_complex(z)


@dataclass(frozen=True)
class PoleSeq:
    """Pole parameters α_1..α_N plus the distinguished α_0 of the domain.

    Circle poles must satisfy |α_k| <= 1 - margin; line poles Im α_k >= margin.
    """

    alphas: tuple[complex, ...]
    domain: Domain = Domain.CIRCLE
    margin: float = field(default=DEFAULT_MARGIN, compare=False)

    def __post_init__(self) -> None:
        values = tuple(complex(x) for x in self.alphas)
        object.__setattr__(self, "alphas", values)
        for k, alpha in enumerate(values, start=1):
            if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
                raise ValidationError(f"alpha_{k} is not finite")
            if self.domain is Domain.CIRCLE and abs(alpha) > 1.0 - self.margin:
                raise ValidationError(
                    f"alpha_{k} = {alpha} violates the compactness margin "
                    f"|alpha| <= 1 - {self.margin}"
                )
            if self.domain is Domain.LINE and alpha.imag < self.margin:
                raise ValidationError(
                    f"alpha_{k} = {alpha} violates the compactness margin "
                    f"Im alpha >= {self.margin}"
                )

    @classmethod
    def constant(
        cls, count: int, value: complex | None = None, domain: Domain = Domain.CIRCLE
    ) -> "PoleSeq":
        """Poles all equal to value (α_0 of the domain when omitted)."""
        if value is None:
            value = domain.alpha0
        return cls(tuple([value] * count), domain)

    @property
    def alpha0(self) -> complex:
        return self.domain.alpha0

    def __len__(self) -> int:
        return len(self.alphas)

    def pole(self, k: int) -> complex:
        """Return α_k, with α_0 the domain base point.

        Raises:
            ValidationError: If k is outside 0..N.
        """
        if k == 0:
            return self.alpha0
        if 1 <= k <= len(self.alphas):
            return self.alphas[k - 1]
        raise ValidationError(f"pole index {k} out of range 0..{len(self.alphas)}")

    def with_base(self, count: int | None = None) -> np.ndarray:
        """Array (α_0, α_1, ..., α_{count-1}); all N+1 values when count is None."""
        full = np.array((self.alpha0, *self.alphas), dtype=complex)
        if count is None:
            return full
        if count > len(full):
            raise ValidationError(f"need {count - 1} poles, only {len(self.alphas)} given")
        return full[:count]

    def require(self, n: int) -> None:
        """Raise if fewer than n poles are available."""
        if n > len(self.alphas):
            raise ValidationError(f"order {n} needs {n} poles, only {len(self.alphas)} given")


def varpi(alpha, z, domain: Domain = Domain.CIRCLE):
    """ϖ_α(z): 1 − ᾱz on the circle, z − ᾱ on the line."""
    if domain is Domain.CIRCLE:
        return 1 - np.conj(alpha) * z
    return z - np.conj(alpha)


def varpi_star(alpha, z, domain: Domain = Domain.CIRCLE):
    """ϖ*_α(z) = z − α on both domains."""
    return z - alpha


def zeta(alpha, z, domain: Domain = Domain.CIRCLE):
    """ζ_α(z) = ϖ*_α(z)/ϖ_α(z) for finite z."""
    return varpi_star(alpha, z, domain) / varpi(alpha, z, domain)


def zeta_inverse(alpha, w, domain: Domain = Domain.CIRCLE):
    """ζ̃_α(w), the inverse of ζ_α, for finite w."""
    if domain is Domain.CIRCLE:
        return (w + alpha) / (1 + np.conj(alpha) * w)
    return (alpha - np.conj(alpha) * w) / (1 - w)


def zeta_at_infinity(alpha: complex, domain: Domain = Domain.CIRCLE) -> CPoint:
    """Value of ζ_α at the point at infinity."""
    if domain is Domain.LINE:
        return CPoint(1.0, 0.0)
    if alpha == 0:
        return INFINITY
    return CPoint.from_complex(-1 / np.conj(alpha))


def eta_of(alpha: complex, domain: Domain = Domain.CIRCLE) -> float:
    """η_α: √(1 − |α|²) on the circle, √(Im α) on the line.

    Raises:
        ValidationError: If alpha is outside the open disk (circle) or the
            open upper half plane (line).
    """
    alpha = complex(alpha)
    if domain is Domain.CIRCLE:
        if abs(alpha) >= 1.0:
            raise ValidationError(f"|alpha| = {abs(alpha)} is not inside the unit disk")
        return math.sqrt(1.0 - abs(alpha) ** 2)
    if alpha.imag <= 0.0:
        raise ValidationError(f"alpha = {alpha} is not in the upper half plane")
    return math.sqrt(alpha.imag)


def hat_point(alpha: complex, domain: Domain = Domain.CIRCLE) -> CPoint:
    """Pole α̂ of ζ_α: 1/ᾱ on the circle (infinity for α = 0), ᾱ on the line."""
    alpha = complex(alpha)
    if domain is Domain.LINE:
        return CPoint.from_complex(alpha.conjugate())
    if alpha == 0:
        return INFINITY
    return CPoint.from_complex(1 / alpha.conjugate())


def _check_disk(alpha: complex) -> complex:
    alpha = complex(alpha)
    if abs(alpha) >= 1.0:
        raise ValidationError(f"|alpha| = {abs(alpha)} is not inside the unit disk")
    return alpha


def mobius_forward(
    alpha: complex, z: "complex | CPoint", proximity: float = POLE_PROXIMITY
) -> CPoint:
    """Evaluate the disk automorphism ζ_α(z) = (z − α)/(1 − ᾱz).

    Args:
        alpha: Parameter in the open unit disk.
        z: Point of the extended plane.
        proximity: Distance to α̂ treated as hitting the pole.

    Returns:
        ζ_α(z); the point at infinity when z lies within the pole
        proximity of α̂ = 1/ᾱ.

    Raises:
        ValidationError: If |alpha| >= 1.
    """
    alpha = _check_disk(alpha)
    point = as_point(z)
    if point.at_infinity:
        return zeta_at_infinity(alpha)
    value = point.to_complex()
    pole = hat_point(alpha)
    if pole.is_finite and abs(value - pole.to_complex()) < proximity:
        return INFINITY
    return CPoint.from_complex(zeta(alpha, value))


def mobius_inverse(
    alpha: complex, w: "complex | CPoint", proximity: float = POLE_PROXIMITY
) -> CPoint:
    """Evaluate ζ̃_α(w) = ζ_{−α}(w).

    Raises:
        ValidationError: If |alpha| >= 1.
    """
    return mobius_forward(-complex(alpha), w, proximity)


def eta(alpha: complex) -> float:
    """Return η_α = √(1 − |α|²) for α in the unit disk."""
    return eta_of(alpha, Domain.CIRCLE)


def _blaschke_indices(variant: BlaschkeVariant, n: int) -> list[int]:
    if variant is BlaschkeVariant.FULL:
        return list(range(1, n + 1))
    if variant is BlaschkeVariant.ODD:
        return list(range(1, 2 * n, 2))
    return list(range(2, 2 * n + 1, 2))


def blaschke(
    poles: PoleSeq,
    n: int,
    z: "complex | CPoint",
    variant: BlaschkeVariant | str = BlaschkeVariant.FULL,
    proximity: float = POLE_PROXIMITY,
) -> complex:
    """Evaluate a finite Blaschke product.

    FULL gives B_n = ζ_1⋯ζ_n, ODD gives B^o_n = ζ_1ζ_3⋯ζ_{2n−1} and EVEN
    gives B^e_n = ζ_2ζ_4⋯ζ_{2n}. B_0 = 1 for every variant.

    Args:
        poles: Pole sequence providing α_k (either domain).
        n: Number of factors.
        z: Evaluation point.
        variant: Which factors to multiply.
        proximity: Smallest accepted |ϖ_k(z)|.

    Returns:
        The product value.

    Raises:
        ValidationError: If the product needs more poles than available.
        PoleEvaluationError: If z is a pole of some factor.
    """
    variant = BlaschkeVariant(variant)
    if n < 0:
        raise ValidationError(f"Blaschke index must be non-negative, got {n}")
    indices = _blaschke_indices(variant, n)
    if indices and indices[-1] > len(poles):
        raise ValidationError(
            f"{variant.value} Blaschke product of index {n} needs pole "
            f"{indices[-1]}, only {len(poles)} given"
        )
    point = as_point(z)
    product = 1 + 0j
    for k in indices:
        alpha = poles.pole(k)
        if point.at_infinity:
            factor = zeta_at_infinity(alpha, poles.domain)
        else:
            value = point.to_complex()
            denominator = varpi(alpha, value, poles.domain)
            if abs(denominator) < proximity:
                raise PoleEvaluationError(
                    f"z = {value} is a pole of zeta_{k}", pole=alpha, index=k
                )
            factor = CPoint.from_complex(varpi_star(alpha, value, poles.domain) / denominator)
        if factor.at_infinity:
            raise PoleEvaluationError(f"zeta_{k} is infinite at z = inf", pole=alpha, index=k)
        product *= factor.to_complex()
    return product
