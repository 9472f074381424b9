"""Tests for moebius module."""

import math

import numpy as np
import pytest

from lib.errors import PoleEvaluationError, ValidationError
from lib.moebius import (
    INFINITY,
    BlaschkeVariant,
    CPoint,
    Domain,
    PoleSeq,
    as_point,
    blaschke,
    eta,
    eta_of,
    hat_point,
    mobius_forward,
    mobius_inverse,
    varpi,
    zeta,
    zeta_inverse,
)


def random_disk(rng, count, radius=0.99):
    r = radius * np.sqrt(rng.uniform(0, 1, count))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, count))


class TestCPoint:
    """Tests for CPoint helpers."""

    def test_from_complex_round_trip(self):
        """Should keep finite coordinates."""
        point = CPoint.from_complex(0.25 - 2j)
        assert point.is_finite
        assert point.to_complex() == 0.25 - 2j

    def test_non_finite_becomes_infinity(self):
        """Should map non-finite values to the point at infinity."""
        assert CPoint.from_complex(complex(math.inf, 0)) is INFINITY

    def test_infinity_has_no_finite_value(self):
        """Should raise when asking infinity for its value."""
        with pytest.raises(ValidationError):
            INFINITY.to_complex()

    def test_str(self):
        """Should format as re,im or inf."""
        assert str(INFINITY) == "inf"
        assert str(CPoint(1.0, -0.5)) == "1.0,-0.5"


class TestPoleSeq:
    """Tests for PoleSeq."""

    def test_alpha0_by_domain(self):
        """Should use 0 on the circle and i on the line."""
        assert PoleSeq((0.1,)).alpha0 == 0
        assert PoleSeq((2j,), Domain.LINE).alpha0 == 1j

    def test_pole_zero_is_base_point(self):
        """Should return α_0 for index 0 and α_k for k >= 1."""
        poles = PoleSeq((0.1, 0.2j))
        assert poles.pole(0) == 0
        assert poles.pole(2) == 0.2j

    def test_pole_index_out_of_range(self):
        """Should reject indices beyond the sequence."""
        with pytest.raises(ValidationError):
            PoleSeq((0.1,)).pole(2)

    def test_with_base(self):
        """Should prepend α_0 and truncate."""
        poles = PoleSeq((0.1, 0.2, 0.3))
        assert np.allclose(poles.with_base(), [0, 0.1, 0.2, 0.3])
        assert np.allclose(poles.with_base(2), [0, 0.1])
        with pytest.raises(ValidationError):
            poles.with_base(5)

    def test_rejects_pole_on_circle(self):
        """Should cite the compactness margin for |alpha| = 1."""
        with pytest.raises(ValidationError, match="compactness margin"):
            PoleSeq((1.0,))

    def test_rejects_line_pole_below_margin(self):
        """Should reject line poles too close to the real axis."""
        with pytest.raises(ValidationError, match="compactness margin"):
            PoleSeq((1.0 + 1e-12j,), Domain.LINE)

    def test_constant(self):
        """Should repeat the base point by default."""
        poles = PoleSeq.constant(3, domain=Domain.LINE)
        assert poles.alphas == (1j, 1j, 1j)

    def test_require(self):
        """Should raise when too few poles are available."""
        with pytest.raises(ValidationError):
            PoleSeq((0.1,)).require(2)


class TestMobiusForward:
    """Tests for mobius_forward function."""

    def test_identity_at_zero(self):
        """Should return z for alpha = 0."""
        assert mobius_forward(0, 0.3 + 0.4j).to_complex() == pytest.approx(0.3 + 0.4j)

    def test_alpha_maps_to_zero(self):
        """Should send alpha to 0."""
        assert abs(mobius_forward(0.3 - 0.2j, 0.3 - 0.2j).to_complex()) < 1e-15

    def test_real_alpha_fixes_one(self):
        """Should fix z = 1 for real alpha."""
        assert mobius_forward(0.5, 1).to_complex() == pytest.approx(1.0)

    def test_pole_gives_infinity(self):
        """Should return infinity at 1/conj(alpha)."""
        assert mobius_forward(0.5, 2.0).at_infinity

    def test_infinity_maps_to_minus_inverse_conjugate(self):
        """Should send infinity to −1/conj(alpha)."""
        assert mobius_forward(0.5j, INFINITY).to_complex() == pytest.approx(-1 / (-0.5j))
        assert mobius_forward(0, INFINITY).at_infinity

    def test_circle_preserved(self):
        """Should keep random points of T on T."""
        rng = np.random.default_rng(1)
        alphas = random_disk(rng, 1000)
        zs = np.exp(2j * np.pi * rng.uniform(0, 1, 1000))
        for alpha, z in zip(alphas, zs):
            assert abs(abs(mobius_forward(alpha, z).to_complex()) - 1) < 1e-13

    def test_rejects_alpha_outside_disk(self):
        """Should reject |alpha| >= 1."""
        with pytest.raises(ValidationError):
            mobius_forward(1.0, 0.0)

    def test_difference_identity(self):
        """Should satisfy ζ(z) − ζ(λ) = ϖ_α(α)(z − λ)/(ϖ_α(z)ϖ_α(λ))."""
        rng = np.random.default_rng(2)
        for alpha, z, lam in zip(random_disk(rng, 50), random_disk(rng, 50), random_disk(rng, 50)):
            lhs = zeta(alpha, z) - zeta(alpha, lam)
            rhs = varpi(alpha, alpha) / (varpi(alpha, z) * varpi(alpha, lam)) * (z - lam)
            assert abs(lhs - rhs) < 1e-12


class TestMobiusInverse:
    """Tests for mobius_inverse function."""

    def test_zero_maps_to_alpha(self):
        """Should send 0 to alpha."""
        assert mobius_inverse(0.2 + 0.1j, 0).to_complex() == pytest.approx(0.2 + 0.1j)

    def test_identity_at_zero(self):
        """Should return w for alpha = 0."""
        assert mobius_inverse(0, 0.5j).to_complex() == pytest.approx(0.5j)

    def test_round_trip(self):
        """Should undo mobius_forward."""
        value = mobius_inverse(0.3j, mobius_forward(0.3j, 0.7)).to_complex()
        assert abs(value - 0.7) < 1e-14

    def test_random_round_trip(self):
        """Should undo mobius_forward on random inputs."""
        rng = np.random.default_rng(3)
        for alpha, z in zip(random_disk(rng, 200), random_disk(rng, 200, radius=3.0)):
            if abs(z - 1 / np.conj(alpha)) < 1e-3:
                continue
            back = mobius_inverse(alpha, mobius_forward(alpha, z)).to_complex()
            assert abs(back - z) < 1e-12 * max(1.0, abs(z))


class TestLineMaps:
    """Tests for the vectorized helpers on the line domain."""

    def test_zeta_line(self):
        """Should evaluate (z − α)/(z − conj α)."""
        assert zeta(2j, 0, Domain.LINE) == pytest.approx(-1)

    def test_zeta_inverse_line(self):
        """Should invert zeta on the line."""
        alpha = 0.5 + 2j
        z = 1.5 + 0.3j
        w = zeta(alpha, z, Domain.LINE)
        assert zeta_inverse(alpha, w, Domain.LINE) == pytest.approx(z)

    def test_vectorized(self):
        """Should accept numpy arrays."""
        z = np.array([0.0, 1.0, -1.0])
        assert np.allclose(np.abs(zeta(1j, z, Domain.LINE)), 1.0)


class TestEta:
    """Tests for eta and eta_of functions."""

    def test_values(self):
        """Should compute sqrt(1 − |alpha|²)."""
        assert eta(0) == 1.0
        assert eta(0.5) == pytest.approx(0.8660254037844386)
        assert eta(0.6 + 0j) == pytest.approx(0.8)

    def test_rejects_boundary(self):
        """Should fail for |alpha| >= 1."""
        with pytest.raises(ValidationError):
            eta(1.0)

    def test_line(self):
        """Should compute sqrt(Im alpha) on the line."""
        assert eta_of(3 + 4j, Domain.LINE) == pytest.approx(2.0)
        with pytest.raises(ValidationError):
            eta_of(1.0, Domain.LINE)


class TestHatPoint:
    """Tests for hat_point function."""

    def test_circle(self):
        """Should return 1/conj(alpha), infinity for alpha = 0."""
        assert hat_point(0.5j).to_complex() == pytest.approx(1 / (-0.5j))
        assert hat_point(0).at_infinity

    def test_line(self):
        """Should return conj(alpha) on the line."""
        assert hat_point(1 + 2j, Domain.LINE).to_complex() == 1 - 2j


class TestBlaschke:
    """Tests for blaschke function."""

    def test_empty_product(self):
        """Should return 1 for n = 0."""
        poles = PoleSeq((0.3,))
        for variant in BlaschkeVariant:
            assert blaschke(poles, 0, 0.2j, variant) == 1

    def test_polynomial_case(self):
        """Should return z^n for zero poles."""
        poles = PoleSeq.constant(4)
        z = 0.3 + 0.6j
        assert blaschke(poles, 4, z) == pytest.approx(z**4)

    def test_real_pole_fixes_one(self):
        """Should give 1 at z = 1 for a real pole."""
        assert blaschke(PoleSeq((0.5,)), 1, 1) == pytest.approx(1.0)

    def test_unimodular_on_circle(self):
        """Should have modulus 1 on T."""
        rng = np.random.default_rng(4)
        poles = PoleSeq(tuple(random_disk(rng, 6, radius=0.9)))
        for z in np.exp(2j * np.pi * rng.uniform(0, 1, 20)):
            assert abs(abs(blaschke(poles, 6, z)) - 1) < 1e-13

    def test_full_is_odd_times_even(self):
        """Should factor B_2n into the odd and even products."""
        rng = np.random.default_rng(5)
        poles = PoleSeq(tuple(random_disk(rng, 8, radius=0.9)))
        z = 0.4 - 0.1j
        full = blaschke(poles, 8, z)
        odd = blaschke(poles, 4, z, BlaschkeVariant.ODD)
        even = blaschke(poles, 4, z, "even")
        assert abs(full - odd * even) < 1e-13

    def test_index_overflow(self):
        """Should reject products that need missing poles."""
        with pytest.raises(ValidationError):
            blaschke(PoleSeq((0.1, 0.2)), 2, 0.5, BlaschkeVariant.EVEN)

    def test_pole_raises(self):
        """Should raise at a pole of a factor."""
        with pytest.raises(PoleEvaluationError):
            blaschke(PoleSeq((0.5,)), 1, 2.0)

    def test_accepts_points(self):
        """Should accept CPoint arguments."""
        assert blaschke(PoleSeq((0.0,)), 1, as_point(0.5)) == pytest.approx(0.5)
