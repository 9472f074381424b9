"""Tests for spectral module."""

import math

import numpy as np
import pytest
import scipy.stats

from lib.errors import (
    ConditioningError,
    IndefinitePencilError,
    NodeCollisionError,
    ValidationError,
)
from lib.matrices import Family, truncated_rep
from lib.measures import DiscreteMeasure, orf_from_measure
from lib.moebius import PoleSeq, blaschke
from lib.orfcore import ParamSeq, eval_orf_sequence
from lib.spectral import (
    ZeroRoute,
    boundary_quadrature,
    compare_truncated_spectra,
    eigen_result_to_json,
    eigensolve,
    hausdorff_distance,
    krein_k,
    krein_single_point,
    krein_two_point,
    limit_point_sequence,
    lopez_arc,
    mass_point_weight,
    match_eigenvalues,
    pair_spectrum,
    porf_quadrature,
    quadrature_to_csv,
    reconstruct_measure,
    trailing_clusters,
    zeros_orf,
)


def random_disk(rng, count, radius=0.7):
    r = radius * np.sqrt(rng.uniform(0, 1, count))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, count))


def harmonic_params(count):
    """a_n = 1 − 1/n, whose limit points accumulate at −1."""
    return ParamSeq(tuple(1.0 - 1.0 / n for n in range(1, count + 1)))


class TestEigensolve:
    """Tests for eigensolve function."""

    def test_diagonal(self):
        """Should return the diagonal entries with zero residuals."""
        result = eigensolve(np.diag([1j, -1.0, 0.5]), want_right=True)
        assert np.allclose(np.sort_complex(result.values), [-1.0, 1j, 0.5])
        assert np.all(result.residuals < 1e-14)
        assert result.right_vectors.shape == (3, 3)
        assert result.left_vectors is None

    def test_left_vectors(self):
        """Should return left eigenvectors when asked."""
        M = np.array([[1.0, 2.0], [0.0, 3.0]])
        result = eigensolve(M, want_left=True)
        for k, value in enumerate(result.values):
            y = result.left_vectors[:, k]
            assert np.allclose(y.conj() @ M, value * y.conj())

    def test_rejects_large_matrix(self):
        """Should refuse matrices above the order cap."""
        with pytest.raises(ValidationError, match="cap"):
            eigensolve(np.eye(4), max_order=3)

    def test_rejects_non_square(self):
        """Should refuse non-square input."""
        with pytest.raises(ValidationError, match="square"):
            eigensolve(np.zeros((2, 3)))

    def test_unitary_conjugation(self):
        """Should recover d from Q diag(d) Q† with Q Haar-random unitary."""
        rng = np.random.default_rng(59)
        Q = scipy.stats.unitary_group.rvs(6, random_state=rng)
        d = random_disk(rng, 6, 0.9)
        result = eigensolve(Q @ np.diag(d) @ Q.conj().T, want_right=True)
        _, gap = match_eigenvalues(d, result.values)
        assert gap < 1e-12
        assert np.all(result.residuals < 1e-13)
        overlaps = np.abs(Q.conj().T @ result.right_vectors)
        assert np.allclose(np.sort(overlaps.max(axis=0)), 1.0)


class TestPairSpectrum:
    """Tests for pair_spectrum function."""

    def test_infinite_eigenvalue(self):
        """Should report β = 0 as an eigenvalue at infinity."""
        result = pair_spectrum(np.eye(2), np.diag([1.0, 0.0]))
        assert result.infinite.sum() == 1
        assert np.allclose(result.finite_values, [1.0])

    def test_singular_pencil(self):
        """Should raise when T and S share a null vector."""
        with pytest.raises(IndefinitePencilError):
            pair_spectrum(np.diag([1.0, 0.0]), np.diag([1.0, 0.0]))

    def test_shape_mismatch(self):
        """Should reject pencils of different sizes."""
        with pytest.raises(ValidationError):
            pair_spectrum(np.eye(2), np.eye(3))

    def test_json(self):
        """Should flag infinite values in the JSON form."""
        doc = eigen_result_to_json(pair_spectrum(np.eye(2), np.diag([1.0, 0.0])))
        assert [entry["infinity"] for entry in doc["values"]] == [False, True]


class TestZerosOrf:
    """Tests for zeros_orf function."""

    @pytest.mark.parametrize("via", list(ZeroRoute))
    def test_first_order(self, via):
        """Should give −a_1 for n = 1 and α_1 = 0."""
        zeros = zeros_orf(ParamSeq((0.5,)), PoleSeq.constant(1), 1, via)
        assert np.allclose(zeros, [-0.5])

    @pytest.mark.parametrize("via", ["V", "pair", "tridiagonal"])
    def test_routes_agree(self, via):
        """Should find the same zeros through every route."""
        rng = np.random.default_rng(60)
        a = ParamSeq(tuple(random_disk(rng, 7)))
        poles = PoleSeq(tuple(random_disk(rng, 7, 0.5)))
        reference = zeros_orf(a, poles, 7, ZeroRoute.U)
        _, gap = match_eigenvalues(reference, zeros_orf(a, poles, 7, via))
        assert gap < 1e-9

    def test_zeros_inside_disk(self):
        """Should place the zeros inside the unit disk."""
        rng = np.random.default_rng(61)
        a = ParamSeq(tuple(random_disk(rng, 6, 0.95)))
        poles = PoleSeq(tuple(random_disk(rng, 6, 0.9)))
        assert np.all(np.abs(zeros_orf(a, poles, 6)) < 1)

    def test_companion_roots(self):
        """Should match the roots of the coefficient polynomial of φ_n when every pole is 0."""
        rng = np.random.default_rng(64)
        n = 6
        a = ParamSeq(tuple(random_disk(rng, n)))
        poles = PoleSeq.constant(n)
        samples = np.exp(2j * np.pi * np.arange(n + 1) / (n + 1))
        phi, _ = eval_orf_sequence(a, poles, n, samples)
        coefficients = np.fft.fft(phi[n]) / (n + 1)
        expected = np.roots(coefficients[::-1])
        for via in ZeroRoute:
            _, gap = match_eigenvalues(expected, zeros_orf(a, poles, n, via))
            assert gap < 1e-8

    def test_max_order_keyword(self):
        """Should reject an order above max_order."""
        a = ParamSeq((0.1, 0.2, 0.3))
        with pytest.raises(ValidationError, match="cap 2"):
            zeros_orf(a, PoleSeq.constant(3), 3, max_order=2)
        with pytest.raises(ValidationError, match="cap 2"):
            zeros_orf(a, PoleSeq.constant(3), 3, ZeroRoute.PAIR, max_order=2)

    def test_condition_limit_keyword(self):
        """Should raise ConditioningError when the Möbius denominator exceeds the limit."""
        a = ParamSeq((0.1, 0.2, 0.3))
        poles = PoleSeq((0.3, 0.3, 0.3))
        assert zeros_orf(a, poles, 3).size == 3
        with pytest.raises(ConditioningError):
            zeros_orf(a, poles, 3, condition_limit=1.0)

    def test_needs_parameters(self):
        """Should reject orders beyond the data."""
        with pytest.raises(ValidationError):
            zeros_orf(ParamSeq((0.5,)), PoleSeq.constant(2), 2)


class TestPorfQuadrature:
    """Tests for porf_quadrature and boundary_quadrature functions."""

    def test_roots_of_minus_one(self):
        """Should give the roots of z⁴ = −1 with equal weights for a = 0, v = 1."""
        q = porf_quadrature(ParamSeq.zeros(4), PoleSeq.constant(4), 4, 1.0)
        assert np.allclose(q.nodes**4, -1)
        assert np.allclose(q.weights, 0.25)
        assert np.allclose(q.formula_weights, 0.25)
        assert q.u == pytest.approx(1.0)

    def test_lebesgue_gaps(self):
        """Should space Lebesgue nodes by 2π/n."""
        q = porf_quadrature(ParamSeq.zeros(32), PoleSeq.constant(32), 32, np.exp(0.3j))
        angles = np.sort(np.angle(q.nodes))
        gaps = np.diff(np.concatenate((angles, [angles[0] + 2 * np.pi])))
        assert np.all(gaps <= 2 * np.pi / 32 + 1e-6)

    def test_weights_match_formula(self):
        """Should agree with (Σ_{k<n} |φ_k(λ)|²)⁻¹ at every node."""
        rng = np.random.default_rng(62)
        a = ParamSeq(tuple(random_disk(rng, 6)))
        poles = PoleSeq(tuple(random_disk(rng, 6, 0.5)))
        q = porf_quadrature(a, poles, 6, np.exp(1.3j))
        assert np.allclose(q.weights, q.formula_weights, atol=1e-9)
        assert q.weights.sum() == pytest.approx(1.0)
        assert np.allclose(np.abs(q.nodes), 1)

    def test_exact_on_blaschke_products(self):
        """Should integrate B_p B_{q*} exactly for p, q <= n − 1."""
        rng = np.random.default_rng(65)
        size, n = 12, 5
        angles = 2 * np.pi * (np.arange(size) + 0.3 * rng.uniform(-1, 1, size)) / size
        masses = rng.uniform(0.5, 1.5, size)
        mu = DiscreteMeasure.from_values(np.exp(1j * angles), masses / masses.sum())
        poles = PoleSeq(tuple(random_disk(rng, n, 0.5)))
        a = orf_from_measure(mu, poles, n).a
        q = porf_quadrature(a, poles, n, np.exp(0.4j))

        def gram(points, weights):
            basis = np.array([[blaschke(poles, p, z) for z in points] for p in range(n)])
            return (basis * weights) @ basis.conj().T

        assert np.allclose(gram(q.nodes, q.weights), gram(mu.values(), mu.weights), atol=1e-9)

    def test_boundary_only_needs_n_minus_one(self):
        """Should build the rule from a_1..a_{n−1} and u."""
        q = boundary_quadrature(ParamSeq((0.2, -0.1j)), PoleSeq((0.1, 0.2, 0.3)), 3, 1j)
        assert len(q.measure) == 3

    def test_rejects_non_unimodular_v(self):
        """Should reject |v| != 1."""
        with pytest.raises(ValidationError):
            porf_quadrature(ParamSeq.zeros(2), PoleSeq.constant(2), 2, 0.5)

    def test_collision(self):
        """Should raise when the tolerance exceeds the node spacing."""
        with pytest.raises(NodeCollisionError):
            porf_quadrature(ParamSeq.zeros(4), PoleSeq.constant(4), 4, 1.0, collision_tolerance=2.0)

    def test_csv(self):
        """Should write one node per line after the header."""
        q = porf_quadrature(ParamSeq.zeros(2), PoleSeq.constant(2), 2, 1.0)
        lines = quadrature_to_csv(q, precision=6).splitlines()
        assert lines[0] == "node_re,node_im,weight"
        assert len(lines) == 3
        assert lines[1].endswith(",0.5")


class TestReconstructMeasure:
    """Tests for reconstruct_measure function."""

    def test_recovers_measure(self):
        """Should rebuild the measure the parameters were extracted from."""
        rng = np.random.default_rng(63)
        angles = 2 * np.pi * (np.arange(8) + 0.3 * rng.uniform(-1, 1, 8)) / 8
        weights = rng.uniform(0.5, 1.5, 8)
        mu = DiscreteMeasure.from_values(np.exp(1j * angles), weights / weights.sum())
        poles = PoleSeq(tuple(random_disk(rng, 8, 0.5)))
        a = orf_from_measure(mu, poles, 8).a
        rebuilt = reconstruct_measure(a, poles)
        permutation, gap = match_eigenvalues(mu.values(), rebuilt.values())
        assert gap < 1e-8
        assert np.allclose(rebuilt.weights[permutation], mu.weights, atol=1e-8)

    def test_two_point(self):
        """Should give ±1 with equal masses from a_1 = 0 and u = −1."""
        mu = reconstruct_measure(ParamSeq((0.0,), terminal=-1), PoleSeq.constant(2))
        assert np.allclose(sorted(mu.values().real), [-1, 1])
        assert np.allclose(mu.weights, 0.5)

    def test_needs_terminal(self):
        """Should refuse parameters without a terminal value."""
        with pytest.raises(ValidationError, match="terminal"):
            reconstruct_measure(ParamSeq((0.1,)), PoleSeq.constant(1))


class TestMassPointWeight:
    """Tests for mass_point_weight function."""

    def test_lebesgue(self):
        """Should give 1/N for zero parameters and poles."""
        weight = mass_point_weight(ParamSeq.zeros(10), PoleSeq.constant(10), 1.0, 10)
        assert weight == pytest.approx(0.1)

    def test_two_point_mass(self):
        """Should give the exact mass 1/2 for the two-point measure."""
        weight = mass_point_weight(ParamSeq((0.0,)), PoleSeq.constant(1), -1.0, 2)
        assert weight == pytest.approx(0.5)

    def test_rejects_point_off_circle(self):
        """Should reject λ off the unit circle."""
        with pytest.raises(ValidationError):
            mass_point_weight(ParamSeq.zeros(2), PoleSeq.constant(2), 0.5, 2)


class TestLimitPoints:
    """Tests for the limit point diagnostics."""

    def test_harmonic_sequence_tends_to_minus_one(self):
        """Should approach −1 for a_n = 1 − 1/n."""
        values = limit_point_sequence(harmonic_params(1000), PoleSeq.constant(1000))
        assert values.size == 999
        assert np.all(np.abs(values[-100:] + 1) < 1e-2)

    def test_single_cluster(self):
        """Should group the tail into one cluster near −1."""
        values = limit_point_sequence(harmonic_params(1000), PoleSeq.constant(1000))
        clusters = trailing_clusters(values)
        assert len(clusters) == 1
        assert abs(clusters[0].center + 1) < 1e-2

    def test_two_clusters_sorted_by_size(self):
        """Should order clusters by decreasing size."""
        clusters = trailing_clusters(np.array([1, -1, 1, 1]), fraction=1.0)
        assert [c.size for c in clusters] == [3, 1]
        assert clusters[0].center == pytest.approx(1)

    def test_single_point_condition(self):
        """Should tend to 0 at λ = −1."""
        values = krein_single_point(harmonic_params(200), PoleSeq.constant(200), -1)
        assert values[-1] < 0.02

    def test_needs_two_parameters(self):
        """Should reject sequences with one parameter."""
        with pytest.raises(ValidationError):
            limit_point_sequence(ParamSeq((0.1,)), PoleSeq.constant(1))

    def test_truncated_spectrum_mean(self):
        """Should pull the eigenvalues of 𝒰⁽³²;¹⁾ toward −1."""
        matrix = truncated_rep(harmonic_params(31), PoleSeq.constant(32), 32, Family.U, boundary=1)
        values = eigensolve(matrix).values
        assert np.allclose(np.abs(values), 1)
        assert np.mean(values).real < -0.7


class TestKrein:
    """Tests for krein_k and krein_two_point functions."""

    def test_k_polynomial_case(self):
        """Should give a_n z + a_{n+1} for zero poles."""
        a = ParamSeq((0.1, 0.2, 0.3))
        assert krein_k(a, PoleSeq.constant(3), 1, 0.5j) == pytest.approx(0.1 * 0.5j + 0.2)

    def test_k_index_range(self):
        """Should reject n outside 1..N−1."""
        with pytest.raises(ValidationError):
            krein_k(ParamSeq((0.1, 0.2)), PoleSeq.constant(2), 2, 0.0)

    def test_two_point_shapes(self):
        """Should produce sequences for n = 2..N−1."""
        seqs = krein_two_point(ParamSeq.zeros(6), PoleSeq.constant(6), 1, -1)
        assert seqs.indices.tolist() == [2, 3, 4, 5]
        assert np.allclose(seqs.rho_products, 1)
        assert seqs.tail_max(1.0)[0] == pytest.approx(1)

    def test_two_point_hand_values(self):
        """Should give √0.63, 0.8√0.84 and 0 for a = (0.3, 0.4, 0.5) at λ₁ = 1, λ₂ = −1."""
        seqs = krein_two_point(ParamSeq((0.3, 0.4, 0.5)), PoleSeq.constant(3), 1, -1)
        assert seqs.indices.tolist() == [2]
        assert seqs.rho_products[0] == pytest.approx(math.sqrt(0.63))
        assert seqs.mixed[0] == pytest.approx(0.8 * math.sqrt(0.84))
        assert seqs.quadratic[0] == pytest.approx(0.0, abs=1e-12)

    def test_two_point_swap_hand_values(self):
        """Should give the same moduli for (1, i) and (i, 1) with zero poles."""
        a = ParamSeq((0.3, 0.4, 0.5))
        first = krein_two_point(a, PoleSeq.constant(3), 1, 1j)
        second = krein_two_point(a, PoleSeq.constant(3), 1j, 1)
        for seqs in (first, second):
            assert seqs.mixed[0] == pytest.approx(math.sqrt(0.84 * 0.34))
            assert seqs.quadratic[0] == pytest.approx(1.2 * math.sqrt(2))

    def test_two_point_symmetric_under_swap(self):
        """Should keep ρ_nρ_{n+1} and the quadratic condition when λ₁ and λ₂ trade places."""
        rng = np.random.default_rng(66)
        a = ParamSeq(tuple(random_disk(rng, 8)))
        poles = PoleSeq(tuple(random_disk(rng, 8, 0.5)))
        first = krein_two_point(a, poles, np.exp(0.3j), np.exp(2.0j))
        second = krein_two_point(a, poles, np.exp(2.0j), np.exp(0.3j))
        assert np.allclose(first.rho_products, second.rho_products)
        assert np.allclose(first.quadratic, second.quadratic)
        assert np.all(first.quadratic > 0)

    def test_two_point_needs_three(self):
        """Should reject fewer than three parameters."""
        with pytest.raises(ValidationError):
            krein_two_point(ParamSeq.zeros(2), PoleSeq.constant(2), 1, -1)

    def test_two_point_rejects_interior_lambda(self):
        """Should reject λ off the unit circle."""
        with pytest.raises(ValidationError):
            krein_two_point(ParamSeq.zeros(4), PoleSeq.constant(4), 0.5, -1)


class TestLopezArc:
    """Tests for lopez_arc function."""

    def test_half_angle(self):
        """Should give 2 arcsin a."""
        arc = lopez_arc(0, 0.5, 1)
        assert arc.half_angle == pytest.approx(math.pi / 3)
        assert arc.start == pytest.approx(np.exp(-1j * math.pi / 3))
        assert arc.end == pytest.approx(np.exp(1j * math.pi / 3))

    def test_membership(self):
        """Should exclude the open arc around λ from the derived set."""
        arc = lopez_arc(0, 0.5, 1)
        assert arc.arc_contains(1)
        assert not arc.contains(1)
        assert arc.contains(-1)
        assert arc.excluded_point == pytest.approx(-1)
        assert not arc.contains(0.5)

    def test_empty_arc(self):
        """Should be empty for a = 0."""
        arc = lopez_arc(0.2j, 0.0, 1j)
        assert arc.is_empty
        assert arc.contains(1j)

    def test_rejects_bad_input(self):
        """Should reject a > 1 and λ off T."""
        with pytest.raises(ValidationError):
            lopez_arc(0, 1.5, 1)
        with pytest.raises(ValidationError):
            lopez_arc(0, 0.5, 0.5)


class TestComparisons:
    """Tests for hausdorff_distance, compare_truncated_spectra and match_eigenvalues."""

    def test_hausdorff(self):
        """Should take the larger one-sided distance."""
        assert hausdorff_distance(np.array([0, 1]), np.array([0])) == pytest.approx(1)

    def test_poles_beyond_order_ignored(self):
        """Should give distance 0 when poles differ only past the order."""
        a = ParamSeq((0.2, -0.3j, 0.1))
        first = PoleSeq((0.1, 0.2, 0.3, 0.4))
        second = PoleSeq((0.1, 0.2, 0.3, -0.4))
        assert compare_truncated_spectra(a, first, a, second, 4) < 1e-12

    def test_identical_input_gives_zero(self):
        """Should return 0 when both sides are the same data."""
        rng = np.random.default_rng(67)
        a = ParamSeq(tuple(random_disk(rng, 6)))
        poles = PoleSeq(tuple(random_disk(rng, 6, 0.5)))
        assert compare_truncated_spectra(a, poles, a, poles, 6) < 1e-14

    def test_small_perturbation_stays_small(self):
        """Should move by no more than a small multiple of a 1e−8 parameter change."""
        rng = np.random.default_rng(68)
        a = ParamSeq(tuple(random_disk(rng, 6)))
        poles = PoleSeq(tuple(random_disk(rng, 6, 0.5)))
        b = ParamSeq(tuple(np.array(a.a) + 1e-8 * random_disk(rng, 6, 1.0)))
        distance = compare_truncated_spectra(a, poles, b, poles, 6)
        assert distance < 1e-6

    def test_match(self):
        """Should align y to x optimally."""
        permutation, gap = match_eigenvalues(np.array([1, 2]), np.array([2, 1.1]))
        assert permutation.tolist() == [1, 0]
        assert gap == pytest.approx(0.1)

    def test_match_sizes(self):
        """Should reject lists of different sizes."""
        with pytest.raises(ValidationError):
            match_eigenvalues(np.array([1]), np.array([1, 2]))
