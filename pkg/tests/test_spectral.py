import math

import numpy as np
import pytest

from sourcecount.array_model import ArrayGeometry, Scenario, synthesize_snapshots
from sourcecount.spectral import (
    correlation_coefficient_matrix,
    eigenvalues_sorted,
    sample_autocovariance,
    sample_centered_covariance,
)


def random_block(rng, elements=4, snapshots=32):
    return rng.standard_normal((elements, snapshots)) + 1j * rng.standard_normal(
        (elements, snapshots)
    )


def test_autocovariance_zero_block():
    np.testing.assert_array_equal(
        sample_autocovariance(np.zeros((3, 5), dtype=complex)), np.zeros((3, 3))
    )


def test_autocovariance_constant_row():
    np.testing.assert_allclose(
        sample_autocovariance(np.ones((1, 7), dtype=complex)), [[1.0]], atol=1e-15
    )


def test_autocovariance_hand_case():
    block = np.array([[1.0, 1j], [1.0, -1j]])
    np.testing.assert_allclose(sample_autocovariance(block), np.eye(2), atol=1e-15)


def test_centered_covariance_removes_constants():
    block = np.tile(np.array([[2.0 + 1j], [3.0 - 2j]]), (1, 6))
    np.testing.assert_allclose(
        sample_centered_covariance(block), np.zeros((2, 2)), atol=1e-15
    )


def test_centered_covariance_equals_plain_on_zero_mean():
    block = np.array([[1.0, -1.0], [2.0, -2.0]])
    np.testing.assert_allclose(
        sample_centered_covariance(block), sample_autocovariance(block), atol=1e-15
    )


def test_centered_covariance_hand_case():
    np.testing.assert_allclose(
        sample_centered_covariance(np.array([[2.0, 4.0]])), [[1.0]], atol=1e-15
    )


def test_centered_covariance_needs_two_snapshots():
    with pytest.raises(ValueError, match="insufficient snapshots"):
        sample_centered_covariance(np.ones((2, 1)))


def test_correlation_identity_passthrough():
    np.testing.assert_array_equal(
        correlation_coefficient_matrix(np.eye(3)), np.eye(3)
    )


def test_correlation_hand_case():
    covariance = np.array([[4.0, 2.0], [2.0, 1.0]])
    np.testing.assert_allclose(
        correlation_coefficient_matrix(covariance), np.ones((2, 2)), atol=1e-15
    )


def test_correlation_scale_cancellation():
    rng = np.random.default_rng(3)
    block = random_block(rng)
    covariance = sample_centered_covariance(block)
    base = correlation_coefficient_matrix(covariance)
    for scale in (1e-6, 1e6):
        scaled = correlation_coefficient_matrix(scale * covariance)
        np.testing.assert_allclose(scaled, base, atol=1e-12)


def test_correlation_rejects_degenerate_variance():
    with pytest.raises(ValueError, match="degenerate element variance"):
        correlation_coefficient_matrix(np.diag([1.0, 0.0]))
    with pytest.raises(ValueError, match="degenerate element variance"):
        correlation_coefficient_matrix(np.diag([1.0, 1e-13]))


def test_correlation_unit_diagonal_and_bounded():
    rng = np.random.default_rng(29)
    for _ in range(200):
        block = random_block(rng, elements=int(rng.integers(2, 7)))
        corr = correlation_coefficient_matrix(sample_centered_covariance(block))
        np.testing.assert_array_equal(np.diag(corr), np.ones(corr.shape[0]))
        assert np.all(np.abs(corr) <= 1 + 1e-10)
        np.testing.assert_array_equal(corr, corr.conj().T)


def test_eigenvalues_identity():
    np.testing.assert_allclose(eigenvalues_sorted(np.eye(3)), np.ones(3))


def test_eigenvalues_diagonal_sorting():
    matrix = np.diag([3.0, 1.0, 2.0])
    np.testing.assert_allclose(eigenvalues_sorted(matrix, "ascending"), [1, 2, 3])
    np.testing.assert_allclose(eigenvalues_sorted(matrix, "descending"), [3, 2, 1])


def test_eigenvalues_hand_case():
    # Characteristic polynomial x**2 - 4x + 3 has roots 1 and 3.
    matrix = np.array([[2.0, 1.0], [1.0, 2.0]])
    np.testing.assert_allclose(eigenvalues_sorted(matrix), [1.0, 3.0], atol=1e-12)


def test_eigenvalues_match_general_solver():
    rng = np.random.default_rng(31)
    for _ in range(100):
        block = random_block(rng, elements=int(rng.integers(2, 7)))
        matrix = sample_autocovariance(block)
        ours = eigenvalues_sorted(matrix)
        reference = np.sort(np.linalg.eigvals(matrix).real)
        np.testing.assert_allclose(ours, reference, atol=1e-8)


def test_eigenvalues_reject_bad_inputs():
    with pytest.raises(ValueError, match="not Hermitian"):
        eigenvalues_sorted(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError, match="square"):
        eigenvalues_sorted(np.ones((2, 3)))
    with pytest.raises(ValueError, match="order"):
        eigenvalues_sorted(np.eye(2), "sideways")


def test_covariances_positive_semidefinite():
    rng = np.random.default_rng(37)
    for _ in range(300):
        block = random_block(
            rng, elements=int(rng.integers(2, 7)), snapshots=int(rng.integers(2, 40))
        )
        for matrix in (
            sample_autocovariance(block),
            sample_centered_covariance(block),
        ):
            assert eigenvalues_sorted(matrix)[0] >= -1e-8


def test_correlation_trace_is_element_count():
    rng = np.random.default_rng(41)
    for _ in range(200):
        m = int(rng.integers(2, 8))
        block = random_block(rng, elements=m)
        corr = correlation_coefficient_matrix(sample_centered_covariance(block))
        assert abs(eigenvalues_sorted(corr).sum() - m) <= 1e-8


def test_pipeline_scale_invariance():
    rng = np.random.default_rng(43)
    for _ in range(100):
        block = random_block(rng)
        base = eigenvalues_sorted(
            correlation_coefficient_matrix(sample_centered_covariance(block))
        )
        for scale in (1e-6, 1.0, 1e6):
            scaled = eigenvalues_sorted(
                correlation_coefficient_matrix(
                    sample_centered_covariance(scale * block)
                )
            )
            np.testing.assert_allclose(scaled, base, atol=1e-10)


def test_noiseless_covariance_has_matching_null_space():
    geometry = ArrayGeometry(element_count=8)
    for sources in (1, 2, 3, 5):
        scenario = Scenario(
            geometry=geometry, source_count=sources, snapshot_count=64, snr_db=math.inf
        )
        block = synthesize_snapshots(scenario, np.random.default_rng(sources + 100))
        eigs = eigenvalues_sorted(sample_autocovariance(block), "descending")
        small = np.sum(eigs <= 1e-8 * eigs[0])
        assert small == 8 - sources
