"""Sample covariance estimation and Hermitian eigendecomposition.

Three estimators are provided for an M x N snapshot block Y:

* auto-covariance        R = (1/N) Y Y^H
* centered covariance    V = (1/N) (Y - mu)(Y - mu)^H, mu the per-row mean
* correlation coefficient C = D^(-1/2) V D^(-1/2), D = diag(V)

All three are Hermitian M x M matrices; eigenvalues are extracted with a
symmetrizing guard so roundoff never produces complex spectra.
"""

from __future__ import annotations

import numpy as np

# Below this the per-element variance is treated as a dead channel.
DEGENERATE_VARIANCE = 1e-12

HERMITIAN_TOLERANCE = 1e-10


def sample_autocovariance(snapshots: np.ndarray) -> np.ndarray:
    """(1/N) Y Y^H over the snapshot axis."""
    snapshots = np.asarray(snapshots)
    n = snapshots.shape[1]
    if n < 1:
        raise ValueError("need at least one snapshot")
    cov = snapshots @ snapshots.conj().T / n
    return (cov + cov.conj().T) / 2.0


def sample_centered_covariance(snapshots: np.ndarray) -> np.ndarray:
    """(1/N) (Y - mu)(Y - mu)^H with mu the per-element sample mean."""
    snapshots = np.asarray(snapshots)
    n = snapshots.shape[1]
    if n < 2:
        raise ValueError("insufficient snapshots for centering")
    centered = snapshots - snapshots.mean(axis=1, keepdims=True)
    cov = centered @ centered.conj().T / n
    return (cov + cov.conj().T) / 2.0


def correlation_coefficient_matrix(covariance: np.ndarray) -> np.ndarray:
    """Normalize a covariance to unit diagonal.

    Raises ValueError on any diagonal entry at or below the degeneracy
    threshold (a dead antenna channel or constant input).
    """
    covariance = np.asarray(covariance)
    variances = np.real(np.diag(covariance)).copy()
    if np.any(variances <= DEGENERATE_VARIANCE):
        raise ValueError("degenerate element variance")
    inv_std = 1.0 / np.sqrt(variances)
    # Single elementwise product by an exactly symmetric factor keeps the
    # result exactly Hermitian.
    corr = covariance * np.outer(inv_std, inv_std)
    np.fill_diagonal(corr, 1.0)
    return corr


def eigenvalues_sorted(matrix: np.ndarray, order: str = "ascending") -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted.

    Parameters
    ----------
    matrix : ndarray
        Square Hermitian matrix.
    order : {"ascending", "descending"}
        Sort direction of the returned spectrum.
    """
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError("matrix must be square")
    if order not in ("ascending", "descending"):
        raise ValueError(f"unknown sort order {order!r}")
    mismatch = np.max(np.abs(matrix - matrix.conj().T))
    if mismatch > HERMITIAN_TOLERANCE:
        raise ValueError("matrix not Hermitian")
    symmetrized = (matrix + matrix.conj().T) / 2.0
    values = np.linalg.eigvalsh(symmetrized)
    if order == "descending":
        values = values[::-1]
    return values
