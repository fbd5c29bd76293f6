"""Source-count detectors over an eigenvalue spectrum.

Five detectors are implemented:

* ``aic`` and ``mdl``: information-theoretic criteria minimized over the
  candidate order k, consuming a descending spectrum.
* ``moving_increment``: argmax of consecutive differences of an ascending
  spectrum; the largest jump marks the noise-to-signal boundary.
* ``moving_std``: argmax of consecutive differences of two-point biased
  standard deviations, also over an ascending spectrum.
* ``increment_threshold``: first eigenvalue increment exceeding a
  closed-form threshold built from a tuning factor and a signal power
  estimate supplied by the caller.

The argmax detectors map the selected index j to a source count
K = M - j + 1, so they cannot return 0.  Eigenvalue indices follow the
1-based convention used throughout (lambda_1 .. lambda_M).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Floor applied to eigenvalues before logarithms or divisions; protects
# against rank-deficient sample covariances (N < M).
EIGENVALUE_FLOOR = 1e-12

SQRT2 = math.sqrt(2.0)

DETECTOR_KINDS = ("aic", "mdl", "moving_increment", "moving_std", "increment_threshold")

# Detector kinds whose rule K = M - j + 1 requires at least one source.
ARGMAX_KINDS = ("moving_increment", "moving_std")


@dataclass(frozen=True)
class ThresholdParams:
    """Tuning for the increment-threshold detector.

    ``rho`` scales the threshold; ``signal_power`` is the caller's estimate
    of the per-source power.  Both must be positive.
    """

    rho: float = 1.0
    signal_power: float = 1.0

    def __post_init__(self) -> None:
        if self.rho <= 0:
            raise ValueError("rho must be positive")
        if self.signal_power <= 0:
            raise ValueError("signal_power must be positive")


@dataclass(frozen=True, eq=False)
class Estimate:
    """A detector decision.

    ``source_count`` is the estimated number of sources, ``selected_index``
    the winning 1-based index (j for argmax rules, k for criteria, 0 when a
    threshold rule finds no crossing), and ``statistic_trace`` the full
    decision statistic over its index range.
    """

    detector_kind: str
    source_count: int
    selected_index: int
    statistic_trace: np.ndarray


def _require_sorted(eigs: np.ndarray, order: str, minimum: int, caller: str) -> np.ndarray:
    values = np.asarray(eigs, dtype=float)
    if values.ndim != 1:
        raise ValueError(f"{caller} expects a one-dimensional spectrum")
    if values.size < minimum:
        raise ValueError(f"need at least {minimum} eigenvalues")
    diffs = np.diff(values)
    if order == "ascending" and np.any(diffs < 0):
        raise ValueError(f"{caller} expects an ascending spectrum")
    if order == "descending" and np.any(diffs > 0):
        raise ValueError(f"{caller} expects a descending spectrum")
    return values


def _information_criterion(
    eigs_descending: np.ndarray, snapshot_count: int, kind: str
) -> Estimate:
    eigs = _require_sorted(eigs_descending, "descending", 1, kind)
    if snapshot_count < 1:
        raise ValueError("snapshot_count must be positive")
    m = eigs.size
    clamped = np.maximum(eigs, EIGENVALUE_FLOOR)
    logs = np.log(clamped)
    criterion = np.empty(m)
    for k in range(m):
        tail = clamped[k:]
        # log(GM/AM) of the M-k smallest eigenvalues, scaled; zero by
        # construction at k = M-1 where one eigenvalue remains.
        log_ratio = logs[k:].mean() - math.log(tail.mean())
        likelihood = -(m - k) * snapshot_count * log_ratio
        if kind == "aic":
            criterion[k] = 2.0 * likelihood + 2.0 * k * (2 * m - k)
        else:
            criterion[k] = likelihood + 0.5 * k * (2 * m - k) * math.log(snapshot_count)
    best = int(np.argmin(criterion))
    return Estimate(kind, best, best, criterion)


def aic(eigs_descending: np.ndarray, snapshot_count: int) -> Estimate:
    """Akaike information criterion estimate of the source count."""
    return _information_criterion(eigs_descending, snapshot_count, "aic")


def mdl(eigs_descending: np.ndarray, snapshot_count: int) -> Estimate:
    """Minimum description length estimate of the source count."""
    return _information_criterion(eigs_descending, snapshot_count, "mdl")


def moving_increment(eigs_ascending: np.ndarray) -> Estimate:
    """Largest single increment of an ascending spectrum.

    delta_i = lambda_i - lambda_(i-1) for i = 2..M; the argmax index j
    (ties: smallest) gives K = M - j + 1.
    """
    eigs = _require_sorted(eigs_ascending, "ascending", 2, "moving_increment")
    m = eigs.size
    deltas = np.diff(eigs)
    j = int(np.argmax(deltas)) + 2
    return Estimate("moving_increment", m - j + 1, j, deltas)


def moving_std(eigs_ascending: np.ndarray) -> Estimate:
    """Largest increase of the two-point moving standard deviation.

    STD(i) = |lambda_i - lambda_(i-1)| / sqrt(2) for i = 2..M, and
    alpha_i = STD(i) - STD(i-1) for i = 3..M; the argmax index j gives
    K = M - j + 1.
    """
    eigs = _require_sorted(eigs_ascending, "ascending", 3, "moving_std")
    m = eigs.size
    stds = np.abs(np.diff(eigs)) / SQRT2
    alphas = np.diff(stds)
    j = int(np.argmax(alphas)) + 3
    return Estimate("moving_std", m - j + 1, j, alphas)


def increment_threshold(eigs_ascending: np.ndarray, params: ThresholdParams) -> Estimate:
    """First eigenvalue increment above a closed-form threshold.

    The threshold is rho * P_s / (1 + sqrt(P_s / lambda_min))**2 with
    lambda_min the smallest eigenvalue (floored when nonpositive).  The
    smallest index i with delta_i above the threshold gives K = M - i + 1;
    no crossing gives K = 0.
    """
    eigs = _require_sorted(eigs_ascending, "ascending", 2, "increment_threshold")
    m = eigs.size
    smallest = max(eigs[0], EIGENVALUE_FLOOR)
    power = params.signal_power
    gamma = params.rho * power / (1.0 + math.sqrt(power / smallest)) ** 2
    deltas = np.diff(eigs)
    crossings = np.nonzero(deltas > gamma)[0]
    if crossings.size == 0:
        return Estimate("increment_threshold", 0, 0, deltas)
    j = int(crossings[0]) + 2
    return Estimate("increment_threshold", m - j + 1, j, deltas)
