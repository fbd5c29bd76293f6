"""Uniform circular array signal synthesis.

Builds steering vectors for a UCA, draws QPSK source symbols, and
synthesizes received snapshot blocks Y = A S + W with complex white
Gaussian noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Unit-power QPSK constellation.
QPSK_CONSTELLATION = np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]) / math.sqrt(2)

TWO_PI = 2.0 * math.pi


def uniform_element_azimuths(element_count: int) -> np.ndarray:
    """Evenly spaced element azimuths in radians, starting at 0."""
    return TWO_PI * np.arange(element_count) / element_count


def default_source_azimuths(source_count: int) -> np.ndarray:
    """Default source azimuths: evenly spaced over the full circle, offset 10 degrees."""
    return np.deg2rad(10.0) + TWO_PI * np.arange(source_count) / source_count


@dataclass(frozen=True, eq=False)
class ArrayGeometry:
    """A uniform circular array of ``element_count`` antennas.

    Parameters
    ----------
    element_count : int
        Number of antenna elements, at least 1.
    radius : float
        Array radius in wavelengths, nonnegative.
    element_azimuths : ndarray
        Angular positions of the elements in radians, each in [0, 2*pi).
        Defaults to uniform spacing around the circle.
    """

    element_count: int
    radius: float = 0.5
    element_azimuths: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.element_count < 1:
            raise ValueError("element_count must be at least 1")
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")
        if self.element_azimuths is None:
            object.__setattr__(
                self, "element_azimuths", uniform_element_azimuths(self.element_count)
            )
        azimuths = np.asarray(self.element_azimuths, dtype=float)
        if azimuths.shape != (self.element_count,):
            raise ValueError("element_azimuths must have exactly element_count entries")
        if np.any(azimuths < 0) or np.any(azimuths >= TWO_PI):
            raise ValueError("element_azimuths must lie in [0, 2*pi)")
        object.__setattr__(self, "element_azimuths", azimuths)


@dataclass(frozen=True, eq=False)
class Scenario:
    """One simulated experiment: sources, snapshots, and SNR.

    ``snr_db`` is per source and per element: every source has unit average
    power and the noise variance per complex entry is 10**(-snr_db / 10).
    ``math.inf`` gives a noiseless channel.
    """

    geometry: ArrayGeometry
    source_count: int
    source_azimuths: np.ndarray = field(default=None)  # type: ignore[assignment]
    snapshot_count: int = 1024
    snr_db: float = 0.0

    def __post_init__(self) -> None:
        if self.source_count < 0:
            raise ValueError("source_count must be nonnegative")
        if self.source_count >= self.geometry.element_count:
            raise ValueError("source_count must be smaller than element_count")
        if self.snapshot_count < 1:
            raise ValueError("snapshot_count must be positive")
        if self.source_azimuths is None:
            object.__setattr__(
                self, "source_azimuths", default_source_azimuths(self.source_count)
            )
        azimuths = np.asarray(self.source_azimuths, dtype=float)
        if azimuths.shape != (self.source_count,):
            raise ValueError("source_azimuths must have exactly source_count entries")
        if len(np.unique(azimuths)) != self.source_count:
            raise ValueError("source_azimuths must be pairwise distinct")
        object.__setattr__(self, "source_azimuths", azimuths)

    @property
    def noise_variance(self) -> float:
        """Per-entry complex noise variance implied by snr_db."""
        if math.isinf(self.snr_db) and self.snr_db > 0:
            return 0.0
        return 10.0 ** (-self.snr_db / 10.0)


def uca_steering_vector(geometry: ArrayGeometry, theta: float) -> np.ndarray:
    """Steering vector of the array toward azimuth ``theta`` (radians).

    Element m responds with exp(i * 2*pi * radius * cos(theta - gamma_m)),
    so every entry has unit modulus.
    """
    phase = TWO_PI * geometry.radius * np.cos(theta - geometry.element_azimuths)
    return np.exp(1j * phase)


def steering_matrix(geometry: ArrayGeometry, thetas: np.ndarray) -> np.ndarray:
    """Stack steering vectors for each azimuth in ``thetas`` as columns."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    if thetas.size == 0:
        raise ValueError("no sources")
    return np.stack([uca_steering_vector(geometry, t) for t in thetas], axis=1)


def generate_qpsk_symbols(
    source_count: int, snapshot_count: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw a source_count x snapshot_count block of independent QPSK symbols."""
    if source_count < 1 or snapshot_count < 1:
        raise ValueError("source_count and snapshot_count must be positive")
    picks = rng.integers(0, 4, size=(source_count, snapshot_count))
    return QPSK_CONSTELLATION[picks]


def synthesize_snapshots(scenario: Scenario, rng: np.random.Generator) -> np.ndarray:
    """Simulate one received block Y = A S + W for the scenario.

    Returns an element_count x snapshot_count complex matrix.  With
    ``source_count == 0`` the block is noise only.
    """
    geometry = scenario.geometry
    shape = (geometry.element_count, scenario.snapshot_count)
    if scenario.source_count > 0:
        a = steering_matrix(geometry, scenario.source_azimuths)
        s = generate_qpsk_symbols(scenario.source_count, scenario.snapshot_count, rng)
        received = a @ s
    else:
        received = np.zeros(shape, dtype=complex)
    sigma2 = scenario.noise_variance
    if sigma2 > 0:
        scale = math.sqrt(sigma2 / 2.0)
        noise = scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
        received = received + noise
    return received
