"""Seeded Monte Carlo trials and parameter sweeps.

Every trial draws its randomness from a counter-based Philox stream keyed
by (master_seed, axis_index, trial_index), so a sweep produces identical
results whether trials run serially or in parallel and in any order.
Aggregation is integer counting, which is order independent.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .array_model import (
    ArrayGeometry,
    Scenario,
    default_source_azimuths,
    synthesize_snapshots,
)
from .detectors import (
    ARGMAX_KINDS,
    DETECTOR_KINDS,
    Estimate,
    ThresholdParams,
    aic,
    mdl,
    moving_increment,
    moving_std,
    increment_threshold,
)
from .spectral import (
    correlation_coefficient_matrix,
    eigenvalues_sorted,
    sample_autocovariance,
    sample_centered_covariance,
)

SWEEP_AXES = ("snr_db", "snapshot_count", "source_count", "element_count")

_MASK64 = (1 << 64) - 1
_MASK32 = (1 << 32) - 1


def trial_rng(master_seed: int, axis_index: int, trial_index: int) -> np.random.Generator:
    """Counter-based random stream for one trial.

    The Philox key packs (master_seed, axis_index, trial_index) into 128
    bits, so any trial's stream can be reconstructed independently of
    execution order.
    """
    if axis_index < 0 or trial_index < 0:
        raise ValueError("axis_index and trial_index must be nonnegative")
    if axis_index > _MASK32 or trial_index > _MASK32:
        raise ValueError("axis_index and trial_index must fit in 32 bits")
    key = ((master_seed & _MASK64) << 64) | (axis_index << 32) | trial_index
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True, eq=False)
class SweepSpec:
    """A parameter sweep: one axis varied over a base scenario.

    ``detectors`` selects which detectors run each trial; include
    ``threshold_params`` when ``increment_threshold`` is selected.  When
    ``redraw_azimuths_per_trial`` is set, source azimuths are drawn
    uniformly at random from each trial's own stream instead of the fixed
    per-axis-value defaults.
    """

    base_scenario: Scenario
    axis: str
    axis_values: tuple
    detectors: tuple[str, ...] = ("aic", "mdl", "moving_increment", "moving_std")
    trials: int = 10000
    master_seed: int = 0
    threshold_params: ThresholdParams = field(default_factory=ThresholdParams)
    redraw_azimuths_per_trial: bool = False

    def __post_init__(self) -> None:
        if self.axis not in SWEEP_AXES:
            raise ValueError(f"unknown sweep axis {self.axis!r}")
        if len(self.axis_values) == 0:
            raise ValueError("axis_values must be nonempty")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        unknown = set(self.detectors) - set(DETECTOR_KINDS)
        if unknown:
            raise ValueError(f"unknown detectors: {sorted(unknown)}")
        if len(self.detectors) == 0:
            raise ValueError("select at least one detector")
        needs_sources = any(kind in ARGMAX_KINDS for kind in self.detectors)
        for value in self.axis_values:
            scenario = scenario_for_axis_value(self.base_scenario, self.axis, value)
            if needs_sources and scenario.source_count < 1:
                raise ValueError(
                    "moving-window detectors cannot return zero sources; "
                    f"axis value {value!r} yields source_count 0"
                )


@dataclass(frozen=True)
class ReportRow:
    """Aggregated outcome for one detector at one axis value."""

    detector_kind: str
    axis: str
    axis_value: float | int
    trials: int
    errors: int
    error_rate_percent: float


@dataclass(frozen=True, eq=False)
class ErrorRateReport:
    """All rows of a completed sweep, ordered by (axis value, detector)."""

    rows: tuple[ReportRow, ...]


def error_rate(successes: int, runs: int) -> float:
    """Percentage of failed runs, 100 * (1 - successes/runs)."""
    if runs < 1:
        raise ValueError("runs must be positive")
    if successes < 0 or successes > runs:
        raise ValueError("successes must lie in [0, runs]")
    # Same quantity with one rounding step, so 22/200 prints as 11.0.
    return 100.0 * (runs - successes) / runs


def scenario_for_axis_value(base: Scenario, axis: str, value) -> Scenario:
    """Substitute one axis value into the base scenario.

    The source_count axis regenerates default (evenly spaced) source
    azimuths for the new count; the element_count axis rebuilds the
    geometry with uniformly spaced elements at the same radius.
    """
    try:
        if axis == "snr_db":
            return replace(base, snr_db=float(value))
        if axis == "snapshot_count":
            return replace(base, snapshot_count=int(value))
        if axis == "source_count":
            count = int(value)
            return replace(
                base,
                source_count=count,
                source_azimuths=default_source_azimuths(count),
            )
        if axis == "element_count":
            geometry = ArrayGeometry(element_count=int(value), radius=base.geometry.radius)
            return replace(base, geometry=geometry)
    except ValueError as exc:
        raise ValueError(f"invalid value {value!r} for axis {axis!r}: {exc}") from exc
    raise ValueError(f"unknown sweep axis {axis!r}")


def run_trial(
    scenario: Scenario,
    detectors: tuple[str, ...],
    rng: np.random.Generator,
    threshold_params: ThresholdParams | None = None,
) -> dict[str, tuple[Estimate | None, bool]]:
    """Run every selected detector on one synthesized snapshot block.

    Returns a mapping of detector kind to (estimate, correct).  A detector
    failure (for example a degenerate element variance) is recorded as an
    incorrect trial for the detectors that depend on the failing statistic.
    """
    argmax_selected = [kind for kind in detectors if kind in ARGMAX_KINDS]
    if argmax_selected and scenario.source_count < 1:
        raise ValueError(
            f"{argmax_selected[0]} cannot return zero sources; use source_count >= 1"
        )
    snapshots = synthesize_snapshots(scenario, rng)
    n = scenario.snapshot_count
    results: dict[str, tuple[Estimate | None, bool]] = {}

    def record(kind: str, estimate: Estimate | None) -> None:
        correct = estimate is not None and estimate.source_count == scenario.source_count
        results[kind] = (estimate, correct)

    if "aic" in detectors or "mdl" in detectors:
        try:
            cov_eigs = eigenvalues_sorted(sample_autocovariance(snapshots), "descending")
        except ValueError:
            cov_eigs = None
        for kind, detector in (("aic", aic), ("mdl", mdl)):
            if kind in detectors:
                record(kind, None if cov_eigs is None else detector(cov_eigs, n))

    corr_kinds = [k for k in detectors if k in ARGMAX_KINDS or k == "increment_threshold"]
    if corr_kinds:
        try:
            centered = sample_centered_covariance(snapshots)
            corr = correlation_coefficient_matrix(centered)
            corr_eigs = eigenvalues_sorted(corr, "ascending")
        except ValueError:
            corr_eigs = None
        for kind in corr_kinds:
            if corr_eigs is None:
                record(kind, None)
            elif kind == "moving_increment":
                record(kind, moving_increment(corr_eigs))
            elif kind == "moving_std":
                record(kind, moving_std(corr_eigs))
            else:
                params = threshold_params if threshold_params is not None else ThresholdParams()
                record(kind, increment_threshold(corr_eigs, params))

    return results


def _trial_scenario(spec: SweepSpec, scenario: Scenario, rng: np.random.Generator) -> Scenario:
    if not spec.redraw_azimuths_per_trial or scenario.source_count < 1:
        return scenario
    azimuths = rng.uniform(0.0, 2.0 * math.pi, size=scenario.source_count)
    return replace(scenario, source_azimuths=azimuths)


def _count_errors_for_value(
    spec: SweepSpec, axis_index: int, trial_slice: range
) -> dict[str, int]:
    scenario = scenario_for_axis_value(spec.base_scenario, spec.axis, spec.axis_values[axis_index])
    counts = dict.fromkeys(spec.detectors, 0)
    for trial_index in trial_slice:
        rng = trial_rng(spec.master_seed, axis_index, trial_index)
        trial = _trial_scenario(spec, scenario, rng)
        outcomes = run_trial(trial, spec.detectors, rng, spec.threshold_params)
        for kind in spec.detectors:
            _, correct = outcomes[kind]
            if not correct:
                counts[kind] += 1
    return counts


def run_sweep(spec: SweepSpec, workers: int = 1) -> ErrorRateReport:
    """Run the full sweep and aggregate per-detector error counts.

    ``workers`` > 1 splits each axis value's trials across a thread pool;
    the report is identical to the serial result because every trial owns
    an independently keyed stream and only integer counts are merged.
    """
    if workers < 1:
        raise ValueError("workers must be positive")
    totals: dict[tuple[int, str], int] = {
        (i, kind): 0 for i in range(len(spec.axis_values)) for kind in spec.detectors
    }
    jobs = []
    chunk = max(1, math.ceil(spec.trials / max(workers, 1)))
    for axis_index in range(len(spec.axis_values)):
        for start in range(0, spec.trials, chunk):
            stop = min(start + chunk, spec.trials)
            jobs.append((axis_index, range(start, stop)))

    if workers == 1:
        partials = [_count_errors_for_value(spec, i, r) for i, r in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_count_errors_for_value, spec, i, r) for i, r in jobs]
            partials = [f.result() for f in futures]

    for (axis_index, _), counts in zip(jobs, partials):
        for kind, errors in counts.items():
            totals[(axis_index, kind)] += errors

    rows = []
    for axis_index, value in enumerate(spec.axis_values):
        for kind in spec.detectors:
            errors = totals[(axis_index, kind)]
            rows.append(
                ReportRow(
                    detector_kind=kind,
                    axis=spec.axis,
                    axis_value=value,
                    trials=spec.trials,
                    errors=errors,
                    error_rate_percent=error_rate(spec.trials - errors, spec.trials),
                )
            )
    return ErrorRateReport(rows=tuple(rows))
