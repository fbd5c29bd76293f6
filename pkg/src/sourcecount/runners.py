"""Row-oriented entry points shared by the CLI and the HTTP service.

Each runner returns plain dicts and lists so the same payload can be
serialized to CSV by the CLI, to JSON by the service, and back again by
the CLI's remote mode without changing a single value.
"""

from __future__ import annotations

import numpy as np

from .array_model import Scenario, synthesize_snapshots
from .detectors import ThresholdParams
from .montecarlo import (
    SweepSpec,
    run_sweep,
    run_trial,
    scenario_for_axis_value,
    trial_rng,
)
from .spectral import (
    correlation_coefficient_matrix,
    eigenvalues_sorted,
    sample_autocovariance,
    sample_centered_covariance,
)

STATS_COLUMNS = (
    "sweep_value",
    "index",
    "lambda_corr",
    "delta_corr",
    "alpha_corr",
    "lambda_cov",
    "delta_cov",
    "alpha_cov",
)

SWEEP_COLUMNS = ("detector", "axis", "axis_value", "trials", "errors", "error_rate_percent")


def estimate_rows(
    scenario: Scenario,
    detectors: tuple[str, ...],
    master_seed: int,
    threshold_params: ThresholdParams | None = None,
) -> list[dict]:
    """Run every selected detector once on a single seeded snapshot block."""
    rng = trial_rng(master_seed, 0, 0)
    outcomes = run_trial(scenario, detectors, rng, threshold_params)
    rows = []
    for kind in detectors:
        estimate, _ = outcomes[kind]
        if estimate is None:
            raise ValueError(f"detector {kind} failed on the synthesized block")
        rows.append(
            {
                "detector": kind,
                "source_count": estimate.source_count,
                "selected_index": estimate.selected_index,
                "statistic_trace": [float(v) for v in estimate.statistic_trace],
            }
        )
    return rows


def _moving_statistics(eigs_ascending: np.ndarray) -> tuple[list, list]:
    """Increments and STD differences padded with None where undefined."""
    deltas = np.diff(eigs_ascending)
    alphas = np.diff(np.abs(deltas)) / np.sqrt(2.0)
    delta_column = [None] + [float(d) for d in deltas]
    alpha_column = [None, None] + [float(a) for a in alphas]
    return delta_column, alpha_column


def stats_rows(scenario: Scenario, sweep_axis: str, values: tuple, master_seed: int) -> list[dict]:
    """Eigenvalue spectra and moving statistics, one block per sweep value.

    For every value the correlation-coefficient and auto-covariance spectra
    of a fresh seeded block are listed ascending, together with their
    moving increments and moving STD differences.
    """
    if sweep_axis not in ("snr_db", "snapshot_count"):
        raise ValueError("stats sweeps support snr_db or snapshot_count only")
    rows = []
    for value_index, value in enumerate(values):
        point = scenario_for_axis_value(scenario, sweep_axis, value)
        rng = trial_rng(master_seed, value_index, 0)
        snapshots = synthesize_snapshots(point, rng)
        corr = correlation_coefficient_matrix(sample_centered_covariance(snapshots))
        corr_eigs = eigenvalues_sorted(corr, "ascending")
        cov_eigs = eigenvalues_sorted(sample_autocovariance(snapshots), "ascending")
        corr_delta, corr_alpha = _moving_statistics(corr_eigs)
        cov_delta, cov_alpha = _moving_statistics(cov_eigs)
        for i in range(point.geometry.element_count):
            rows.append(
                {
                    "sweep_value": value,
                    "index": i + 1,
                    "lambda_corr": float(corr_eigs[i]),
                    "delta_corr": corr_delta[i],
                    "alpha_corr": corr_alpha[i],
                    "lambda_cov": float(cov_eigs[i]),
                    "delta_cov": cov_delta[i],
                    "alpha_cov": cov_alpha[i],
                }
            )
    return rows


def sweep_rows(spec: SweepSpec, workers: int = 1) -> list[dict]:
    """Run a sweep and flatten the report into CSV-ready dicts."""
    report = run_sweep(spec, workers=workers)
    return [
        {
            "detector": row.detector_kind,
            "axis": row.axis,
            "axis_value": row.axis_value,
            "trials": row.trials,
            "errors": row.errors,
            "error_rate_percent": row.error_rate_percent,
        }
        for row in report.rows
    ]
