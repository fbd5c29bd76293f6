"""Acceptance suite: headline behaviors at reduced trial counts.

Each test covers one numbered criterion and appends a single PASS/FAIL
line to the report echoed at the end of the pytest run.  Sweeps use 2000
trials per point so the whole suite stays in laptop territory.
"""

import math

import numpy as np
import pytest

from sourcecount.array_model import ArrayGeometry, Scenario, synthesize_snapshots
from sourcecount.cli import main
from sourcecount.detectors import aic, mdl, moving_increment, moving_std
from sourcecount.montecarlo import SweepSpec, run_sweep, run_trial, trial_rng
from sourcecount.spectral import (
    correlation_coefficient_matrix,
    eigenvalues_sorted,
    sample_centered_covariance,
)

from oracles import criterion_argmin, criterion_values, random_descending_spectrum

SEED = 20260816
TRIALS = 2000


def base_scenario(**overrides):
    defaults = dict(
        geometry=ArrayGeometry(element_count=8),
        source_count=2,
        snapshot_count=1024,
        snr_db=0.0,
    )
    defaults.update(overrides)
    return Scenario(**defaults)


def rates_by_key(spec):
    return {
        (row.axis_value, row.detector_kind): row.error_rate_percent
        for row in run_sweep(spec).rows
    }


def finish(acceptance_log, number, label, failures):
    if failures:
        line = f"criterion {number} ({label}): FAIL [{'; '.join(failures)}]"
    else:
        line = f"criterion {number} ({label}): PASS"
    acceptance_log.append(line)
    assert not failures, line


@pytest.fixture(scope="session")
def snr_sweep_rates():
    spec = SweepSpec(
        base_scenario=base_scenario(),
        axis="snr_db",
        axis_values=tuple(float(s) for s in range(-20, 16)),
        trials=TRIALS,
        master_seed=SEED,
    )
    return rates_by_key(spec)


def test_criterion_1_snr_sweep(acceptance_log, snr_sweep_rates):
    failures = []
    for snr in range(-8, 16):
        for kind in ("mdl", "moving_increment", "moving_std"):
            rate = snr_sweep_rates[(float(snr), kind)]
            if rate > 2.0:
                failures.append(f"a: {kind} {rate:.2f}% > 2% at {snr} dB")
    for snr in range(0, 16):
        rate = snr_sweep_rates[(float(snr), "aic")]
        if not 5.0 <= rate <= 15.0:
            failures.append(f"b: aic {rate:.2f}% outside [5, 15] at {snr} dB")
    for snr in range(-20, -13):
        for kind in ("aic", "mdl", "moving_increment", "moving_std"):
            rate = snr_sweep_rates[(float(snr), kind)]
            if rate < 50.0:
                failures.append(f"c: {kind} {rate:.2f}% < 50% at {snr} dB")
    finish(acceptance_log, 1, "snr sweep", failures)


def test_criterion_2_sample_sweep(acceptance_log):
    spec = SweepSpec(
        base_scenario=base_scenario(snr_db=-5.0),
        axis="snapshot_count",
        axis_values=(128, 256, 512, 1024),
        trials=TRIALS,
        master_seed=SEED,
    )
    rates = rates_by_key(spec)
    failures = []
    for samples in (512, 1024):
        for kind in ("mdl", "moving_increment", "moving_std"):
            rate = rates[(samples, kind)]
            if rate > 2.0:
                failures.append(f"{kind} {rate:.2f}% > 2% at N={samples}")
    mdl_small = rates[(128, "mdl")]
    for kind in ("moving_increment", "moving_std"):
        rate = rates[(128, kind)]
        if rate > mdl_small + 2.0:
            failures.append(
                f"{kind} {rate:.2f}% exceeds mdl {mdl_small:.2f}% + 2 points at N=128"
            )
    finish(acceptance_log, 2, "sample sweep", failures)


def test_criterion_3_estimate_range_ceilings(acceptance_log):
    failures = []
    largest = {"moving_increment": 0, "moving_std": 0}
    for axis_index, sources in enumerate(range(1, 8)):
        scenario = base_scenario(source_count=sources, snr_db=-5.0)
        for trial in range(TRIALS):
            rng = trial_rng(SEED, axis_index, trial)
            outcomes = run_trial(scenario, ("moving_increment", "moving_std"), rng)
            for kind, ceiling in (("moving_increment", 7), ("moving_std", 6)):
                estimate, _ = outcomes[kind]
                if estimate is None:
                    continue
                largest[kind] = max(largest[kind], estimate.source_count)
                if estimate.source_count > ceiling:
                    failures.append(
                        f"{kind} returned {estimate.source_count} (> {ceiling}) "
                        f"at true count {sources}"
                    )
    if not failures:
        assert largest["moving_increment"] <= 7
        assert largest["moving_std"] <= 6
    finish(acceptance_log, 3, "estimate range ceilings", failures)


def test_criterion_4_element_sweep(acceptance_log):
    spec = SweepSpec(
        base_scenario=base_scenario(snr_db=-5.0, snapshot_count=100),
        axis="element_count",
        axis_values=(4, 6, 8, 12, 16),
        detectors=("moving_std",),
        trials=TRIALS,
        master_seed=SEED,
    )
    rates = rates_by_key(spec)
    failures = []
    for elements in (8, 12, 16):
        rate = rates[(elements, "moving_std")]
        if rate > 2.0:
            failures.append(f"moving_std {rate:.2f}% > 2% at M={elements}")
    finish(acceptance_log, 4, "element sweep", failures)


def test_criterion_5_property_suite(acceptance_log):
    failures = []
    rng = np.random.default_rng(SEED)

    # Moving STD equals the scaled increment difference on every spectrum.
    for _ in range(1000):
        eigs = np.sort(rng.lognormal(0.0, 1.3, size=int(rng.integers(3, 10))))
        alphas = moving_std(eigs).statistic_trace
        if not np.allclose(alphas * math.sqrt(2), np.diff(np.diff(eigs)), atol=1e-10):
            failures.append("moving_std differs from scaled increment difference")
            break

    # Criteria agree with an independent brute-force evaluation.
    for _ in range(1000):
        m = int(rng.integers(2, 9))
        n = int(rng.integers(8, 2000))
        spectrum = random_descending_spectrum(rng, m)
        eigs = np.array(spectrum)
        if aic(eigs, n).source_count != criterion_argmin(spectrum, n, "aic"):
            failures.append("aic disagrees with brute-force oracle")
            break
        if mdl(eigs, n).source_count != criterion_argmin(spectrum, n, "mdl"):
            failures.append("mdl disagrees with brute-force oracle")
            break
        if not np.allclose(
            aic(eigs, n).statistic_trace,
            criterion_values(spectrum, n, "aic"),
            rtol=1e-9, atol=1e-6,
        ):
            failures.append("aic criterion values diverge from oracle")
            break

    # Scaling the spectrum never changes any detector's answer.
    for _ in range(200):
        m = int(rng.integers(3, 9))
        ascending = np.sort(rng.lognormal(0.0, 1.0, size=m))
        n = int(rng.integers(4, 500))
        answers = {
            "aic": aic(ascending[::-1], n).source_count,
            "mdl": mdl(ascending[::-1], n).source_count,
            "moving_increment": moving_increment(ascending).source_count,
            "moving_std": moving_std(ascending).source_count,
        }
        for scale in (1e-6, 1.0, 1e6):
            scaled = scale * ascending
            if (
                aic(scaled[::-1], n).source_count != answers["aic"]
                or mdl(scaled[::-1], n).source_count != answers["mdl"]
                or moving_increment(scaled).source_count != answers["moving_increment"]
                or moving_std(scaled).source_count != answers["moving_std"]
            ):
                failures.append(f"scale {scale} changed a detector answer")
                break

    # Correlation spectra: unit diagonal, trace M.
    for index in range(200):
        block_rng = np.random.default_rng((SEED, index))
        m = int(block_rng.integers(2, 9))
        block = block_rng.standard_normal((m, 32)) + 1j * block_rng.standard_normal((m, 32))
        corr = correlation_coefficient_matrix(sample_centered_covariance(block))
        if not np.array_equal(np.diag(corr), np.ones(m)):
            failures.append("correlation diagonal is not exactly 1")
            break
        if abs(eigenvalues_sorted(corr).sum() - m) > 1e-8:
            failures.append("correlation eigenvalue sum differs from element count")
            break

    # Noiseless blocks should be counted exactly by both moving detectors.
    for sources in range(1, 7):
        scenario = base_scenario(source_count=sources, snr_db=math.inf)
        misses = {"moving_increment": 0, "moving_std": 0}
        for trial in range(5):
            rng_trial = trial_rng(SEED, sources, trial)
            outcomes = run_trial(
                scenario, ("moving_increment", "moving_std"), rng_trial
            )
            for kind in misses:
                estimate, correct = outcomes[kind]
                if not correct:
                    misses[kind] += 1
        for kind, count in misses.items():
            if count:
                failures.append(
                    f"noiseless {kind} missed K={sources} in {count}/5 blocks"
                )

    finish(acceptance_log, 5, "property suite", failures)


def test_criterion_6_sweep_determinism(acceptance_log, tmp_path):
    args = [
        "sweep", "--axis", "snr_db", "--values", "-6,0", "--trials", "150",
        "--samples", "256", "--seed", "99",
    ]
    first, second, parallel = (
        tmp_path / name for name in ("first.csv", "second.csv", "parallel.csv")
    )
    failures = []
    if main(args + ["--out", str(first)]) != 0:
        failures.append("first run exited nonzero")
    if main(args + ["--out", str(second)]) != 0:
        failures.append("second run exited nonzero")
    if main(args + ["--out", str(parallel), "--workers", "3"]) != 0:
        failures.append("parallel run exited nonzero")
    if not failures:
        if first.read_bytes() != second.read_bytes():
            failures.append("repeat run changed the CSV output")
        if first.read_bytes() != parallel.read_bytes():
            failures.append("parallel run changed the CSV output")
    finish(acceptance_log, 6, "sweep determinism", failures)
