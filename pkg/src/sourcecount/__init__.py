"""Source enumeration for uniform circular arrays.

Estimates how many signal sources hit a UCA from the eigenvalues of the
auto-correlation-coefficient matrix (moving increment and moving STD
detectors), benchmarked against AIC and MDL through a reproducible Monte
Carlo harness.
"""

from .array_model import (
    ArrayGeometry,
    Scenario,
    default_source_azimuths,
    generate_qpsk_symbols,
    steering_matrix,
    synthesize_snapshots,
    uca_steering_vector,
    uniform_element_azimuths,
)
from .detectors import (
    DETECTOR_KINDS,
    Estimate,
    ThresholdParams,
    aic,
    increment_threshold,
    mdl,
    moving_increment,
    moving_std,
)
from .montecarlo import (
    ErrorRateReport,
    ReportRow,
    SweepSpec,
    SWEEP_AXES,
    error_rate,
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

__version__ = "0.1.0"

__all__ = [
    "ArrayGeometry",
    "Scenario",
    "default_source_azimuths",
    "generate_qpsk_symbols",
    "steering_matrix",
    "synthesize_snapshots",
    "uca_steering_vector",
    "uniform_element_azimuths",
    "DETECTOR_KINDS",
    "Estimate",
    "ThresholdParams",
    "aic",
    "increment_threshold",
    "mdl",
    "moving_increment",
    "moving_std",
    "ErrorRateReport",
    "ReportRow",
    "SweepSpec",
    "SWEEP_AXES",
    "error_rate",
    "run_sweep",
    "run_trial",
    "scenario_for_axis_value",
    "trial_rng",
    "correlation_coefficient_matrix",
    "eigenvalues_sorted",
    "sample_autocovariance",
    "sample_centered_covariance",
    "__version__",
]
