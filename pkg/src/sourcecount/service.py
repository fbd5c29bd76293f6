"""HTTP service exposing the estimator over JSON.

Thin wrapper: requests are validated with pydantic, converted to the
library's scenario types, and dispatched to the same runner functions the
CLI uses locally.  Angles cross this boundary in degrees.
"""

from __future__ import annotations

import math

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

import numpy as np

from .array_model import ArrayGeometry, Scenario
from .detectors import DETECTOR_KINDS, ThresholdParams
from .montecarlo import SWEEP_AXES, SweepSpec
from .runners import estimate_rows, stats_rows, sweep_rows

DEFAULT_DETECTORS = ("aic", "mdl", "moving_increment", "moving_std")


class ScenarioSpec(BaseModel):
    """One experiment: array, sources, snapshots, and SNR (dB)."""

    elements: int = 8
    radius: float = 0.5
    sources: int = 2
    angles_deg: list[float] | None = None
    samples: int = 1024
    snr_db: float = 0.0


class ThresholdSpec(BaseModel):
    rho: float = 1.0
    signal_power: float = 1.0


class EstimateRequest(BaseModel):
    scenario: ScenarioSpec = Field(default_factory=ScenarioSpec)
    detectors: list[str] = Field(default_factory=lambda: list(DEFAULT_DETECTORS))
    seed: int = 0
    threshold: ThresholdSpec = Field(default_factory=ThresholdSpec)


class DetectorEstimate(BaseModel):
    detector: str
    source_count: int
    selected_index: int
    statistic_trace: list[float]


class EstimateResponse(BaseModel):
    results: list[DetectorEstimate]


class StatsRequest(BaseModel):
    scenario: ScenarioSpec = Field(default_factory=ScenarioSpec)
    sweep_axis: str = "snr_db"
    values: list[float | int]
    seed: int = 0


class StatsRow(BaseModel):
    sweep_value: float | int
    index: int
    lambda_corr: float
    delta_corr: float | None
    alpha_corr: float | None
    lambda_cov: float
    delta_cov: float | None
    alpha_cov: float | None


class StatsResponse(BaseModel):
    rows: list[StatsRow]


class SweepRequest(BaseModel):
    scenario: ScenarioSpec = Field(default_factory=ScenarioSpec)
    axis: str = "snr_db"
    values: list[float | int]
    detectors: list[str] = Field(default_factory=lambda: list(DEFAULT_DETECTORS))
    trials: int = 10000
    seed: int = 0
    threshold: ThresholdSpec = Field(default_factory=ThresholdSpec)
    redraw_azimuths_per_trial: bool = False
    workers: int = 1


class SweepRow(BaseModel):
    detector: str
    axis: str
    axis_value: float | int
    trials: int
    errors: int
    error_rate_percent: float


class SweepResponse(BaseModel):
    rows: list[SweepRow]


def build_scenario(spec: ScenarioSpec) -> Scenario:
    """Convert a request scenario (degrees) into the library's types (radians)."""
    geometry = ArrayGeometry(element_count=spec.elements, radius=spec.radius)
    azimuths = None
    if spec.angles_deg is not None:
        azimuths = np.deg2rad(np.asarray(spec.angles_deg, dtype=float))
    return Scenario(
        geometry=geometry,
        source_count=spec.sources,
        source_azimuths=azimuths,
        snapshot_count=spec.samples,
        snr_db=spec.snr_db,
    )


def _validated_detectors(kinds: list[str]) -> tuple[str, ...]:
    unknown = [k for k in kinds if k not in DETECTOR_KINDS]
    if unknown:
        raise ValueError(f"unknown detectors: {unknown}")
    if not kinds:
        raise ValueError("select at least one detector")
    return tuple(kinds)


def create_app() -> FastAPI:
    app = FastAPI(title="sourcecount", version="0.1.0")

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/estimate", response_model=EstimateResponse)
    def estimate(request: EstimateRequest) -> EstimateResponse:
        try:
            rows = estimate_rows(
                build_scenario(request.scenario),
                _validated_detectors(request.detectors),
                request.seed,
                ThresholdParams(request.threshold.rho, request.threshold.signal_power),
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return EstimateResponse(results=[DetectorEstimate(**row) for row in rows])

    @app.post("/stats", response_model=StatsResponse)
    def stats(request: StatsRequest) -> StatsResponse:
        try:
            rows = stats_rows(
                build_scenario(request.scenario),
                request.sweep_axis,
                tuple(request.values),
                request.seed,
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return StatsResponse(rows=[StatsRow(**row) for row in rows])

    @app.post("/sweep", response_model=SweepResponse)
    def sweep(request: SweepRequest) -> SweepResponse:
        try:
            if request.axis not in SWEEP_AXES:
                raise ValueError(f"unknown sweep axis {request.axis!r}")
            spec = SweepSpec(
                base_scenario=build_scenario(request.scenario),
                axis=request.axis,
                axis_values=tuple(request.values),
                detectors=_validated_detectors(request.detectors),
                trials=request.trials,
                master_seed=request.seed,
                threshold_params=ThresholdParams(
                    request.threshold.rho, request.threshold.signal_power
                ),
                redraw_azimuths_per_trial=request.redraw_azimuths_per_trial,
            )
            rows = sweep_rows(spec, workers=request.workers)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return SweepResponse(rows=[SweepRow(**row) for row in rows])

    return app


app = create_app()
