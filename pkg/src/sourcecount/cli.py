"""Command-line front end.

Subcommands:

* ``estimate``: run every selected detector once on a seeded block.
* ``stats``: dump eigenvalue spectra and moving statistics as CSV.
* ``sweep``: Monte Carlo error-rate sweep over one axis, as CSV.
* ``serve``: start the HTTP service.

Angles and SNR are given in degrees and dB at this boundary.  With
``--server URL`` the estimate/stats/sweep commands post the request to a
running service instead of computing locally; the emitted CSV is
identical either way.

Exit codes: 0 success, 1 configuration error, 2 runtime or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import os
import re
import sys
import tempfile

import httpx
import numpy as np

from .array_model import ArrayGeometry, Scenario
from .detectors import DETECTOR_KINDS, ThresholdParams
from .montecarlo import SWEEP_AXES, SweepSpec
from .runners import STATS_COLUMNS, SWEEP_COLUMNS, estimate_rows, stats_rows, sweep_rows

DEFAULT_DETECTORS = "aic,mdl,moving_increment,moving_std"


class ConfigError(ValueError):
    """Bad flag values or inconsistent configuration (exit code 1)."""


class _ArgumentParser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # Values such as "-10,-7,-3,0" must parse as option arguments
        # even though they start with a dash. No option here looks like
        # a number, so tokens of digits, signs, dots, and commas are
        # safe to treat as values.
        self._negative_number_matcher = re.compile(r"^-\d[\d.,eE+-]*$")

    # Flag parse failures are configuration errors, not runtime errors.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_list(text: str, convert, what: str) -> tuple:
    parts = [part.strip() for part in text.split(",") if part.strip()]
    if not parts:
        raise ConfigError(f"no {what} given")
    try:
        return tuple(convert(part) for part in parts)
    except ValueError as exc:
        raise ConfigError(f"bad {what}: {exc}") from exc


def _scenario_from_args(args, snr_db: float, snapshot_count: int) -> Scenario:
    try:
        geometry = ArrayGeometry(element_count=args.elements, radius=args.radius)
        azimuths = None
        if args.angles is not None:
            azimuths = np.deg2rad(_parse_list(args.angles, float, "angles"))
        return Scenario(
            geometry=geometry,
            source_count=args.sources,
            source_azimuths=azimuths,
            snapshot_count=snapshot_count,
            snr_db=snr_db,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _detectors_from_args(args) -> tuple[str, ...]:
    kinds = _parse_list(args.detectors, str, "detectors")
    unknown = [kind for kind in kinds if kind not in DETECTOR_KINDS]
    if unknown:
        raise ConfigError(f"unknown detectors: {unknown}")
    return kinds


def _threshold_from_args(args) -> ThresholdParams:
    try:
        return ThresholdParams(rho=args.rho, signal_power=args.signal_power)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _scenario_payload(args, snr_db: float, snapshot_count: int) -> dict:
    angles = None
    if args.angles is not None:
        angles = list(_parse_list(args.angles, float, "angles"))
    return {
        "elements": args.elements,
        "radius": args.radius,
        "sources": args.sources,
        "angles_deg": angles,
        "samples": snapshot_count,
        "snr_db": snr_db,
    }


def _post(server: str, path: str, payload: dict) -> dict:
    with httpx.Client(base_url=server, timeout=600.0) as client:
        response = client.post(path, json=payload)
    if response.status_code >= 400:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise RuntimeError(f"server returned {response.status_code}: {detail}")
    return response.json()


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: str | None, header: tuple, rows: list[dict]) -> None:
    def dump(stream) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(row[column]) for column in header])

    if path is None:
        dump(sys.stdout)
        return
    directory = os.path.dirname(os.path.abspath(path))
    handle = tempfile.NamedTemporaryFile(
        mode="w", dir=directory, suffix=".tmp", delete=False, newline=""
    )
    try:
        with handle:
            dump(handle)
        os.replace(handle.name, path)
    except BaseException:
        if os.path.exists(handle.name):
            os.unlink(handle.name)
        raise


def _single(values: tuple, what: str):
    if len(values) != 1:
        raise ConfigError(f"{what} must be a single value for this command")
    return values[0]


def cmd_estimate(args) -> int:
    snr_db = _single(_parse_list(args.snr, float, "snr"), "snr")
    samples = _single(_parse_list(args.samples, int, "samples"), "samples")
    detectors = _detectors_from_args(args)
    if args.server:
        payload = {
            "scenario": _scenario_payload(args, snr_db, samples),
            "detectors": list(detectors),
            "seed": args.seed,
            "threshold": {"rho": args.rho, "signal_power": args.signal_power},
        }
        rows = _post(args.server, "/estimate", payload)["results"]
    else:
        scenario = _scenario_from_args(args, snr_db, samples)
        rows = estimate_rows(scenario, detectors, args.seed, _threshold_from_args(args))
    for row in rows:
        trace = ",".join(f"{value:.6g}" for value in row["statistic_trace"])
        print(
            f"{row['detector']} khat={row['source_count']} "
            f"index={row['selected_index']} trace={trace}"
        )
    return 0


def cmd_stats(args) -> int:
    snr_values = _parse_list(args.snr, float, "snr")
    sample_values = _parse_list(args.samples, int, "samples")
    if len(snr_values) > 1 and len(sample_values) > 1:
        raise ConfigError("vary snr or samples, not both")
    if len(sample_values) > 1:
        sweep_axis, values = "snapshot_count", sample_values
    else:
        sweep_axis, values = "snr_db", snr_values
    if args.server:
        payload = {
            "scenario": _scenario_payload(args, snr_values[0], sample_values[0]),
            "sweep_axis": sweep_axis,
            "values": list(values),
            "seed": args.seed,
        }
        rows = _post(args.server, "/stats", payload)["rows"]
    else:
        scenario = _scenario_from_args(args, snr_values[0], sample_values[0])
        rows = stats_rows(scenario, sweep_axis, values, args.seed)
    _write_csv(args.out, STATS_COLUMNS, rows)
    return 0


def cmd_sweep(args) -> int:
    snr_db = _single(_parse_list(args.snr, float, "snr"), "snr")
    samples = _single(_parse_list(args.samples, int, "samples"), "samples")
    detectors = _detectors_from_args(args)
    if args.axis not in SWEEP_AXES:
        raise ConfigError(f"unknown sweep axis {args.axis!r}")
    convert = float if args.axis == "snr_db" else int
    values = _parse_list(args.values, convert, "axis values")
    if args.trials < 1:
        raise ConfigError("trials must be positive")
    if args.workers < 1:
        raise ConfigError("workers must be positive")
    if args.server:
        payload = {
            "scenario": _scenario_payload(args, snr_db, samples),
            "axis": args.axis,
            "values": list(values),
            "detectors": list(detectors),
            "trials": args.trials,
            "seed": args.seed,
            "threshold": {"rho": args.rho, "signal_power": args.signal_power},
            "redraw_azimuths_per_trial": args.redraw_angles_per_trial,
            "workers": args.workers,
        }
        rows = _post(args.server, "/sweep", payload)["rows"]
    else:
        try:
            spec = SweepSpec(
                base_scenario=_scenario_from_args(args, snr_db, samples),
                axis=args.axis,
                axis_values=values,
                detectors=detectors,
                trials=args.trials,
                master_seed=args.seed,
                threshold_params=_threshold_from_args(args),
                redraw_azimuths_per_trial=args.redraw_angles_per_trial,
            )
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        rows = sweep_rows(spec, workers=args.workers)
    _write_csv(args.out, SWEEP_COLUMNS, rows)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return 0


def _add_scenario_flags(parser) -> None:
    parser.add_argument("--elements", type=int, default=8, help="array elements (default 8)")
    parser.add_argument("--radius", type=float, default=0.5, help="array radius in wavelengths")
    parser.add_argument("--sources", type=int, default=2, help="true source count (default 2)")
    parser.add_argument(
        "--angles", default=None, help="comma separated source azimuths in degrees"
    )
    parser.add_argument("--samples", default="1024", help="snapshots per block")
    parser.add_argument("--snr", default="0", help="SNR in dB ('inf' for noiseless)")
    parser.add_argument("--seed", type=int, default=0, help="master seed")
    parser.add_argument("--server", default=None, help="base URL of a running service")


def _add_detector_flags(parser) -> None:
    parser.add_argument("--detectors", default=DEFAULT_DETECTORS, help="comma separated kinds")
    parser.add_argument("--rho", type=float, default=1.0, help="threshold scale factor")
    parser.add_argument(
        "--signal-power", type=float, default=1.0, dest="signal_power",
        help="signal power estimate for the threshold detector",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="sourcecount",
        description="Estimate the number of sources hitting a uniform circular array.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    estimate = commands.add_parser("estimate", help="single seeded block, one line per detector")
    _add_scenario_flags(estimate)
    _add_detector_flags(estimate)
    estimate.set_defaults(func=cmd_estimate)

    stats = commands.add_parser("stats", help="eigenvalue spectra and moving statistics CSV")
    _add_scenario_flags(stats)
    stats.add_argument("--out", default=None, help="output CSV path (default stdout)")
    stats.set_defaults(func=cmd_stats)

    sweep = commands.add_parser("sweep", help="Monte Carlo error-rate sweep CSV")
    _add_scenario_flags(sweep)
    _add_detector_flags(sweep)
    sweep.add_argument("--axis", default="snr_db", help="|".join(SWEEP_AXES))
    sweep.add_argument("--values", required=True, help="comma separated axis values")
    sweep.add_argument("--trials", type=int, default=10000, help="trials per axis value")
    sweep.add_argument("--workers", type=int, default=1, help="parallel workers")
    sweep.add_argument(
        "--redraw-angles-per-trial", action="store_true",
        help="draw random source azimuths each trial instead of the fixed defaults",
    )
    sweep.add_argument("--out", default=None, help="output CSV path (default stdout)")
    sweep.set_defaults(func=cmd_sweep)

    serve = commands.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8765)
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, RuntimeError, httpx.HTTPError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
