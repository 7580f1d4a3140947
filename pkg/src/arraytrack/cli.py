"""Command-line front end: scenario files in, plot-ready CSV artifacts out.

One YAML scenario file describes the array, element model, sources or
trajectory, noise, tracker, and default output paths; subcommands run one
stage each. Exit codes: 0 success, 2 configuration or input-file problem,
3 numerical/estimation failure. All file writes are atomic (temp + rename),
so a failing command never leaves a partial file.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import yaml

from arraytrack.array_model import ArrayConfig, DirectionAngles
from arraytrack.beamforming import (
    ElementModel,
    pattern_cut,
    pattern_metrics,
    save_pattern_cut,
    steering_weights,
)
from arraytrack.doa_music import estimate_doa, save_estimate, save_spectrum
from arraytrack.errors import ConfigError, NumericalError
from arraytrack.signal_model import (
    NoiseSpec,
    SourceSpec,
    generate_snapshots,
    load_snapshots,
    save_snapshots,
)
from arraytrack.tracking import (
    ConstantRateTrajectory,
    TrackerConfig,
    WaypointTrajectory,
    run_tracking,
    save_track_log,
)
from arraytrack._ioutil import atomic_write_text

_TOP_SECTIONS = ("array", "element_model", "sources", "noise", "trajectory",
                 "tracker", "doa", "output")
_OUTPUT_KEYS = ("pattern", "snapshots", "spectrum", "estimate", "track")


@dataclass(frozen=True)
class Scenario:
    "Parsed and validated scenario file."

    array: ArrayConfig
    element_model: ElementModel
    sources: tuple
    noise: NoiseSpec | None
    trajectory: object | None
    tracker: TrackerConfig
    doa_azimuth_range: tuple
    doa_elevation_range: tuple
    doa_step: float
    output: dict


def _section(raw, name: str, allowed) -> dict:
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ConfigError(f"section {name!r} must be a mapping")
    for key in raw:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} in section {name!r}")
    return dict(raw)


def _num(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"{name} must be a number, got {value!r}") from None


def _int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    return value


def _pair(value, name: str) -> tuple:
    if not (isinstance(value, (list, tuple)) and len(value) == 2):
        raise ConfigError(f"{name} must be a [low, high] pair, got {value!r}")
    return (_num(value[0], f"{name}[0]"), _num(value[1], f"{name}[1]"))


def _angles(sec: dict, name: str) -> DirectionAngles:
    return DirectionAngles(azimuth=_num(sec.get("azimuth", 0.0), f"{name}.azimuth"),
                           elevation=_num(sec.get("elevation", 0.0), f"{name}.elevation"))


def _parse_trajectory(raw):
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise ConfigError("section 'trajectory' must be a mapping")
    kind = raw.get("kind")
    if kind == "waypoints":
        sec = _section(raw, "trajectory", ("kind", "waypoints", "duration"))
        items = sec.get("waypoints")
        if not isinstance(items, list) or not items:
            raise ConfigError("trajectory.waypoints must be a non-empty list")
        waypoints = []
        for i, item in enumerate(items):
            w = _section(item, f"trajectory.waypoints[{i}]", ("time", "azimuth", "elevation"))
            if "time" not in w:
                raise ConfigError(f"trajectory.waypoints[{i}] needs a 'time' (seconds)")
            waypoints.append((_num(w["time"], "time"), _angles(w, f"trajectory.waypoints[{i}]")))
        duration = sec.get("duration")
        return WaypointTrajectory(
            waypoints=tuple(waypoints),
            duration=None if duration is None else _num(duration, "trajectory.duration"),
        )
    if kind == "constant_rate":
        sec = _section(raw, "trajectory", ("kind", "start", "rate_az", "rate_el", "duration"))
        start = _section(sec.get("start"), "trajectory.start", ("azimuth", "elevation"))
        if "duration" not in sec:
            raise ConfigError("constant_rate trajectory needs a 'duration' (seconds)")
        return ConstantRateTrajectory(
            start=_angles(start, "trajectory.start"),
            rate_az=_num(sec.get("rate_az", 0.0), "trajectory.rate_az"),
            rate_el=_num(sec.get("rate_el", 0.0), "trajectory.rate_el"),
            duration=_num(sec["duration"], "trajectory.duration"),
        )
    raise ConfigError(f"trajectory.kind must be 'waypoints' or 'constant_rate', got {kind!r}")


def load_scenario(path) -> Scenario:
    "Parse and validate one YAML scenario file; unknown keys are rejected."
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if raw is None:
        raise ConfigError(f"scenario file {path} is empty")
    if not isinstance(raw, dict):
        raise ConfigError("scenario root must be a mapping of sections")
    for key in raw:
        if key not in _TOP_SECTIONS:
            raise ConfigError(f"unknown section {key!r} (expected one of {_TOP_SECTIONS})")

    arr = _section(raw.get("array"), "array",
                   ("carrier_frequency", "num_x", "num_y", "spacing_x", "spacing_y",
                    "scan_limit", "metadata"))
    if not arr:
        raise ConfigError("section 'array' is required")
    for key in ("carrier_frequency", "num_x", "num_y", "spacing_x", "spacing_y"):
        if key not in arr:
            raise ConfigError(f"array.{key} is required")
    metadata = arr.get("metadata", {})
    if not isinstance(metadata, dict):
        raise ConfigError("array.metadata must be a mapping")
    kwargs = {}
    if "scan_limit" in arr:
        kwargs["scan_limit"] = _num(arr["scan_limit"], "array.scan_limit")
    array = ArrayConfig(
        carrier_frequency=_num(arr["carrier_frequency"], "array.carrier_frequency"),
        num_x=_int(arr["num_x"], "array.num_x"), num_y=_int(arr["num_y"], "array.num_y"),
        spacing_x=_num(arr["spacing_x"], "array.spacing_x"),
        spacing_y=_num(arr["spacing_y"], "array.spacing_y"),
        metadata=metadata, **kwargs,
    )

    em = _section(raw.get("element_model"), "element_model", ("kind", "exponent"))
    element_model = ElementModel(
        kind=em.get("kind", "cosine_power"),
        exponent=_num(em.get("exponent", 1.0), "element_model.exponent"),
    )

    sources = []
    raw_sources = raw.get("sources")
    if raw_sources is not None:
        if not isinstance(raw_sources, list):
            raise ConfigError("section 'sources' must be a list")
        for i, item in enumerate(raw_sources):
            sec = _section(item, f"sources[{i}]", ("azimuth", "elevation", "power"))
            sources.append(SourceSpec(
                angles=_angles(sec, f"sources[{i}]"),
                power=_num(sec.get("power", 1.0), f"sources[{i}].power"),
            ))

    noise = None
    raw_noise = _section(raw.get("noise"), "noise", ("snr_db", "seed"))
    if raw_noise:
        if "snr_db" not in raw_noise:
            raise ConfigError("noise.snr_db is required (decibels; 'inf' disables noise)")
        noise = NoiseSpec(snr_db=_num(raw_noise["snr_db"], "noise.snr_db"),
                          seed=_int(raw_noise.get("seed", 0), "noise.seed"))

    trk = _section(raw.get("tracker"), "tracker",
                   ("update_period", "smoothing_alpha", "snapshots_per_update",
                    "snr_db", "grid_step", "scan_limit"))
    tracker_kwargs = {}
    for key in ("update_period", "smoothing_alpha", "snr_db", "grid_step", "scan_limit"):
        if key in trk:
            tracker_kwargs[key] = _num(trk[key], f"tracker.{key}")
    if "snapshots_per_update" in trk:
        tracker_kwargs["snapshots_per_update"] = _int(
            trk["snapshots_per_update"], "tracker.snapshots_per_update")
    tracker = TrackerConfig(**tracker_kwargs)

    doa = _section(raw.get("doa"), "doa", ("azimuth_range", "elevation_range", "step"))
    az_range = _pair(doa["azimuth_range"], "doa.azimuth_range") if "azimuth_range" in doa \
        else (-90.0, 90.0)
    el_range = _pair(doa["elevation_range"], "doa.elevation_range") if "elevation_range" in doa \
        else (-90.0, 90.0)
    doa_step = _num(doa.get("step", 1.0), "doa.step")

    output = _section(raw.get("output"), "output", _OUTPUT_KEYS)
    return Scenario(array=array, element_model=element_model, sources=tuple(sources),
                    noise=noise, trajectory=_parse_trajectory(raw.get("trajectory")),
                    tracker=tracker, doa_azimuth_range=az_range,
                    doa_elevation_range=el_range, doa_step=doa_step, output=output)


def _out_path(flag_value, scenario: Scenario, key: str) -> str:
    if flag_value:
        return flag_value
    if key in scenario.output:
        return str(scenario.output[key])
    raise ConfigError(f"no output path: pass --out or set output.{key} in the scenario file")


def cmd_pattern(args) -> int:
    "Synthesize a steered pattern cut; write CSV + metrics, echo metrics."
    sc = load_scenario(args.config)
    steer = DirectionAngles(azimuth=args.steer_az, elevation=args.steer_el)
    weights = steering_weights(sc.array, steer)
    axis = "azimuth" if args.cut == "az" else "elevation"
    fixed = steer.elevation if axis == "azimuth" else steer.azimuth
    cut = pattern_cut(sc.array, weights, sc.element_model, axis, fixed, args.span, args.step)
    metrics = pattern_metrics(cut)

    out = _out_path(args.out, sc, "pattern")
    record = json.dumps({
        "peak_gain_dbi": metrics.peak_gain_dbi,
        "peak_angle_deg": metrics.peak_angle_deg,
        "hpbw_deg": metrics.hpbw_deg,
        "sidelobe_level_db": metrics.sidelobe_level_db,
    })
    save_pattern_cut(cut, out)
    atomic_write_text(Path(out).with_suffix(".metrics.json"), record + "\n")
    print(record)
    return 0


def cmd_snapshots(args) -> int:
    "Generate a seeded snapshot matrix from the scenario sources."
    sc = load_scenario(args.config)
    if not sc.sources:
        raise ConfigError("scenario has no 'sources' section")
    if sc.noise is None:
        raise ConfigError("scenario has no 'noise' section (snr_db is required)")
    seed = sc.noise.seed if args.seed is None else args.seed
    noise = NoiseSpec(snr_db=sc.noise.snr_db, seed=seed)
    m = generate_snapshots(sc.array, list(sc.sources), noise, args.t)
    save_snapshots(m, _out_path(args.out, sc, "snapshots"))
    return 0


def cmd_doa(args) -> int:
    "Estimate arrival angles from a snapshot file; write spectrum + estimate."
    sc = load_scenario(args.config)
    in_path = args.infile or sc.output.get("snapshots")
    if not in_path:
        raise ConfigError("no snapshot input: pass --in or set output.snapshots in the scenario file")
    m = load_snapshots(in_path)
    step = sc.doa_step if args.grid_step is None else args.grid_step
    est = estimate_doa(sc.array, m, args.sources,
                       sc.doa_azimuth_range, sc.doa_elevation_range, step)
    if m.shape[1] <= args.sources:
        # not enough snapshots to support the assumed source count
        est = replace(est, degraded=True)
    out_est = _out_path(args.out_estimate, sc, "estimate")
    save_spectrum(est.spectrum, _out_path(args.out_spectrum, sc, "spectrum"))
    save_estimate(est, out_est)
    sys.stdout.write(Path(out_est).read_text(encoding="utf-8"))
    return 0


def cmd_track(args) -> int:
    "Run the closed-loop tracker over the scenario trajectory; write the log."
    sc = load_scenario(args.config)
    if sc.trajectory is None:
        raise ConfigError("scenario has no 'trajectory' section")
    if args.seed is not None:
        seed = args.seed
    else:
        seed = sc.noise.seed if sc.noise is not None else 0
    log = run_tracking(sc.array, sc.element_model, sc.trajectory, sc.tracker, seed)
    save_track_log(log, _out_path(args.out, sc, "track"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arraytrack",
        description="Phased-array pattern synthesis, direction finding, and tracking runs "
                    "driven by a YAML scenario file.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add_config(p):
        p.add_argument("--config", required=True, metavar="PATH",
                       help="scenario file (YAML)")

    p = sub.add_parser("pattern", help="write a steered pattern cut and its metrics",
                       description="Steer the array and write one gain cut (CSV, dBi) plus a "
                                   "metrics record; metrics are also printed as one JSON line.")
    add_config(p)
    p.add_argument("--steer-az", type=float, default=0.0, metavar="DEG",
                   help="steering azimuth in degrees (default 0)")
    p.add_argument("--steer-el", type=float, default=0.0, metavar="DEG",
                   help="steering elevation in degrees (default 0)")
    p.add_argument("--cut", choices=("az", "el"), default="az",
                   help="cut axis: az sweeps azimuth at the steer elevation, el sweeps "
                        "elevation at the steer azimuth (default az)")
    p.add_argument("--span", type=float, default=180.0, metavar="DEG",
                   help="total cut width in degrees, centered on 0 (default 180)")
    p.add_argument("--step", type=float, default=0.5, metavar="DEG",
                   help="cut sample spacing in degrees (default 0.5)")
    p.add_argument("--out", metavar="PATH",
                   help="cut CSV path (default: output.pattern from the scenario); metrics go "
                        "to the same path with a .metrics.json suffix")
    p.set_defaults(func=cmd_pattern)

    p = sub.add_parser("snapshots", help="generate and save a snapshot matrix",
                       description="Simulate the scenario sources in noise and write the "
                                   "snapshot matrix CSV.")
    add_config(p)
    p.add_argument("--t", type=int, required=True, metavar="N",
                   help="number of snapshots (samples) to generate")
    p.add_argument("--seed", type=int, metavar="N",
                   help="noise/symbol seed (default: noise.seed from the scenario)")
    p.add_argument("--out", metavar="PATH",
                   help="snapshot CSV path (default: output.snapshots from the scenario)")
    p.set_defaults(func=cmd_snapshots)

    p = sub.add_parser("doa", help="estimate arrival angles from saved snapshots",
                       description="Run the subspace estimator over a saved snapshot matrix; "
                                   "write the scanned spectrum CSV and the estimate record "
                                   "(JSON lines, also echoed to stdout).")
    add_config(p)
    p.add_argument("--in", dest="infile", metavar="PATH",
                   help="snapshot CSV to read (default: output.snapshots from the scenario)")
    p.add_argument("--sources", type=int, default=1, metavar="N",
                   help="assumed number of sources (default 1)")
    p.add_argument("--grid-step", type=float, metavar="DEG",
                   help="search grid step in degrees (default: doa.step from the scenario, 1)")
    p.add_argument("--out-spectrum", metavar="PATH",
                   help="spectrum CSV path (default: output.spectrum from the scenario)")
    p.add_argument("--out-estimate", metavar="PATH",
                   help="estimate record path (default: output.estimate from the scenario)")
    p.set_defaults(func=cmd_doa)

    p = sub.add_parser("track", help="run the closed-loop tracker and save its log",
                       description="Step the tracker over the scenario trajectory and write "
                                   "the per-tick log CSV (angles in degrees, gain in dBi).")
    add_config(p)
    p.add_argument("--seed", type=int, metavar="N",
                   help="run seed (default: noise.seed from the scenario, else 0)")
    p.add_argument("--out", metavar="PATH",
                   help="track log CSV path (default: output.track from the scenario)")
    p.set_defaults(func=cmd_track)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on bad flags, 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
