"""Closed-loop tracking: simulate, estimate, smooth, clamp, and log.

Each update tick draws snapshots at the target's true angles, estimates the
direction on a grid, low-pass filters the command, clamps it to the scan
envelope, and records pointing error and the gain actually delivered toward
the target. Simulated time only; one tick per update_period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from arraytrack.array_model import ArrayConfig, DirectionAngles, angular_separation
from arraytrack.beamforming import ElementModel, directivity, steering_weights
from arraytrack.doa_music import estimate_doa
from arraytrack.errors import AmbiguousSpectrumError, ConfigError
from arraytrack.signal_model import NoiseSpec, SourceSpec, generate_snapshots
from arraytrack._ioutil import atomic_write_text


@dataclass(frozen=True)
class WaypointTrajectory:
    """Piecewise-linear target path through (time, angles) waypoints.

    Times are seconds, strictly increasing; the path holds the first and
    last angles outside the waypoint span. Every waypoint must be in the
    visible half-space, which linear interpolation then preserves.
    """

    waypoints: tuple
    duration: float | None = None

    def __post_init__(self):
        wps = tuple((float(t), a) for t, a in self.waypoints)
        object.__setattr__(self, "waypoints", wps)
        if len(wps) < 1:
            raise ConfigError("waypoint trajectory needs at least one waypoint")
        times = [t for t, _ in wps]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ConfigError(f"waypoint times must be strictly increasing, got {times}")
        for t, a in wps:
            if not a.is_visible():
                raise ConfigError(f"waypoint at t={t} s leaves the visible half-space: {a}")
        if self.duration is None:
            object.__setattr__(self, "duration", times[-1])
        elif not (self.duration > 0):
            raise ConfigError(f"duration must be > 0, got {self.duration}")

    def angles_at(self, t: float) -> DirectionAngles:
        times = np.array([w[0] for w in self.waypoints])
        az = np.array([w[1].azimuth for w in self.waypoints])
        el = np.array([w[1].elevation for w in self.waypoints])
        return DirectionAngles(azimuth=float(np.interp(t, times, az)),
                               elevation=float(np.interp(t, times, el)))


@dataclass(frozen=True)
class ConstantRateTrajectory:
    """Target moving at fixed angular rates from a start direction.

    Rates are degrees per second per axis; the path holds its endpoint after
    ``duration``. Both endpoints must be visible, which bounds the whole
    linear path.
    """

    start: DirectionAngles
    rate_az: float = 0.0
    rate_el: float = 0.0
    duration: float = 1.0

    def __post_init__(self):
        if not (self.duration > 0):
            raise ConfigError(f"duration must be > 0, got {self.duration}")
        if not self.start.is_visible():
            raise ConfigError(f"start angles leave the visible half-space: {self.start}")
        end_az = self.start.azimuth + self.rate_az * self.duration
        end_el = self.start.elevation + self.rate_el * self.duration
        if abs(end_az) > 90.0 or abs(end_el) > 90.0:
            raise ConfigError(
                f"trajectory leaves the visible half-space by t={self.duration} s "
                f"(endpoint az={end_az}, el={end_el})"
            )

    def angles_at(self, t: float) -> DirectionAngles:
        t = min(max(t, 0.0), self.duration)
        return DirectionAngles(azimuth=self.start.azimuth + self.rate_az * t,
                               elevation=self.start.elevation + self.rate_el * t)


@dataclass(frozen=True)
class TrackerConfig:
    "Loop timing, smoothing, measurement, and scan-envelope settings."

    update_period: float = 0.1
    smoothing_alpha: float = 0.7
    snapshots_per_update: int = 100
    snr_db: float = 20.0
    grid_step: float = 1.0
    scan_limit: float = 42.0

    def __post_init__(self):
        if not (self.update_period > 0):
            raise ConfigError(f"update_period must be > 0 s, got {self.update_period}")
        if not (0.0 < self.smoothing_alpha <= 1.0):
            raise ConfigError(f"smoothing_alpha must be in (0, 1], got {self.smoothing_alpha}")
        if self.snapshots_per_update < 1:
            raise ConfigError(f"snapshots_per_update must be >= 1, got {self.snapshots_per_update}")
        if not (0.0 < self.scan_limit <= 90.0):
            raise ConfigError(f"scan_limit must be in (0, 90] degrees, got {self.scan_limit}")
        if not (self.grid_step > 0):
            raise ConfigError(f"grid_step must be > 0 degrees, got {self.grid_step}")
        if math.isnan(self.snr_db):
            raise ConfigError("snr_db must not be NaN")


@dataclass(frozen=True)
class TrackRow:
    "One update tick of a tracking run."

    time_s: float
    true_angles: DirectionAngles
    estimated_angles: DirectionAngles | None
    steered_angles: DirectionAngles
    pointing_error_deg: float
    realized_gain_dbi: float
    flags: tuple = ()


@dataclass
class TrackLog:
    "Ordered tick rows of one tracking run."

    rows: list = field(default_factory=list)


def clamp_to_scan_envelope(angles: DirectionAngles, limit: float) -> DirectionAngles:
    "Clamp azimuth and elevation independently to [-limit, +limit] degrees."
    if not (0.0 < limit <= 90.0):
        raise ConfigError(f"scan limit must be in (0, 90] degrees, got {limit}")
    return DirectionAngles(
        azimuth=min(max(angles.azimuth, -limit), limit),
        elevation=min(max(angles.elevation, -limit), limit),
    )


def tracker_step(previous: DirectionAngles, estimate: DirectionAngles,
                 cfg: TrackerConfig) -> DirectionAngles:
    """Exponentially smoothed steering update, clamped to the scan envelope.

    command = clamp(previous + alpha * (estimate - previous)) per axis.
    """
    a = cfg.smoothing_alpha
    raw = DirectionAngles(
        azimuth=previous.azimuth + a * (estimate.azimuth - previous.azimuth),
        elevation=previous.elevation + a * (estimate.elevation - previous.elevation),
    )
    return clamp_to_scan_envelope(raw, cfg.scan_limit)


def run_tracking(config: ArrayConfig, model: ElementModel, traj, cfg: TrackerConfig,
                 seed: int = 0) -> TrackLog:
    """Run the closed loop over the trajectory's duration.

    Ticks happen at t = k * update_period for k = 1 .. floor(duration /
    update_period). Per-tick noise seeds derive from one seed sequence, so a
    run is reproducible while ticks stay statistically independent. When the
    spectrum carries no direction information the previous command is held
    and the row is flagged "held"; a degraded peak search flags "degraded".
    """
    num_ticks = int(math.floor(traj.duration / cfg.update_period + 1e-9))
    if num_ticks < 1:
        raise ConfigError(
            f"duration {traj.duration} s is shorter than one update period {cfg.update_period} s"
        )
    step_seeds = np.random.SeedSequence(seed).generate_state(num_ticks, dtype=np.uint64)

    command = DirectionAngles(azimuth=0.0, elevation=0.0)
    log = TrackLog()
    for k in range(1, num_ticks + 1):
        t = k * cfg.update_period
        true = traj.angles_at(t)
        snapshots = generate_snapshots(
            config, [SourceSpec(angles=true, power=1.0)],
            NoiseSpec(snr_db=cfg.snr_db, seed=int(step_seeds[k - 1])),
            cfg.snapshots_per_update,
        )
        flags = []
        estimated = None
        try:
            est = estimate_doa(config, snapshots, num_sources=1, step=cfg.grid_step)
            estimated = est.angles[0]
            if est.degraded:
                flags.append("degraded")
            command = tracker_step(command, estimated, cfg)
        except AmbiguousSpectrumError:
            flags.append("held")

        weights = steering_weights(config, command)
        gain = directivity(config, weights, model, true)
        log.rows.append(TrackRow(
            time_s=t, true_angles=true, estimated_angles=estimated,
            steered_angles=command,
            pointing_error_deg=angular_separation(true, command),
            realized_gain_dbi=gain, flags=tuple(flags),
        ))
    return log


def save_track_log(log: TrackLog, path) -> None:
    """Write a tracking log as CSV.

    Header `t_s,true_az,true_el,est_az,est_el,steer_az,steer_el,err_deg,
    gain_dbi,flags`; held ticks write nan estimates; flags join with ";".
    """
    lines = ["t_s,true_az,true_el,est_az,est_el,steer_az,steer_el,err_deg,gain_dbi,flags"]
    for r in log.rows:
        est_az = "nan" if r.estimated_angles is None else f"{r.estimated_angles.azimuth:.12g}"
        est_el = "nan" if r.estimated_angles is None else f"{r.estimated_angles.elevation:.12g}"
        lines.append(
            f"{r.time_s:.12g},{r.true_angles.azimuth:.12g},{r.true_angles.elevation:.12g},"
            f"{est_az},{est_el},{r.steered_angles.azimuth:.12g},{r.steered_angles.elevation:.12g},"
            f"{r.pointing_error_deg:.12g},{r.realized_gain_dbi:.12g},{';'.join(r.flags)}"
        )
    atomic_write_text(path, "\n".join(lines) + "\n")
