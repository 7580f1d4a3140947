"""Steering vectors, phase-only weights, far-field patterns, and pattern metrics.

Gain figures are directivities in dBi (no ohmic or mismatch loss); the
radiated-power normalization is a deterministic midpoint quadrature over the
visible hemisphere with a cos(elevation) Jacobian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from arraytrack import _kernels
from arraytrack.array_model import (
    ArrayConfig,
    DirectionAngles,
    direction_cosines,
    element_positions,
)
from arraytrack.errors import ConfigError, IncompleteCutError, NumericalError
from arraytrack._ioutil import atomic_write_text

_ELEMENT_KINDS = ("isotropic", "cosine_power")
DEFAULT_QUADRATURE_STEP_DEG = 0.5


@dataclass(frozen=True)
class ElementModel:
    """Analytic surrogate for the per-element pattern.

    ``isotropic`` radiates uniformly into the front half-space;
    ``cosine_power`` has amplitude w**exponent (w = boresight direction
    cosine). Both are 1 at boresight and 0 behind the array plane.
    """

    kind: str = "cosine_power"
    exponent: float = 1.0

    def __post_init__(self):
        if self.kind not in _ELEMENT_KINDS:
            raise ConfigError(f"element model kind must be one of {_ELEMENT_KINDS}, got {self.kind!r}")
        if self.kind == "cosine_power" and not (self.exponent >= 0):
            raise ConfigError(f"cosine_power exponent must be >= 0, got {self.exponent}")

    @property
    def _kind_code(self) -> int:
        return 0 if self.kind == "isotropic" else 1


@dataclass(frozen=True)
class PatternCut:
    """One-dimensional gain cut through the far-field pattern.

    ``angles_deg`` sweeps the cut axis (strictly increasing, uniform);
    ``fixed_other_angle`` pins the orthogonal axis; gains are dBi.
    """

    cut_axis: str  # "azimuth" | "elevation"
    fixed_other_angle: float
    angles_deg: np.ndarray
    gain_dbi: np.ndarray


@dataclass(frozen=True)
class PatternMetrics:
    """Peak gain/location, 3 dB beamwidth, and sidelobe level of one cut.

    ``sidelobe_level_db`` is relative to the peak (negative) and None when
    the cut contains no lobe outside the main beam.
    """

    peak_gain_dbi: float
    peak_angle_deg: float
    hpbw_deg: float
    sidelobe_level_db: float | None


def steering_vector(config: ArrayConfig, angles: DirectionAngles) -> np.ndarray:
    """Per-element plane-wave phase response, unit magnitude.

    entry_n = exp(+j k (x_n u + y_n v)) in element_positions order.
    """
    pos = element_positions(config)
    dc = direction_cosines(angles)
    phase = config.wavenumber() * (pos[:, 0] * dc.u + pos[:, 1] * dc.v)
    return np.exp(1j * phase)


def steering_weights(config: ArrayConfig, target: DirectionAngles) -> np.ndarray:
    """Phase-only weights that align the array response at ``target``.

    Elementwise conjugate of the steering vector; requires a target in the
    visible half-space.
    """
    if not target.is_visible():
        raise ConfigError(f"steering target must be in the visible half-space, got {target}")
    return np.conj(steering_vector(config, target))


def element_amplitude(model: ElementModel, angles: DirectionAngles) -> float:
    "Element field amplitude toward ``angles`` (0 behind the array plane)."
    w = direction_cosines(angles).w
    if w < 0.0:
        return 0.0
    if model.kind == "isotropic":
        return 1.0
    return w**model.exponent


def array_response(config: ArrayConfig, weights: np.ndarray, model: ElementModel,
                   angles: DirectionAngles) -> complex:
    "Complex far-field response: element amplitude times the weighted array factor."
    w = np.asarray(weights)
    if w.shape != (config.num_elements,):
        raise ValueError(
            f"weights must have shape ({config.num_elements},), got {w.shape}"
        )
    return element_amplitude(model, angles) * complex(np.dot(w, steering_vector(config, angles)))


def _hemisphere_grid(step_deg: float):
    "Midpoint az/el grid covering the visible hemisphere, radians."
    if not (step_deg > 0):
        raise ValueError(f"quadrature step must be > 0, got {step_deg}")
    n = max(1, int(round(180.0 / step_deg)))
    step = math.pi / n
    cells = -math.pi / 2 + (np.arange(n) + 0.5) * step
    return cells, cells.copy(), step


def radiated_power(config: ArrayConfig, weights: np.ndarray, model: ElementModel,
                   quadrature_step_deg: float = DEFAULT_QUADRATURE_STEP_DEG) -> float:
    """Total radiated power: quadrature of |response|^2 over the hemisphere.

    Midpoint rule on a uniform (az, el) grid with the cos(el) Jacobian;
    row-major summation order, so the result is reproducible bit-for-bit.
    """
    w = np.asarray(weights, dtype=np.complex128)
    if w.shape != (config.num_elements,):
        raise ValueError(f"weights must have shape ({config.num_elements},), got {w.shape}")
    az, el, step = _hemisphere_grid(quadrature_step_deg)
    pos = element_positions(config)
    power = _kernels.response_power_grid(
        np.ascontiguousarray(pos[:, 0]), np.ascontiguousarray(pos[:, 1]), w,
        config.wavenumber(), az, el, model._kind_code, model.exponent,
    )
    return float(np.sum(power * np.cos(el)[None, :]) * step * step)


def directivity(config: ArrayConfig, weights: np.ndarray, model: ElementModel,
                steer: DirectionAngles,
                quadrature_step_deg: float = DEFAULT_QUADRATURE_STEP_DEG) -> float:
    """Directivity toward ``steer`` in dBi.

    4 pi |response(steer)|^2 over the radiated-power quadrature. Invariant
    under any rescaling of the weight vector.
    """
    total = radiated_power(config, weights, model, quadrature_step_deg)
    if total <= 0.0:
        raise NumericalError("zero total radiated power (degenerate weights)")
    peak = abs(array_response(config, weights, model, steer)) ** 2
    with np.errstate(divide="ignore"):
        return float(10.0 * np.log10(4.0 * math.pi * peak / total))


def pattern_cut(config: ArrayConfig, weights: np.ndarray, model: ElementModel,
                cut_axis: str, fixed_other_angle: float, span: float, step: float,
                quadrature_step_deg: float = DEFAULT_QUADRATURE_STEP_DEG) -> PatternCut:
    """Sample a gain cut (dBi) along one angle axis, centered on 0 degrees.

    The cut spans [-span/2, +span/2] with the given step; the dBi
    normalization is computed once from the same quadrature as
    ``directivity``, so cut values at the steer angle match it.
    """
    if cut_axis not in ("azimuth", "elevation"):
        raise ConfigError(f"cut_axis must be 'azimuth' or 'elevation', got {cut_axis!r}")
    if not (step > 0):
        raise ValueError(f"cut step must be > 0, got {step}")
    n = int(round(span / step)) + 1
    if n < 1 or span < 0:
        raise ValueError(f"cut span {span} and step {step} produce an empty grid")
    angles = -span / 2.0 + np.arange(n) * step

    w = np.asarray(weights, dtype=np.complex128)
    total = radiated_power(config, w, model, quadrature_step_deg)
    if total <= 0.0:
        raise NumericalError("zero total radiated power (degenerate weights)")

    if cut_axis == "azimuth":
        az_rad = np.radians(angles)
        el_rad = np.array([math.radians(fixed_other_angle)])
    else:
        az_rad = np.array([math.radians(fixed_other_angle)])
        el_rad = np.radians(angles)
    pos = element_positions(config)
    power = _kernels.response_power_grid(
        np.ascontiguousarray(pos[:, 0]), np.ascontiguousarray(pos[:, 1]), w,
        config.wavenumber(), az_rad, el_rad, model._kind_code, model.exponent,
    )
    power = power[:, 0] if cut_axis == "azimuth" else power[0, :]
    with np.errstate(divide="ignore"):
        gain = 10.0 * np.log10(4.0 * math.pi * power / total)
    return PatternCut(cut_axis=cut_axis, fixed_other_angle=float(fixed_other_angle),
                      angles_deg=angles, gain_dbi=gain)


def _first_minimum(gain, start, direction):
    "Index of the first local minimum walking from ``start`` in +-1 direction."
    i = start
    while 0 <= i + direction < len(gain) and gain[i + direction] <= gain[i]:
        i += direction
    return i


def _crossing(angles, gain, peak_idx, target, direction):
    "Linear-interpolated angle where gain falls through ``target`` from the peak."
    i = peak_idx
    while 0 <= i + direction < len(gain):
        j = i + direction
        if gain[j] < target:
            frac = (gain[i] - target) / (gain[i] - gain[j])
            return float(angles[i] + frac * (angles[j] - angles[i]))
        i = j
    raise IncompleteCutError(
        f"no -3 dB crossing {'above' if direction > 0 else 'below'} the peak inside the cut span"
    )


def pattern_metrics(cut: PatternCut) -> PatternMetrics:
    """Extract peak gain, half-power beamwidth, and sidelobe level from a cut.

    The peak is the maximum sample (ties: smallest angle). HPBW interpolates
    the -3 dB crossings linearly in dB. The main lobe is delimited by the
    first local minimum on each side of the peak; the sidelobe level is the
    largest gain outside that region, relative to the peak.
    """
    gain = np.asarray(cut.gain_dbi, dtype=float)
    angles = np.asarray(cut.angles_deg, dtype=float)
    if gain.size < 3:
        raise IncompleteCutError("cut too short to carry a main lobe")
    peak_idx = int(np.argmax(gain))
    peak_gain = float(gain[peak_idx])
    peak_angle = float(angles[peak_idx])

    target = peak_gain - 3.0
    left = _crossing(angles, gain, peak_idx, target, -1)
    right = _crossing(angles, gain, peak_idx, target, +1)
    hpbw = right - left

    lo = _first_minimum(gain, peak_idx, -1)
    hi = _first_minimum(gain, peak_idx, +1)
    outside = np.concatenate([gain[:lo], gain[hi + 1:]])
    outside = outside[np.isfinite(outside)]
    sidelobe = float(np.max(outside) - peak_gain) if outside.size else None
    return PatternMetrics(peak_gain_dbi=peak_gain, peak_angle_deg=peak_angle,
                          hpbw_deg=hpbw, sidelobe_level_db=sidelobe)


def save_pattern_cut(cut: PatternCut, path) -> None:
    "Write a cut as CSV: header `angle_deg,gain_dbi`, 9 significant digits."
    lines = ["angle_deg,gain_dbi"]
    for angle, gain in zip(cut.angles_deg, cut.gain_dbi):
        lines.append(f"{angle:.9g},{gain:.9g}")
    atomic_write_text(path, "\n".join(lines) + "\n")
