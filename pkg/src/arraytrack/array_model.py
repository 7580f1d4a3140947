"""Array geometry, angle conventions, and direction-cosine math.

Conventions used everywhere in this package:

* The array lies in the x-y plane, centered on the origin, boresight along +z.
* Azimuth rotates about the vertical (v) axis, elevation is a latitude;
  both are degrees at every public boundary and radians internally.
* Element ordering is row-major over the lattice: y (rows) outer, x inner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from arraytrack.errors import ConfigError

SPEED_OF_LIGHT = 299_792_458.0
"Speed of light in m/s (exact)."


@dataclass(frozen=True)
class ArrayConfig:
    """Uniform rectangular array description.

    Parameters
    ----------
    carrier_frequency : float
        Carrier in Hz.
    num_x, num_y : int
        Element counts along x and y.
    spacing_x, spacing_y : float
        Lattice pitch in meters.
    scan_limit : float
        Half-width of the allowed steering envelope, degrees in (0, 90].
    metadata : mapping
        Free-form annotations (substrate, patch dimensions, ...); never used
        by any computation.
    """

    carrier_frequency: float
    num_x: int
    num_y: int
    spacing_x: float
    spacing_y: float
    scan_limit: float = 90.0
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not (self.carrier_frequency > 0):
            raise ConfigError(f"carrier_frequency must be > 0, got {self.carrier_frequency}")
        for name in ("num_x", "num_y"):
            n = getattr(self, name)
            if not (isinstance(n, (int, np.integer)) and n >= 1):
                raise ConfigError(f"{name} must be an integer >= 1, got {n!r}")
        for name in ("spacing_x", "spacing_y"):
            if not (getattr(self, name) > 0):
                raise ConfigError(f"{name} must be > 0, got {getattr(self, name)}")
        if not (0 < self.scan_limit <= 90):
            raise ConfigError(f"scan_limit must be in (0, 90], got {self.scan_limit}")

    @property
    def num_elements(self) -> int:
        return self.num_x * self.num_y

    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency

    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.wavelength()


@dataclass(frozen=True)
class DirectionAngles:
    """(azimuth, elevation) pair in degrees.

    Azimuth is wrapped into [-180, 180); elevation outside [-90, 90] is
    rejected. Non-finite inputs are rejected.
    """

    azimuth: float
    elevation: float

    def __post_init__(self):
        az = float(self.azimuth)
        el = float(self.elevation)
        if not (math.isfinite(az) and math.isfinite(el)):
            raise ConfigError(f"angles must be finite, got ({self.azimuth}, {self.elevation})")
        if abs(el) > 90.0:
            raise ConfigError(f"elevation must be within [-90, 90], got {el}")
        az = math.remainder(az, 360.0)
        if az >= 180.0:  # remainder returns (-180, 180]; fold the single endpoint
            az -= 360.0
        object.__setattr__(self, "azimuth", az)
        object.__setattr__(self, "elevation", el)

    def is_visible(self) -> bool:
        "True when the direction lies in the half-space in front of the array."
        return abs(self.azimuth) <= 90.0


@dataclass(frozen=True)
class DirectionCosines:
    """Unit direction vector (u, v, w); w is the boresight component."""

    u: float
    v: float
    w: float

    def __post_init__(self):
        norm2 = self.u * self.u + self.v * self.v + self.w * self.w
        if abs(norm2 - 1.0) > 1e-12:
            raise ConfigError(f"direction cosines must be unit norm, |.|^2 = {norm2!r}")


def direction_cosines(angles: DirectionAngles) -> DirectionCosines:
    """Map (azimuth, elevation) to the unit direction (u, v, w).

    u = cos(el) sin(az), v = sin(el), w = cos(el) cos(az); boresight
    (0 deg, 0 deg) maps to (0, 0, 1).
    """
    az = math.radians(angles.azimuth)
    el = math.radians(angles.elevation)
    return DirectionCosines(
        u=math.cos(el) * math.sin(az),
        v=math.sin(el),
        w=math.cos(el) * math.cos(az),
    )


def element_positions(config: ArrayConfig) -> np.ndarray:
    """(x, y) element coordinates in meters, shape (num_elements, 2).

    The lattice is centered on the origin and ordered row-major: y outer,
    x inner. Every other module relies on this ordering.
    """
    xs = (np.arange(config.num_x) - (config.num_x - 1) / 2.0) * config.spacing_x
    ys = (np.arange(config.num_y) - (config.num_y - 1) / 2.0) * config.spacing_y
    gx, gy = np.meshgrid(xs, ys)
    return np.column_stack([gx.ravel(), gy.ravel()])


def grating_lobe_free_limit(config: ArrayConfig) -> float:
    """Largest steer angle (degrees) with no grating lobe in visible space.

    asin(lambda/d_max - 1), clamped to 90 when the argument reaches 1; at
    0.4 lambda spacing the argument is 1.5, so the limit is unrestricted.
    """
    d_max = max(config.spacing_x, config.spacing_y)
    arg = config.wavelength() / d_max - 1.0
    if arg >= 1.0:
        return 90.0
    return math.degrees(math.asin(max(arg, -1.0)))


def angular_separation(a: DirectionAngles, b: DirectionAngles) -> float:
    "Great-circle angle between two directions, degrees."
    ca = direction_cosines(a)
    cb = direction_cosines(b)
    dot = ca.u * cb.u + ca.v * cb.v + ca.w * cb.w
    return math.degrees(math.acos(min(1.0, max(-1.0, dot))))
