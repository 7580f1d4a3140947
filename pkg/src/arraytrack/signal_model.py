"""Synthetic narrowband snapshot generation and snapshot-file persistence.

A snapshot matrix is complex, one row per element (element_positions order),
one column per sample instant. The model is phase-shift-only at the carrier,
with independent circular complex Gaussian symbols and noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from arraytrack.array_model import ArrayConfig, DirectionAngles
from arraytrack.beamforming import steering_vector
from arraytrack.errors import ConfigError, FileFormatError
from arraytrack._ioutil import atomic_write_text


@dataclass(frozen=True)
class SourceSpec:
    "One narrowband source: arrival angles and linear power."

    angles: DirectionAngles
    power: float = 1.0

    def __post_init__(self):
        if not (self.power > 0):
            raise ConfigError(f"source power must be > 0, got {self.power}")
        if not self.angles.is_visible():
            raise ConfigError(f"source angles must be in the visible half-space, got {self.angles}")


@dataclass(frozen=True)
class NoiseSpec:
    """Per-element noise level and the seed that fixes all randomness.

    ``snr_db`` is total source power over per-element noise power;
    ``math.inf`` disables noise entirely.
    """

    snr_db: float
    seed: int = 0

    def __post_init__(self):
        if math.isnan(self.snr_db):
            raise ConfigError("snr_db must not be NaN")


def _complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    "Unit-variance circular complex Gaussian samples (E|z|^2 = 1)."
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def generate_snapshots(config: ArrayConfig, sources: list[SourceSpec], noise: NoiseSpec,
                       t: int, element_gains: np.ndarray | None = None) -> np.ndarray:
    """Simulate ``t`` snapshots of the given sources in white noise.

    Column x(t) = sum_i sqrt(power_i) s_i(t) a_i + n(t). Symbols for all
    sources are drawn before the noise block, so adding noise to a scenario
    never changes the signal part for a fixed seed. ``element_gains``
    optionally applies a per-element complex gain to the signal only
    (miscalibration experiments); noise is unaffected.
    """
    if t < 1:
        raise ConfigError(f"snapshot count must be >= 1, got {t}")
    if not sources:
        raise ConfigError("at least one source is required")
    n = config.num_elements
    if element_gains is not None:
        element_gains = np.asarray(element_gains, dtype=np.complex128)
        if element_gains.shape != (n,):
            raise ConfigError(f"element_gains must have shape ({n},), got {element_gains.shape}")

    rng = np.random.default_rng(noise.seed)
    data = np.zeros((n, t), dtype=np.complex128)
    total_power = 0.0
    for src in sources:
        symbols = _complex_normal(rng, t)
        a = steering_vector(config, src.angles)
        if element_gains is not None:
            a = a * element_gains
        data += math.sqrt(src.power) * np.outer(a, symbols)
        total_power += src.power

    if math.isfinite(noise.snr_db):
        sigma2 = total_power / 10.0 ** (noise.snr_db / 10.0)
        data += math.sqrt(sigma2) * _complex_normal(rng, (n, t))
    return data


def save_snapshots(m: np.ndarray, path) -> None:
    """Write a snapshot matrix as CSV.

    Header `n_elements,t`, then one `re,im` line per entry in column-major
    order (snapshot 0 all elements, then snapshot 1, ...). Floats use the
    shortest representation that round-trips exactly, so load(save(m)) == m.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"snapshot matrix must be 2-D and non-empty, got shape {m.shape}")
    n, t = m.shape
    lines = [f"{n},{t}"]
    for col in range(t):
        for row in range(n):
            z = m[row, col]
            lines.append(f"{float(z.real)!r},{float(z.imag)!r}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def load_snapshots(path) -> np.ndarray:
    "Read a snapshot matrix written by save_snapshots; errors name the bad line."
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise FileFormatError("empty snapshot file", line=1)
    header = lines[0].split(",")
    if len(header) != 2:
        raise FileFormatError("header must be 'n_elements,t'", line=1)
    try:
        n, t = int(header[0]), int(header[1])
    except ValueError:
        raise FileFormatError(f"non-integer header fields {lines[0]!r}", line=1) from None
    if n < 1 or t < 1:
        raise FileFormatError(f"dimensions must be positive, got {n}x{t}", line=1)
    expected = n * t
    body = lines[1:]
    if len(body) != expected:
        raise FileFormatError(
            f"expected {expected} data lines for a {n}x{t} matrix, found {len(body)}",
            line=len(lines),
        )
    data = np.empty((n, t), dtype=np.complex128)
    for i, raw in enumerate(body):
        parts = raw.split(",")
        if len(parts) != 2:
            raise FileFormatError(f"expected 're,im', got {raw!r}", line=i + 2)
        try:
            re, im = float(parts[0]), float(parts[1])
        except ValueError:
            raise FileFormatError(f"non-numeric value in {raw!r}", line=i + 2) from None
        data[i % n, i // n] = complex(re, im)
    return data
