"""Subspace direction finding: covariance, eigenstructure, pseudo-spectrum, peaks.

The chain is covariance -> eigendecompose -> noise_subspace -> music_spectrum
-> find_peaks, composed by estimate_doa. Spectra live on uniform az/el grids
in degrees.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from arraytrack import _kernels
from arraytrack.array_model import ArrayConfig, DirectionAngles, element_positions
from arraytrack.errors import AmbiguousSpectrumError, ConfigError
from arraytrack._ioutil import atomic_write_text

HERMITIAN_TOL = 1e-10
SPECTRUM_FLOOR_PER_ELEMENT = 1e-12


@dataclass(frozen=True)
class EigenDecomposition:
    "Eigenvalues sorted descending; eigenvector column k pairs with eigenvalue k."

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class MusicSpectrum:
    """Pseudo-spectrum sampled on a uniform angle grid.

    ``values[i, j]`` belongs to (az_grid[i], el_grid[j]); all values are
    finite and positive because the denominator is floored.
    """

    az_grid: np.ndarray
    el_grid: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class DoaEstimate:
    """Peak angles and values from one spectrum search.

    ``degraded`` is set when the grid held fewer strict local maxima than
    requested and the remainder was filled from the largest leftover cells.
    """

    angles: list[DirectionAngles]
    peak_values: np.ndarray
    spectrum: MusicSpectrum
    degraded: bool = False


def covariance(m: np.ndarray) -> np.ndarray:
    "Sample covariance R = X X^H / T of a snapshot matrix."
    x = np.asarray(m, dtype=np.complex128)
    if x.ndim != 2 or x.shape[1] < 1:
        raise ValueError(f"snapshot matrix must be 2-D with at least one column, got shape {x.shape}")
    return (x @ x.conj().T) / x.shape[1]


def eigendecompose(r: np.ndarray) -> EigenDecomposition:
    """Self-adjoint eigendecomposition of a covariance matrix, descending order.

    Rejects matrices that are not Hermitian within 1e-10 elementwise; the
    solver itself assumes self-adjointness, which keeps eigenvalues real.
    """
    r = np.asarray(r, dtype=np.complex128)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise ValueError(f"covariance must be square, got shape {r.shape}")
    asym = np.max(np.abs(r - r.conj().T))
    if asym > HERMITIAN_TOL:
        raise ValueError(f"matrix is not Hermitian: max |R - R^H| = {asym:.3e} exceeds {HERMITIAN_TOL}")
    vals, vecs = np.linalg.eigh(r)
    order = np.arange(vals.size)[::-1]  # eigh returns ascending; flip, keep pairing
    return EigenDecomposition(eigenvalues=vals[order], eigenvectors=vecs[:, order])


def noise_subspace(e: EigenDecomposition, num_sources: int) -> np.ndarray:
    "Eigenvector columns of the N - num_sources smallest eigenvalues."
    n = e.eigenvalues.size
    if not (1 <= num_sources < n):
        raise ConfigError(f"num_sources must satisfy 1 <= K < {n}, got {num_sources}")
    return e.eigenvectors[:, num_sources:]


def _angle_grid(lo: float, hi: float, step: float) -> np.ndarray:
    if not (step > 0):
        raise ConfigError(f"grid step must be > 0, got {step}")
    if hi < lo:
        raise ConfigError(f"empty angle range [{lo}, {hi}]")
    n = int(round((hi - lo) / step)) + 1
    return lo + np.arange(n) * step


def music_spectrum(config: ArrayConfig, e_n: np.ndarray,
                   az_range: tuple[float, float] = (-90.0, 90.0),
                   el_range: tuple[float, float] = (-90.0, 90.0),
                   step: float = 1.0) -> MusicSpectrum:
    """Scan 1 / (a^H E_n E_n^H a) over a uniform az/el grid.

    The denominator is floored at 1e-12 per element, so a zero-column
    subspace yields a flat (uniform) spectrum rather than a division error.
    """
    e_n = np.asarray(e_n, dtype=np.complex128)
    n = config.num_elements
    if e_n.ndim != 2 or e_n.shape[0] != n:
        raise ValueError(f"noise subspace must have {n} rows, got shape {e_n.shape}")
    az = _angle_grid(az_range[0], az_range[1], step)
    el = _angle_grid(el_range[0], el_range[1], step)

    projector = e_n @ e_n.conj().T
    pos = element_positions(config)
    denom = _kernels.music_inverse_power_grid(
        np.ascontiguousarray(pos[:, 0]), np.ascontiguousarray(pos[:, 1]),
        np.ascontiguousarray(projector), config.wavenumber(),
        np.radians(az), np.radians(el),
    )
    floor = SPECTRUM_FLOOR_PER_ELEMENT * n
    values = 1.0 / np.maximum(denom, floor)
    return MusicSpectrum(az_grid=az, el_grid=el, values=values)


def _strict_local_maxima(values: np.ndarray) -> np.ndarray:
    "Boolean mask of cells strictly above all 8 neighbors (edges use fewer)."
    a, e = values.shape
    padded = np.full((a + 2, e + 2), -np.inf)
    padded[1:-1, 1:-1] = values
    mask = np.ones_like(values, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            mask &= values > padded[1 + di:a + 1 + di, 1 + dj:e + 1 + dj]
    return mask


def find_peaks(s: MusicSpectrum, num_sources: int) -> DoaEstimate:
    """Locate the ``num_sources`` largest strict local maxima of a spectrum.

    Candidates are ordered by value descending, ties broken by smaller
    elevation then smaller azimuth. If the grid holds fewer local maxima
    than requested, the remainder comes from the largest non-peak cells and
    the estimate is flagged degraded. A constant spectrum carries no
    direction information and raises AmbiguousSpectrumError.
    """
    if num_sources < 1:
        raise ConfigError(f"num_sources must be >= 1, got {num_sources}")
    v = s.values
    if np.max(v) == np.min(v):
        raise AmbiguousSpectrumError("spectrum is constant; no direction information")

    def ordered(indices):
        az = s.az_grid[indices[0]]
        el = s.el_grid[indices[1]]
        vals = v[indices]
        order = np.lexsort((az, el, -vals))
        return [(vals[k], az[k], el[k]) for k in order]

    peak_mask = _strict_local_maxima(v)
    chosen = ordered(np.nonzero(peak_mask))[:num_sources]
    degraded = len(chosen) < num_sources
    if degraded:
        fill = ordered(np.nonzero(~peak_mask))
        chosen += fill[:num_sources - len(chosen)]

    angles = [DirectionAngles(azimuth=float(az), elevation=float(el)) for _, az, el in chosen]
    peak_values = np.array([val for val, _, _ in chosen])
    return DoaEstimate(angles=angles, peak_values=peak_values, spectrum=s, degraded=degraded)


def _parabolic_offset(y_minus: float, y_center: float, y_plus: float) -> float:
    "Sub-cell apex offset of a parabola through three samples, in cell units."
    denom = y_minus - 2.0 * y_center + y_plus
    if denom >= 0.0:
        return 0.0
    offset = 0.5 * (y_minus - y_plus) / denom
    return float(np.clip(offset, -0.5, 0.5))


def refine_peak(s: MusicSpectrum, angles: DirectionAngles) -> DirectionAngles:
    """Quadratic sub-grid refinement of one on-grid peak.

    Fits a parabola to 10 log10 of the spectrum along each axis through the
    peak cell; the apex offset is clamped to half a cell. Axes where the
    peak sits on the grid edge are left unrefined.
    """
    i = int(np.argmin(np.abs(s.az_grid - angles.azimuth)))
    j = int(np.argmin(np.abs(s.el_grid - angles.elevation)))
    log_v = 10.0 * np.log10(s.values)
    az = angles.azimuth
    el = angles.elevation
    if 0 < i < s.az_grid.size - 1:
        step = s.az_grid[1] - s.az_grid[0]
        az = az + step * _parabolic_offset(log_v[i - 1, j], log_v[i, j], log_v[i + 1, j])
    if 0 < j < s.el_grid.size - 1:
        step = s.el_grid[1] - s.el_grid[0]
        el = el + step * _parabolic_offset(log_v[i, j - 1], log_v[i, j], log_v[i, j + 1])
    return DirectionAngles(azimuth=float(az), elevation=float(el))


def estimate_doa(config: ArrayConfig, m: np.ndarray, num_sources: int,
                 az_range: tuple[float, float] = (-90.0, 90.0),
                 el_range: tuple[float, float] = (-90.0, 90.0),
                 step: float = 1.0, refine: bool = False) -> DoaEstimate:
    "Full pipeline from snapshots to peak angles on the given search grid."
    r = covariance(m)
    e = eigendecompose(r)
    e_n = noise_subspace(e, num_sources)
    s = music_spectrum(config, e_n, az_range, el_range, step)
    est = find_peaks(s, num_sources)
    if refine:
        refined = [refine_peak(s, a) for a in est.angles]
        est = DoaEstimate(angles=refined, peak_values=est.peak_values,
                          spectrum=s, degraded=est.degraded)
    return est


def save_spectrum(s: MusicSpectrum, path) -> None:
    "Write a spectrum as CSV `az_deg,el_deg,value`, row-major (azimuth outer)."
    lines = ["az_deg,el_deg,value"]
    for i, az in enumerate(s.az_grid):
        for j, el in enumerate(s.el_grid):
            lines.append(f"{float(az)!r},{float(el)!r},{float(s.values[i, j])!r}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def save_estimate(est: DoaEstimate, path) -> None:
    "Write an estimate as JSON lines, one object per estimated source."
    lines = []
    for angles, value in zip(est.angles, est.peak_values):
        lines.append(json.dumps({
            "azimuth_deg": angles.azimuth,
            "elevation_deg": angles.elevation,
            "peak_value": float(value),
            "degraded_flag": est.degraded,
        }))
    atomic_write_text(path, "\n".join(lines) + "\n")
