"""Phased-array beam steering, subspace direction finding, and beam tracking.

The package simulates a small rectangular array end to end: steered pattern
synthesis with gain/beamwidth/sidelobe metrics, snapshot generation, MUSIC
direction-of-arrival estimation, and a closed-loop tracker that keeps the
beam on a moving target inside the scan envelope.
"""

from arraytrack.array_model import (
    SPEED_OF_LIGHT,
    ArrayConfig,
    DirectionAngles,
    DirectionCosines,
    angular_separation,
    direction_cosines,
    element_positions,
    grating_lobe_free_limit,
)
from arraytrack.beamforming import (
    ElementModel,
    PatternCut,
    PatternMetrics,
    array_response,
    directivity,
    element_amplitude,
    pattern_cut,
    pattern_metrics,
    radiated_power,
    save_pattern_cut,
    steering_vector,
    steering_weights,
)
from arraytrack.doa_music import (
    DoaEstimate,
    EigenDecomposition,
    MusicSpectrum,
    covariance,
    eigendecompose,
    estimate_doa,
    find_peaks,
    music_spectrum,
    noise_subspace,
    refine_peak,
    save_estimate,
    save_spectrum,
)
from arraytrack.errors import (
    AmbiguousSpectrumError,
    ConfigError,
    FileFormatError,
    IncompleteCutError,
    NumericalError,
)
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
    TrackLog,
    TrackRow,
    WaypointTrajectory,
    clamp_to_scan_envelope,
    run_tracking,
    save_track_log,
    tracker_step,
)

__version__ = "0.1.0"

__all__ = [
    "SPEED_OF_LIGHT",
    "ArrayConfig",
    "DirectionAngles",
    "DirectionCosines",
    "angular_separation",
    "direction_cosines",
    "element_positions",
    "grating_lobe_free_limit",
    "ElementModel",
    "PatternCut",
    "PatternMetrics",
    "array_response",
    "directivity",
    "element_amplitude",
    "pattern_cut",
    "pattern_metrics",
    "radiated_power",
    "save_pattern_cut",
    "steering_vector",
    "steering_weights",
    "DoaEstimate",
    "EigenDecomposition",
    "MusicSpectrum",
    "covariance",
    "eigendecompose",
    "estimate_doa",
    "find_peaks",
    "music_spectrum",
    "noise_subspace",
    "refine_peak",
    "save_estimate",
    "save_spectrum",
    "AmbiguousSpectrumError",
    "ConfigError",
    "FileFormatError",
    "IncompleteCutError",
    "NumericalError",
    "NoiseSpec",
    "SourceSpec",
    "generate_snapshots",
    "load_snapshots",
    "save_snapshots",
    "ConstantRateTrajectory",
    "TrackerConfig",
    "TrackLog",
    "TrackRow",
    "WaypointTrajectory",
    "clamp_to_scan_envelope",
    "run_tracking",
    "save_track_log",
    "tracker_step",
    "__version__",
]
