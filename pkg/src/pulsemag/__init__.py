"""Phase-based video magnification of pulsatile motion.

Decomposes frames with a complex steerable pyramid, filters per-band phase
over time — ideal bandpass for linear magnification, Gaussian-derivative
kernels for acceleration and jerk — and resynthesizes with the phase
deviations amplified.  Includes a synthetic pulse-wave model for
validation and SSIM/PSNR scoring utilities.
"""

from .video import VideoClip
from .pyramid import (
    Decomposition,
    FilterBank,
    build_filter_bank,
    decompose,
    partition_energy,
    reconstruct,
)
from .temporal import (
    BandSpec,
    TemporalKernel,
    convolve_time,
    gaussian_sigma,
    ideal_bandpass_time,
    make_gaussian_derivative_kernel,
)
from .magnify import (
    MODES,
    MagnifierConfig,
    PhaseSeries,
    boundary_frames,
    extract_phase_series,
    filter_phase,
    magnify,
    unwrap_phase_temporal,
)
from .pulse import (
    PulseWave,
    SyntheticClip,
    derivative_series,
    magnify_1d,
    pulse_waveform,
    synth_clip,
)
from .metrics import (
    ClipMismatchError,
    MetricsReport,
    SpatioTemporalSlice,
    evaluate_clip,
    extract_sts,
    psnr,
    ssim,
)
from .io import read_clip, write_clip

__version__ = "0.1.0"

__all__ = [
    "VideoClip",
    "Decomposition",
    "FilterBank",
    "build_filter_bank",
    "decompose",
    "partition_energy",
    "reconstruct",
    "BandSpec",
    "TemporalKernel",
    "convolve_time",
    "gaussian_sigma",
    "ideal_bandpass_time",
    "make_gaussian_derivative_kernel",
    "MODES",
    "MagnifierConfig",
    "PhaseSeries",
    "boundary_frames",
    "extract_phase_series",
    "filter_phase",
    "magnify",
    "unwrap_phase_temporal",
    "PulseWave",
    "SyntheticClip",
    "derivative_series",
    "magnify_1d",
    "pulse_waveform",
    "synth_clip",
    "ClipMismatchError",
    "MetricsReport",
    "SpatioTemporalSlice",
    "evaluate_clip",
    "extract_sts",
    "psnr",
    "ssim",
    "read_clip",
    "write_clip",
    "__version__",
]
