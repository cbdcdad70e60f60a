"""Phase-based motion magnification at three temporal orders.

Each oriented pyramid band carries a local phase whose temporal evolution
encodes motion.  The pipeline unwraps that phase along time, applies a
temporal operator — an ideal bandpass (``linear``), or a smoothed second /
third derivative (``acceleration`` / ``jerk``) — and adds ``alpha`` times
the result back onto the phase before resynthesis.  Linear mode amplifies
everything in the passband, including steady drift that leaks into it;
the derivative modes respond only to changes of the corresponding order,
which isolates sudden pulsatile events from large slow motion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import gaussian_filter

from .pyramid import FilterBank, build_filter_bank
from .temporal import (
    BandSpec,
    TemporalKernel,
    convolve_time,
    gaussian_sigma,
    ideal_bandpass_time,
    make_gaussian_derivative_kernel,
)
from .video import VideoClip

__all__ = [
    "MODES",
    "MagnifierConfig",
    "PhaseSeries",
    "extract_phase_series",
    "unwrap_phase_temporal",
    "filter_phase",
    "magnify",
    "boundary_frames",
]

MODES = ("linear", "acceleration", "jerk")
_MODE_ORDER = {"acceleration": 2, "jerk": 3}


@dataclass(frozen=True)
class MagnifierConfig:
    """Magnification settings.

    ``band`` defaults to 1.0 +/- 0.1 Hz at the clip's frame rate.  For the
    derivative modes the band center sets the kernel width via
    :func:`gaussian_sigma`.  ``phase_smoothing`` is the sigma (pixels) of
    an optional amplitude-weighted spatial blur of the phase deviations;
    0 disables it.
    """

    mode: str = "jerk"
    alpha: float = 10.0
    band: BandSpec | None = None
    levels: int = 4
    orientations: int = 4
    octave_step: float = 0.5
    phase_smoothing: float = 0.0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not np.isfinite(self.alpha):
            raise ValueError(f"alpha must be finite, got {self.alpha}")
        if self.phase_smoothing < 0:
            raise ValueError("phase_smoothing must be >= 0")


@dataclass(frozen=True)
class PhaseSeries:
    """Per-band amplitude and phase stacks for a whole clip.

    Both dicts map ``(level, orientation)`` to ``(T, H, W)`` float arrays.
    Memory grows as levels x orientations x clip size; prefer
    :func:`magnify`, which streams band by band, for full-size clips.
    """

    phase: dict
    amplitude: dict
    fps: float
    levels: int
    orientations: int


def _unwrap_time(phase: np.ndarray) -> np.ndarray:
    """Cumulative unwrap along axis 0 with frame deltas mapped to (-pi, pi]."""
    delta = np.diff(phase, axis=0)
    delta = np.pi - np.mod(np.pi - delta, 2.0 * np.pi)
    out = np.empty_like(phase)
    out[0] = phase[0]
    np.cumsum(delta, axis=0, out=out[1:])
    out[1:] += phase[0]
    return out


def unwrap_phase_temporal(series):
    """Temporally unwrap wrapped phases.

    Accepts either a :class:`PhaseSeries` (returns a new one) or a plain
    array whose axis 0 is time.  Keeps the first sample and accumulates
    frame-to-frame deltas remapped into (-pi, pi], so a wrap like
    [3.1, -3.1] continues upward to [3.1, ~3.183] instead of jumping.
    """
    if isinstance(series, PhaseSeries):
        return PhaseSeries(
            phase={key: _unwrap_time(arr) for key, arr in series.phase.items()},
            amplitude=series.amplitude,
            fps=series.fps,
            levels=series.levels,
            orientations=series.orientations,
        )
    arr = np.asarray(series, dtype=np.float64)
    if arr.shape[0] < 1:
        raise ValueError("need at least one sample")
    if arr.ndim == 1:
        return _unwrap_time(arr[:, None])[:, 0]
    return _unwrap_time(arr)


def extract_phase_series(clip: VideoClip, bank: FilterBank) -> PhaseSeries:
    """Decompose every frame and return unwrapped phase plus amplitude."""
    luma = clip.luma()
    if luma.shape[1:] != (bank.height, bank.width):
        raise ValueError(
            f"clip geometry {luma.shape[1:]} does not match filter bank "
            f"({bank.height}, {bank.width})"
        )
    spectra = np.fft.fft2(luma, axes=(-2, -1))
    phase = {}
    amplitude = {}
    for lev in range(bank.levels):
        for k in range(bank.orientations):
            coeff = np.fft.ifft2(spectra * bank.band_masks[lev, k], axes=(-2, -1))
            amplitude[(lev, k)] = np.abs(coeff)
            phase[(lev, k)] = _unwrap_time(np.angle(coeff))
    return PhaseSeries(
        phase=phase,
        amplitude=amplitude,
        fps=clip.fps,
        levels=bank.levels,
        orientations=bank.orientations,
    )


def _resolve_band(config: MagnifierConfig, fps: float) -> BandSpec:
    if config.band is None:
        return BandSpec(1.0, 0.1, fps)
    if abs(config.band.fps - fps) > 1e-9:
        raise ValueError(
            f"band fps {config.band.fps} does not match clip fps {fps}"
        )
    return config.band


def _temporal_kernel(config: MagnifierConfig, band: BandSpec) -> TemporalKernel:
    sigma = gaussian_sigma(band.fps, band.center_hz)
    return make_gaussian_derivative_kernel(sigma, _MODE_ORDER[config.mode])


def boundary_frames(config: MagnifierConfig, fps: float) -> int:
    """Frames at each end affected by the temporal kernel (0 for linear)."""
    if config.mode == "linear":
        return 0
    return _temporal_kernel(config, _resolve_band(config, fps)).radius


def _deviation(phase, config, band, kernel):
    """Temporal operator producing phase deviations to amplify."""
    if config.mode == "linear":
        return ideal_bandpass_time(phase, band, axis=0)
    return convolve_time(phase, kernel, axis=0)


def _amplitude_weighted_blur(deviation, amplitude, sigma):
    """Spatially pool deviations where the band has signal support.

    Low-amplitude pixels carry meaningless phase; weighting by amplitude
    lets confident neighbors dominate them.
    """
    num = gaussian_filter(deviation * amplitude, sigma, axes=(1, 2), mode="nearest")
    den = gaussian_filter(amplitude, sigma, axes=(1, 2), mode="nearest")
    return num / (den + 1e-12)


def filter_phase(series: PhaseSeries, config: MagnifierConfig) -> PhaseSeries:
    """Apply the mode's temporal operator to every band's phase.

    The returned series holds phase deviations (zero for static content),
    with amplitudes carried through unchanged.
    """
    band = _resolve_band(config, series.fps)
    kernel = None
    if config.mode != "linear":
        kernel = _temporal_kernel(config, band)
        n = next(iter(series.phase.values())).shape[0]
        if n < kernel.size:
            raise ValueError(
                f"series length {n} shorter than temporal kernel ({kernel.size})"
            )
    filtered = {}
    for key, phase in series.phase.items():
        dev = _deviation(phase, config, band, kernel)
        if config.phase_smoothing > 0:
            dev = _amplitude_weighted_blur(
                dev, series.amplitude[key], config.phase_smoothing
            )
        filtered[key] = dev
    return PhaseSeries(
        phase=filtered,
        amplitude=series.amplitude,
        fps=series.fps,
        levels=series.levels,
        orientations=series.orientations,
    )


def magnify(clip: VideoClip, config: MagnifierConfig) -> VideoClip:
    """Magnify per-band phase deviations and resynthesize the clip.

    Streams one band at a time to bound memory.  Residuals and band
    amplitudes pass through untouched; each oriented coefficient is
    rotated by ``alpha`` times its temporal deviation.  Output intensities
    are clipped to [0, 1] only after full resynthesis.  Color clips are
    magnified on luminance with chroma passed through.
    """
    luma = clip.luma()
    n_frames = luma.shape[0]
    bank = build_filter_bank(
        clip.width,
        clip.height,
        levels=config.levels,
        orientations=config.orientations,
        octave_step=config.octave_step,
    )
    band = _resolve_band(config, clip.fps)
    kernel = None
    if config.mode != "linear":
        kernel = _temporal_kernel(config, band)
        if n_frames < kernel.size:
            raise ValueError(
                f"clip length {n_frames} shorter than temporal kernel "
                f"({kernel.size} taps); lengthen the clip or raise the band center"
            )

    spectra = np.fft.fft2(luma, axes=(-2, -1))
    recon = spectra * (bank.hi_mask**2 + bank.lo_mask**2)
    for lev in range(bank.levels):
        for k in range(bank.orientations):
            mask = bank.band_masks[lev, k]
            coeff = np.fft.ifft2(spectra * mask, axes=(-2, -1))
            phase = _unwrap_time(np.angle(coeff))
            dev = _deviation(phase, config, band, kernel)
            if config.phase_smoothing > 0:
                dev = _amplitude_weighted_blur(
                    dev, np.abs(coeff), config.phase_smoothing
                )
            coeff *= np.exp(1j * (config.alpha * dev))
            recon += 2.0 * np.fft.fft2(coeff, axes=(-2, -1)) * mask
    out = np.fft.ifft2(recon, axes=(-2, -1)).real
    return clip.with_luma(out)
