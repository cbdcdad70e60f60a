"""Synthetic pulse waveforms and clips for validating the magnifier.

The waveform is one systolic Gaussian bump, a smaller dicrotic bump, and a
smoothly-rising exponential-decay baseline (an exponentially modified
Gaussian anchored at the systolic onset).  Everything is built from
``t mod period``, so the signal is exactly periodic and smooth — sharp
corners would inject broadband temporal energy that contaminates
derivative-based magnification.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .temporal import (
    BandSpec,
    convolve_time,
    gaussian_sigma,
    ideal_bandpass_time,
    make_gaussian_derivative_kernel,
)
from .video import VideoClip

__all__ = [
    "PulseWave",
    "SyntheticClip",
    "pulse_waveform",
    "derivative_series",
    "magnify_1d",
    "synth_clip",
]

MODES = ("linear", "acceleration", "jerk")

# Periodization ranges: Gaussian bumps need only adjacent periods; the
# baseline tail decays as exp(-m*period/tau) and 12 terms push the
# truncation error below 1e-15.
_BUMP_WRAP = (-1, 0, 1)
_BASELINE_TERMS = 13


@dataclass(frozen=True)
class PulseWave:
    """Pulse waveform parameters; times in seconds, amplitudes unitless.

    Fields left as ``None`` default to fractions of the period (centers at
    0.15 / 0.45, widths 0.05 / 0.04, baseline decay 0.3, onset smoothing
    0.03) and to fractions of ``systolic_amp`` (dicrotic 0.35, baseline
    0.3).
    """

    period: float = 1.0
    samples_per_period: int = 30
    systolic_amp: float = 1.0
    dicrotic_amp: float | None = None
    systolic_center: float | None = None
    dicrotic_center: float | None = None
    systolic_width: float | None = None
    dicrotic_width: float | None = None
    baseline_amp: float | None = None
    baseline_tau: float | None = None
    onset_width: float | None = None

    def __post_init__(self):
        if not self.period > 0:
            raise ValueError(f"period must be positive, got {self.period}")
        if self.samples_per_period < 4:
            raise ValueError("samples_per_period must be at least 4")
        if self.systolic_amp < 0:
            raise ValueError("systolic_amp must be >= 0")
        p = self.period
        defaults = {
            "dicrotic_amp": 0.35 * self.systolic_amp,
            "systolic_center": 0.15 * p,
            "dicrotic_center": 0.45 * p,
            "systolic_width": 0.05 * p,
            "dicrotic_width": 0.04 * p,
            "baseline_amp": 0.3 * self.systolic_amp,
            "baseline_tau": 0.3 * p,
            "onset_width": 0.03 * p,
        }
        for name, value in defaults.items():
            if getattr(self, name) is None:
                object.__setattr__(self, name, value)
        if self.systolic_amp == 0:
            if self.dicrotic_amp != 0 or self.baseline_amp != 0:
                raise ValueError(
                    "degenerate wave (systolic_amp 0) requires zero "
                    "dicrotic and baseline amplitudes"
                )
        elif not 0 <= self.dicrotic_amp < self.systolic_amp:
            raise ValueError(
                "dicrotic_amp must satisfy 0 <= dicrotic < systolic"
            )
        if self.baseline_amp < 0:
            raise ValueError("baseline_amp must be >= 0")
        for name in ("systolic_width", "dicrotic_width", "baseline_tau", "onset_width"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.systolic_center < self.dicrotic_center < p:
            raise ValueError(
                "need 0 < systolic_center < dicrotic_center < period"
            )


def _exgauss(x, tau, width):
    """Exponential decay exp(-x/tau) smoothly switched on around x = 0.

    The closed form of (Gaussian of sd ``width``) convolved with a decaying
    exponential step; rises from 0 to ~exp(-x/tau) over a few ``width``.
    """
    arg = (width * width / tau - x) / (width * np.sqrt(2.0))
    return 0.5 * np.exp(width * width / (2.0 * tau * tau) - x / tau) * erfc(arg)


def pulse_waveform(model: PulseWave, t):
    """Waveform value at times ``t`` (scalar or array, seconds, >= 0)."""
    t_arr = np.asarray(t, dtype=np.float64)
    if np.any(t_arr < 0):
        raise ValueError("t must be >= 0")
    phase = np.mod(t_arr, model.period)
    out = np.zeros_like(phase)
    for m in _BUMP_WRAP:
        x = phase - model.systolic_center + m * model.period
        out += model.systolic_amp * np.exp(-(x * x) / (2.0 * model.systolic_width**2))
        x = phase - model.dicrotic_center + m * model.period
        out += model.dicrotic_amp * np.exp(-(x * x) / (2.0 * model.dicrotic_width**2))
    if model.baseline_amp > 0:
        for m in range(_BASELINE_TERMS):
            x = phase - model.systolic_center + m * model.period
            out += model.baseline_amp * _exgauss(x, model.baseline_tau, model.onset_width)
    if np.isscalar(t) or t_arr.ndim == 0:
        return float(out)
    return out


def _samples_per_period(model, fps):
    n = round(model.period * fps)
    if n < 4:
        raise ValueError(f"fps {fps} gives under 4 samples per period")
    return n


def derivative_series(model: PulseWave, order: int, fps: float):
    """Central-difference derivative of the waveform over one period.

    Returns ``round(period * fps)`` samples.  Stencil neighbors are taken
    from the exact periodic waveform, so there are no boundary artifacts.
    """
    if order not in (1, 2, 3):
        raise ValueError(f"order must be 1, 2, or 3, got {order}")
    if not fps > 0:
        raise ValueError(f"fps must be positive, got {fps}")
    n = _samples_per_period(model, fps)
    h = 1.0 / fps
    # One-period offset keeps every stencil argument non-negative.
    t = np.arange(n) / fps + model.period

    def w(shift):
        return pulse_waveform(model, t + shift)

    if order == 1:
        return (w(h) - w(-h)) / (2.0 * h)
    if order == 2:
        return (w(h) - 2.0 * w(0.0) + w(-h)) / (h * h)
    return (w(2 * h) - 2.0 * w(h) + 2.0 * w(-h) - w(-2 * h)) / (2.0 * h**3)


def magnify_1d(
    model: PulseWave,
    mode: str,
    alpha: float,
    fps: float,
    n_periods: int = 5,
):
    """Run the temporal half of the magnifier on the plain 1-D waveform.

    Samples ``n_periods`` periods, adds ``alpha`` times the temporally
    filtered signal, and returns the middle period (one array of
    ``round(period * fps)`` samples), which is free of boundary effects.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if n_periods < 3:
        raise ValueError("need at least 3 periods for a clean interior period")
    n = _samples_per_period(model, fps)
    total = n_periods * n
    t = np.arange(total) / fps
    signal = pulse_waveform(model, t)
    if mode == "linear":
        band = BandSpec(1.0 / model.period, 0.1 / model.period, fps)
        deviation = ideal_bandpass_time(signal, band)
    else:
        order = 2 if mode == "acceleration" else 3
        sigma = gaussian_sigma(fps, 1.0 / model.period)
        kernel = make_gaussian_derivative_kernel(sigma, order)
        if total < kernel.size:
            raise ValueError(
                f"{n_periods} periods at fps {fps} are shorter than the "
                f"temporal kernel ({kernel.size} taps)"
            )
        deviation = convolve_time(signal, kernel)
    out = signal + alpha * deviation
    start = (n_periods // 2) * n
    return out[start : start + n]


@dataclass(frozen=True)
class SyntheticClip:
    """A rendered clip plus its ground truth.

    ``displacement`` is the horizontal motif displacement per frame in
    pixels; ``mask`` flags every pixel the motif can touch (support plus
    the maximum displacement).
    """

    clip: VideoClip
    displacement: np.ndarray
    mask: np.ndarray
    model: PulseWave


def synth_clip(
    model: PulseWave,
    width: int = 128,
    height: int = 128,
    fps: float = 30.0,
    duration: float = 5.0,
    motif: str = "bump",
    motion_amp: float = 1.0,
    noise_sd: float = 0.0,
    seed: int = 0,
) -> SyntheticClip:
    """Render a motif translating horizontally along the pulse waveform.

    The waveform is normalized to [0, 1], so ``motion_amp`` is the peak
    displacement in pixels.  Sub-pixel positions are exact: the motif is
    an analytic function evaluated at shifted coordinates, not a resampled
    sprite.  Gaussian pixel noise (`noise_sd`) is added after rendering.
    """
    if motif not in ("bump", "edge"):
        raise ValueError(f"motif must be 'bump' or 'edge', got {motif!r}")
    if duration < 3.0 * model.period:
        raise ValueError("duration must cover at least 3 pulse periods")
    if not 0 <= motion_amp <= 2.0:
        raise ValueError("motion_amp must lie in [0, 2] px for phase linearity")
    if noise_sd < 0:
        raise ValueError("noise_sd must be >= 0")
    n_frames = round(duration * fps)
    t = np.arange(n_frames) / fps
    wave = pulse_waveform(model, t)
    dense = pulse_waveform(model, np.linspace(0.0, model.period, 4096, endpoint=False))
    lo, hi = dense.min(), dense.max()
    span = hi - lo if hi > lo else 1.0
    displacement = motion_amp * (wave - lo) / span

    y, x = np.mgrid[0:height, 0:width].astype(np.float64)
    cx, cy = (width - 1) / 2.0, (height - 1) / 2.0
    background = 0.2
    contrast = 0.6
    shifted = x[None] - cx - displacement[:, None, None]
    if motif == "bump":
        bump_sd = min(width, height) / 10.0
        frames = background + contrast * np.exp(
            -(shifted**2 + (y[None] - cy) ** 2) / (2.0 * bump_sd**2)
        )
        support = bump_sd * np.sqrt(2.0 * np.log(1000.0))  # where the bump falls to 1e-3
        reach = np.maximum(np.abs(x - cx) - displacement.max(), 0.0)
        mask = reach**2 + (y - cy) ** 2 <= support**2
    else:
        edge_sd = 2.0
        frames = background + contrast * 0.5 * (1.0 + np.tanh(shifted / edge_sd))
        support = edge_sd * np.arctanh(0.998)
        mask = np.abs(x - cx) <= support + displacement.max()

    if noise_sd > 0:
        rng = np.random.default_rng(seed)
        frames = frames + rng.normal(0.0, noise_sd, frames.shape)
    frames = np.clip(frames, 0.0, 1.0)
    return SyntheticClip(
        clip=VideoClip(frames, fps),
        displacement=displacement,
        mask=mask,
        model=model,
    )
