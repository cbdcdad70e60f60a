"""Temporal filters applied along a clip's time axis.

Two families: finite Gaussian-derivative kernels (orders 2 and 3) that act
as smoothed differentiators for acceleration / jerk magnification, and an
ideal Fourier bandpass used for plain linear magnification.

Kernel taps are corrected after sampling so the discrete moment conditions
hold exactly: an order-n kernel annihilates polynomials of degree < n and
maps t^n to the constant n! under convolution, matching the continuous
n-th derivative.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

import numpy as np
from scipy.ndimage import convolve1d

__all__ = [
    "TemporalKernel",
    "BandSpec",
    "gaussian_sigma",
    "make_gaussian_derivative_kernel",
    "convolve_time",
    "ideal_bandpass_time",
]


@dataclass(frozen=True)
class TemporalKernel:
    """Symmetric FIR differentiator; ``taps[i]`` weights offset ``i - radius``."""

    taps: np.ndarray
    sigma: float
    order: int
    radius: int

    @property
    def size(self) -> int:
        return 2 * self.radius + 1


@dataclass(frozen=True)
class BandSpec:
    """Temporal passband ``center_hz ± half_width_hz`` at a given frame rate."""

    center_hz: float
    half_width_hz: float
    fps: float

    def __post_init__(self):
        if not self.fps > 0:
            raise ValueError(f"fps must be positive, got {self.fps}")
        if not self.half_width_hz >= 0:
            raise ValueError(f"half width must be >= 0, got {self.half_width_hz}")
        if not self.center_hz - self.half_width_hz > 0:
            raise ValueError(
                f"passband must exclude DC: {self.center_hz} - "
                f"{self.half_width_hz} <= 0"
            )
        if not self.center_hz + self.half_width_hz < self.fps / 2.0:
            raise ValueError(
                f"passband must stay below Nyquist ({self.fps / 2.0} Hz): "
                f"{self.center_hz} + {self.half_width_hz}"
            )


def gaussian_sigma(fps: float, target_hz: float) -> float:
    """Kernel width (in frames) tuned to a target temporal frequency.

    sigma = fps / (4 * target_hz * sqrt(2)); e.g. 30 fps at 1 Hz gives
    ~5.3033 frames.
    """
    if not fps > 0:
        raise ValueError(f"fps must be positive, got {fps}")
    if not target_hz > 0:
        raise ValueError(f"target frequency must be positive, got {target_hz}")
    return fps / (4.0 * target_hz * np.sqrt(2.0))


def _moment_correct(taps, t, order, radius):
    """Nudge sampled taps so discrete moments match the continuous kernel.

    Solves, in the symmetry-preserving polynomial subspace, for the
    minimal-norm correction enforcing sum(t^j k) = 0 for the lower moment
    of matching parity and sum(t^order k) = (-1)^order * order!.  Working
    in u = t/radius keeps the normal equations well conditioned.  Using
    only same-parity powers keeps even kernels exactly even and odd
    kernels exactly odd.
    """
    u = t / radius
    if order == 2:
        powers = (0, 2)
        targets = np.array([0.0, 2.0 / radius**2])
    else:
        powers = (1, 3)
        targets = np.array([0.0, -6.0 / radius**3])
    basis = np.stack([u**p for p in powers])
    gram = basis @ basis.T
    residual = targets - basis @ taps
    coeffs = np.linalg.solve(gram, residual)
    return taps + coeffs @ basis


def make_gaussian_derivative_kernel(
    sigma: float, order: int, radius: int | None = None
) -> TemporalKernel:
    """Sampled n-th derivative of a unit-area Gaussian, moment-corrected.

    ``radius`` defaults to ceil(4 * sigma); larger values are allowed,
    smaller ones rejected because the truncated tails would shift the
    moments too far for the correction to stay a small perturbation.
    """
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if order not in (2, 3):
        raise ValueError(f"order must be 2 or 3, got {order}")
    min_radius = ceil(4.0 * sigma)
    if radius is None:
        radius = min_radius
    elif radius < min_radius:
        raise ValueError(
            f"radius {radius} too small: need >= ceil(4*sigma) = {min_radius}"
        )

    t = np.arange(-radius, radius + 1, dtype=np.float64)
    gauss = np.exp(-(t**2) / (2.0 * sigma**2)) / (sigma * np.sqrt(2.0 * np.pi))
    if order == 2:
        taps = (t**2 - sigma**2) / sigma**4 * gauss
    else:
        taps = (3.0 * t * sigma**2 - t**3) / sigma**6 * gauss
    taps = _moment_correct(taps, t, order, radius)
    return TemporalKernel(taps=taps, sigma=float(sigma), order=order, radius=radius)


def convolve_time(series: np.ndarray, kernel: TemporalKernel, axis: int = 0):
    """Convolve along ``axis`` with edge replication at the boundaries.

    out[t] = sum_tau series[t - tau] * taps[tau + radius]; the output has
    the input's length.  An order-n kernel therefore sends t^n to n!
    in the interior, e.g. t^3 -> 6 for order 3.
    """
    arr = np.asarray(series, dtype=np.float64)
    if arr.shape[axis] < kernel.size:
        raise ValueError(
            f"series length {arr.shape[axis]} shorter than kernel ({kernel.size})"
        )
    return convolve1d(arr, kernel.taps, axis=axis, mode="nearest")


def ideal_bandpass_time(series: np.ndarray, band: BandSpec, axis: int = 0):
    """Zero every Fourier bin outside ``band`` along ``axis``.

    DC always lies outside a valid band, so the output is zero-mean.  Bins
    exactly on the band edges are kept.
    """
    arr = np.asarray(series, dtype=np.float64)
    n = arr.shape[axis]
    if n < 2:
        raise ValueError("need at least two samples to bandpass")
    freqs = np.fft.rfftfreq(n, d=1.0 / band.fps)
    edge_tol = 1e-9 * band.fps
    keep = (freqs >= band.center_hz - band.half_width_hz - edge_tol) & (
        freqs <= band.center_hz + band.half_width_hz + edge_tol
    )
    shape = [1] * arr.ndim
    shape[axis] = freqs.size
    spectrum = np.fft.rfft(arr, axis=axis) * keep.reshape(shape)
    return np.fft.irfft(spectrum, n=n, axis=axis)
