"""Similarity metrics and spatiotemporal slices for magnified clips.

PSNR and SSIM follow their standard definitions on [0, 1] images: PSNR is
10*log10(1/MSE), SSIM uses an 11x11 Gaussian window (sigma 1.5), K1=0.01,
K2=0.03, L=1, averaged over the interior where the window fits entirely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import correlate1d, map_coordinates

from .video import VideoClip

__all__ = [
    "ClipMismatchError",
    "MetricsReport",
    "SpatioTemporalSlice",
    "psnr",
    "ssim",
    "evaluate_clip",
    "extract_sts",
]

_WINDOW_SIGMA = 1.5
_WINDOW_RADIUS = 5  # 11x11 window
_K1 = 0.01
_K2 = 0.03
_DATA_RANGE = 1.0


class ClipMismatchError(ValueError):
    """Raised when two clips cannot be compared frame by frame."""


def _check_pair(ref, test):
    ref = np.asarray(ref, dtype=np.float64)
    test = np.asarray(test, dtype=np.float64)
    if ref.ndim != 2 or test.ndim != 2:
        raise ValueError("metrics operate on single 2-D grayscale images")
    if ref.shape != test.shape:
        raise ValueError(f"image shapes differ: {ref.shape} vs {test.shape}")
    for name, img in (("ref", ref), ("test", test)):
        if not np.isfinite(img).all():
            raise ValueError(f"{name} image contains non-finite values")
        if img.min() < -1e-9 or img.max() > 1.0 + 1e-9:
            raise ValueError(f"{name} image intensities must lie in [0, 1]")
    return ref, test


def psnr(ref: np.ndarray, test: np.ndarray) -> float:
    """Peak signal-to-noise ratio in dB; +inf for identical images."""
    ref, test = _check_pair(ref, test)
    mse = np.mean((ref - test) ** 2)
    if mse == 0.0:
        return float("inf")
    return float(10.0 * np.log10(_DATA_RANGE**2 / mse))


def _gaussian_window():
    x = np.arange(-_WINDOW_RADIUS, _WINDOW_RADIUS + 1, dtype=np.float64)
    w = np.exp(-(x * x) / (2.0 * _WINDOW_SIGMA**2))
    return w / w.sum()


def _windowed_mean(img, window):
    out = correlate1d(img, window, axis=0, mode="constant")
    out = correlate1d(out, window, axis=1, mode="constant")
    r = _WINDOW_RADIUS
    return out[r:-r, r:-r]


def ssim(ref: np.ndarray, test: np.ndarray) -> float:
    """Mean structural similarity over the valid (fully windowed) interior.

    Identical inputs give exactly 1.0; value can go negative when local
    structure anti-correlates (e.g. an inverted image).
    """
    ref, test = _check_pair(ref, test)
    size = 2 * _WINDOW_RADIUS + 1
    if min(ref.shape) < size:
        raise ValueError(f"images must be at least {size}x{size} for SSIM")
    window = _gaussian_window()
    mu1 = _windowed_mean(ref, window)
    mu2 = _windowed_mean(test, window)
    var1 = _windowed_mean(ref * ref, window) - mu1 * mu1
    var2 = _windowed_mean(test * test, window) - mu2 * mu2
    cov = _windowed_mean(ref * test, window) - mu1 * mu2
    c1 = (_K1 * _DATA_RANGE) ** 2
    c2 = (_K2 * _DATA_RANGE) ** 2
    ssim_map = ((2.0 * mu1 * mu2 + c1) * (2.0 * cov + c2)) / (
        (mu1 * mu1 + mu2 * mu2 + c1) * (var1 + var2 + c2)
    )
    return float(np.mean(ssim_map))


@dataclass(frozen=True)
class MetricsReport:
    """Per-frame fidelity of a magnified clip against its source."""

    frame_indices: np.ndarray
    psnr_db: np.ndarray
    ssim_values: np.ndarray
    skip_boundary: int

    @property
    def psnr_mean(self) -> float:
        return float(np.mean(self.psnr_db))

    @property
    def ssim_mean(self) -> float:
        return float(np.mean(self.ssim_values))

    def to_text(self) -> str:
        """Tabular per-frame report followed by a summary block."""
        lines = ["frame  psnr_db    ssim"]
        for idx, p, s in zip(self.frame_indices, self.psnr_db, self.ssim_values):
            lines.append(f"{idx:>5d}  {p:>9.4f}  {s:>9.6f}")
        lines.append("")
        lines.append(f"frames         {len(self.frame_indices)}")
        lines.append(f"skip_boundary  {self.skip_boundary}")
        lines.append(f"psnr_mean      {self.psnr_mean:.4f}")
        lines.append(f"psnr_min       {float(np.min(self.psnr_db)):.4f}")
        lines.append(f"ssim_mean      {self.ssim_mean:.6f}")
        lines.append(f"ssim_min       {float(np.min(self.ssim_values)):.6f}")
        return "\n".join(lines) + "\n"


def evaluate_clip(
    source: VideoClip,
    magnified: VideoClip,
    sample_len: int = 100,
    skip_boundary: int = 0,
) -> MetricsReport:
    """Frame-by-frame PSNR / SSIM between a source clip and its magnified twin.

    Uses the first ``sample_len`` frames after dropping ``skip_boundary``
    frames at each end (temporal filtering corrupts both ends).  If fewer
    non-boundary frames exist, all of them are used.  Color clips are
    compared on luminance.
    """
    if source.frames.shape != magnified.frames.shape:
        raise ClipMismatchError(
            f"clip shapes differ: {source.frames.shape} vs {magnified.frames.shape}"
        )
    n = source.n_frames
    if not 1 <= sample_len <= n:
        raise ValueError(f"sample_len must be in [1, {n}], got {sample_len}")
    if skip_boundary < 0:
        raise ValueError("skip_boundary must be >= 0")
    indices = np.arange(skip_boundary, n - skip_boundary)
    if indices.size == 0:
        raise ValueError(
            f"skip_boundary {skip_boundary} leaves no frames of {n} to evaluate"
        )
    indices = indices[:sample_len]
    src = source.luma()
    mag = magnified.luma()
    psnr_db = np.array([psnr(src[i], mag[i]) for i in indices])
    ssim_values = np.array([ssim(src[i], mag[i]) for i in indices])
    return MetricsReport(
        frame_indices=indices,
        psnr_db=psnr_db,
        ssim_values=ssim_values,
        skip_boundary=skip_boundary,
    )


@dataclass(frozen=True)
class SpatioTemporalSlice:
    """Intensity along a line over time: row t of ``data`` is frame t."""

    data: np.ndarray
    line: object
    fps: float


def extract_sts(clip: VideoClip, line) -> SpatioTemporalSlice:
    """Sample a line in every frame, stacking the samples over time.

    ``line`` is ``("row", y)`` or ``("col", x)`` for exact gridline slices,
    or a sequence of (x, y) vertices: the polyline is resampled at roughly
    one-pixel arc-length spacing with bilinear interpolation.
    """
    luma = clip.luma()
    t, h, w = luma.shape
    if isinstance(line, tuple) and len(line) == 2 and isinstance(line[0], str):
        kind, index = line
        index = int(index)
        if kind == "row":
            if not 0 <= index < h:
                raise ValueError(f"row {index} outside image of height {h}")
            data = luma[:, index, :].copy()
        elif kind == "col":
            if not 0 <= index < w:
                raise ValueError(f"col {index} outside image of width {w}")
            data = luma[:, :, index].copy()
        else:
            raise ValueError(f"line kind must be 'row' or 'col', got {kind!r}")
        return SpatioTemporalSlice(data=data, line=(kind, index), fps=clip.fps)

    points = np.asarray(line, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != 2 or points.shape[0] < 2:
        raise ValueError("polyline must be a sequence of at least two (x, y) points")
    if (
        points[:, 0].min() < 0
        or points[:, 0].max() > w - 1
        or points[:, 1].min() < 0
        or points[:, 1].max() > h - 1
    ):
        raise ValueError("polyline leaves the image bounds")
    seg = np.diff(points, axis=0)
    seg_len = np.hypot(seg[:, 0], seg[:, 1])
    if not seg_len.sum() > 0:
        raise ValueError("polyline has zero length")
    s_knots = np.concatenate([[0.0], np.cumsum(seg_len)])
    n_samples = int(np.ceil(s_knots[-1])) + 1
    s = np.linspace(0.0, s_knots[-1], n_samples)
    xs = np.interp(s, s_knots, points[:, 0])
    ys = np.interp(s, s_knots, points[:, 1])
    data = np.stack(
        [map_coordinates(frame, [ys, xs], order=1, mode="nearest") for frame in luma]
    )
    return SpatioTemporalSlice(data=data, line=points, fps=clip.fps)
