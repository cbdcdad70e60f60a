"""In-memory video clips: float frames in [0, 1] plus a frame rate."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Rec. 601 luma weights; chroma planes ride along untouched during
# magnification so color clips keep their hue.
_RGB_TO_YIQ = np.array(
    [
        [0.299, 0.587, 0.114],
        [0.595716, -0.274453, -0.321263],
        [0.211456, -0.522591, 0.311135],
    ]
)
_YIQ_TO_RGB = np.linalg.inv(_RGB_TO_YIQ)


@dataclass(frozen=True)
class VideoClip:
    """A stack of frames, grayscale ``(T, H, W)`` or color ``(T, H, W, 3)``.

    Intensities live in [0, 1]; quantization happens only when a clip is
    written to disk.
    """

    frames: np.ndarray
    fps: float

    def __post_init__(self):
        frames = np.asarray(self.frames, dtype=np.float64)
        if frames.ndim not in (3, 4) or (frames.ndim == 4 and frames.shape[-1] != 3):
            raise ValueError(
                f"frames must be (T, H, W) or (T, H, W, 3), got {frames.shape}"
            )
        if frames.shape[0] < 1:
            raise ValueError("clip needs at least one frame")
        if not np.isfinite(frames).all():
            raise ValueError("frames contain non-finite values")
        if frames.min() < -1e-9 or frames.max() > 1.0 + 1e-9:
            raise ValueError("frame intensities must lie in [0, 1]")
        if not self.fps > 0:
            raise ValueError(f"fps must be positive, got {self.fps}")
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "fps", float(self.fps))

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def height(self) -> int:
        return self.frames.shape[1]

    @property
    def width(self) -> int:
        return self.frames.shape[2]

    @property
    def is_color(self) -> bool:
        return self.frames.ndim == 4

    def duration(self) -> float:
        return self.n_frames / self.fps

    def luma(self) -> np.ndarray:
        """Luminance plane, shape ``(T, H, W)``."""
        if not self.is_color:
            return self.frames
        return self.frames @ _RGB_TO_YIQ[0]

    def with_luma(self, luma: np.ndarray) -> "VideoClip":
        """Replace the luminance plane, keeping chroma; clips to [0, 1]."""
        if luma.shape != self.frames.shape[:3]:
            raise ValueError("luma shape does not match clip geometry")
        if not self.is_color:
            return VideoClip(np.clip(luma, 0.0, 1.0), self.fps)
        yiq = self.frames @ _RGB_TO_YIQ.T
        yiq[..., 0] = luma
        rgb = yiq @ _YIQ_TO_RGB.T
        return VideoClip(np.clip(rgb, 0.0, 1.0), self.fps)
