"""Clip storage: numbered PNG sequences or a single raw planar container.

A PNG sequence is a directory of ``frame_000000.png`` files plus a
``meta.json`` carrying fps and bit depth.  The ``.rawv`` container is a
magic string, a length-prefixed JSON header (dtype, shape, fps), then the
uncompressed C-order pixel data — handy for lossless 16-bit color, which
PNG via Pillow does not cover.  Intensities are float [0, 1] in memory;
quantization happens only here, at write time.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np
from PIL import Image

from .video import VideoClip

__all__ = ["read_clip", "write_clip"]

RAW_MAGIC = b"RAWV1\n"
_META_NAME = "meta.json"
_FRAME_FMT = "frame_{:06d}.png"


def _quantize(frames: np.ndarray, bit_depth: int) -> np.ndarray:
    if bit_depth == 8:
        dtype, peak = np.uint8, 255
    elif bit_depth == 16:
        dtype, peak = np.uint16, 65535
    else:
        raise ValueError(f"bit_depth must be 8 or 16, got {bit_depth}")
    return np.round(np.clip(frames, 0.0, 1.0) * peak).astype(dtype)


def _dequantize(data: np.ndarray) -> np.ndarray:
    peak = np.iinfo(data.dtype).max
    return data.astype(np.float64) / peak


def write_clip(clip: VideoClip, path, bit_depth: int = 16) -> None:
    """Write a clip to ``path``: ``*.rawv`` file, or directory of PNGs."""
    path = Path(path)
    if path.suffix == ".rawv":
        _write_rawv(clip, path, bit_depth)
    else:
        _write_png_dir(clip, path, bit_depth)


def read_clip(path, fps: float | None = None) -> VideoClip:
    """Read a clip written by :func:`write_clip`.

    ``fps`` overrides stored metadata; it is required for a bare PNG
    directory without ``meta.json``.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no clip at {path}")
    if path.is_file():
        return _read_rawv(path, fps)
    return _read_png_dir(path, fps)


def _write_rawv(clip: VideoClip, path: Path, bit_depth: int) -> None:
    data = _quantize(clip.frames, bit_depth)
    header = {
        "dtype": data.dtype.name,
        "shape": list(data.shape),
        "fps": clip.fps,
        "version": 1,
    }
    blob = json.dumps(header, sort_keys=True).encode("utf-8")
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(RAW_MAGIC)
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        fh.write(np.ascontiguousarray(data, dtype=data.dtype.newbyteorder("<")).tobytes())


def _read_rawv(path: Path, fps: float | None) -> VideoClip:
    with open(path, "rb") as fh:
        magic = fh.read(len(RAW_MAGIC))
        if magic != RAW_MAGIC:
            raise ValueError(f"{path} is not a rawv clip (bad magic)")
        (header_len,) = struct.unpack("<I", fh.read(4))
        try:
            header = json.loads(fh.read(header_len).decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ValueError(f"{path} has a corrupt header: {exc}") from exc
        try:
            dtype = np.dtype(header["dtype"]).newbyteorder("<")
            shape = tuple(int(v) for v in header["shape"])
            stored_fps = float(header["fps"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"{path} header missing fields: {exc}") from exc
        expected = int(np.prod(shape)) * dtype.itemsize
        payload = fh.read(expected)
    if len(payload) != expected:
        raise ValueError(
            f"{path} truncated: expected {expected} data bytes, got {len(payload)}"
        )
    data = np.frombuffer(payload, dtype=dtype).reshape(shape)
    return VideoClip(_dequantize(data), fps if fps is not None else stored_fps)


def _write_png_dir(clip: VideoClip, path: Path, bit_depth: int) -> None:
    if clip.is_color and bit_depth != 8:
        raise ValueError(
            "PNG sequences store color frames at 8 bits; use a .rawv "
            "container for 16-bit color"
        )
    data = _quantize(clip.frames, bit_depth)
    path.mkdir(parents=True, exist_ok=True)
    for i, frame in enumerate(data):
        Image.fromarray(frame).save(path / _FRAME_FMT.format(i))
    meta = {
        "format": "png-sequence",
        "version": 1,
        "fps": clip.fps,
        "frames": clip.n_frames,
        "bit_depth": bit_depth,
        "color": clip.is_color,
    }
    with open(path / _META_NAME, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _read_png_dir(path: Path, fps: float | None) -> VideoClip:
    files = sorted(path.glob("*.png"))
    files = [f for f in files if f.name != "mask.png"]
    if not files:
        raise FileNotFoundError(f"no .png frames in {path}")
    meta_path = path / _META_NAME
    stored_fps = None
    if meta_path.exists():
        try:
            with open(meta_path, encoding="utf-8") as fh:
                stored_fps = float(json.load(fh)["fps"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"{meta_path} is corrupt: {exc}") from exc
    if fps is None:
        fps = stored_fps
    if fps is None:
        raise ValueError(f"{path} has no {_META_NAME}; pass fps explicitly")
    frames = []
    shape = None
    for f in files:
        try:
            arr = np.array(Image.open(f))
        except OSError as exc:
            raise ValueError(f"cannot decode {f}: {exc}") from exc
        if arr.dtype not in (np.uint8, np.uint16):
            raise ValueError(f"{f}: unsupported pixel type {arr.dtype}")
        if shape is None:
            shape = arr.shape
        elif arr.shape != shape:
            raise ValueError(
                f"{f}: frame shape {arr.shape} differs from first frame {shape}"
            )
        frames.append(_dequantize(arr))
    return VideoClip(np.stack(frames), fps)
