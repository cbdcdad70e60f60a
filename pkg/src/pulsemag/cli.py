"""Command line for synthesizing, magnifying, and scoring pulse clips.

Exit codes: 0 success, 2 usage error, 3 missing input, 4 unreadable input,
5 invalid configuration, 6 incompatible clips.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np
from PIL import Image

from . import __version__
from .io import read_clip, write_clip
from .magnify import MODES, MagnifierConfig, boundary_frames, magnify
from .metrics import ClipMismatchError, evaluate_clip, extract_sts
from .pulse import PulseWave, synth_clip
from .temporal import BandSpec

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MISSING_INPUT = 3
EXIT_BAD_INPUT = 4
EXIT_BAD_CONFIG = 5
EXIT_MISMATCH = 6


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load_clip(path, fps=None):
    try:
        return read_clip(path, fps)
    except FileNotFoundError as exc:
        raise _CliError(EXIT_MISSING_INPUT, str(exc)) from exc
    except ValueError as exc:
        raise _CliError(EXIT_BAD_INPUT, str(exc)) from exc


def _sidecar(out_path: Path, suffix: str) -> Path:
    """Companion file location: inside a sequence dir, beside a .rawv."""
    if out_path.suffix == ".rawv":
        return out_path.with_name(out_path.stem + "." + suffix)
    return out_path / suffix


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def cmd_synth(args) -> int:
    try:
        model = PulseWave(period=60.0 / args.bpm)
        synth = synth_clip(
            model,
            width=args.width,
            height=args.height,
            fps=args.fps,
            duration=args.duration,
            motif=args.motif,
            motion_amp=args.motion_amp,
            noise_sd=args.noise_sd,
            seed=args.seed,
        )
    except (ValueError, ZeroDivisionError) as exc:
        raise _CliError(EXIT_BAD_CONFIG, str(exc)) from exc
    out = Path(args.output)
    write_clip(synth.clip, out, bit_depth=args.bit_depth)
    mask_path = _sidecar(out, "mask.png")
    Image.fromarray(synth.mask.astype(np.uint8) * 255).save(mask_path)
    truth = {
        "command": "synth",
        "tool": "pulsemag",
        "tool_version": __version__,
        "fps": args.fps,
        "frames": synth.clip.n_frames,
        "seed": args.seed,
        "motif": args.motif,
        "motion_amp_px": args.motion_amp,
        "noise_sd": args.noise_sd,
        "displacement_px": [float(d) for d in synth.displacement],
        "mask": mask_path.name,
        "model": {
            "period_s": synth.model.period,
            "systolic_amp": synth.model.systolic_amp,
            "dicrotic_amp": synth.model.dicrotic_amp,
            "systolic_center_s": synth.model.systolic_center,
            "dicrotic_center_s": synth.model.dicrotic_center,
            "systolic_width_s": synth.model.systolic_width,
            "dicrotic_width_s": synth.model.dicrotic_width,
            "baseline_amp": synth.model.baseline_amp,
            "baseline_tau_s": synth.model.baseline_tau,
            "onset_width_s": synth.model.onset_width,
        },
    }
    _write_json(_sidecar(out, "ground_truth.json"), truth)
    print(f"wrote {synth.clip.n_frames} frames to {out}")
    return EXIT_OK


def cmd_magnify(args) -> int:
    clip = _load_clip(args.input, fps=args.fps)
    try:
        band = BandSpec(args.band_center, args.band_half_width, clip.fps)
        config = MagnifierConfig(
            mode=args.mode,
            alpha=args.alpha,
            band=band,
            levels=args.levels,
            orientations=args.orientations,
            octave_step=0.5 if args.octave == "half" else 1.0,
            phase_smoothing=args.smooth,
        )
        result = magnify(clip, config)
    except ValueError as exc:
        raise _CliError(EXIT_BAD_CONFIG, str(exc)) from exc
    out = Path(args.output)
    write_clip(result, out, bit_depth=args.bit_depth)
    manifest = {
        "command": "magnify",
        "tool": "pulsemag",
        "tool_version": __version__,
        "input": str(args.input),
        "output": str(out),
        "mode": config.mode,
        "alpha": config.alpha,
        "band_center_hz": band.center_hz,
        "band_half_width_hz": band.half_width_hz,
        "levels": config.levels,
        "orientations": config.orientations,
        "octave_step": config.octave_step,
        "phase_smoothing": config.phase_smoothing,
        "fps": clip.fps,
        "frames": result.n_frames,
        "bit_depth": args.bit_depth,
        "boundary_frames": boundary_frames(config, clip.fps),
    }
    _write_json(_sidecar(out, "manifest.json"), manifest)
    print(
        f"magnified {result.n_frames} frames ({config.mode}, alpha={config.alpha}) "
        f"-> {out}; boundary_frames={manifest['boundary_frames']}"
    )
    return EXIT_OK


def _comparison_table(labeled_reports) -> str:
    width = max(len(label) for label, _ in labeled_reports)
    width = max(width, len("clip"))
    lines = [
        f"{'clip':<{width}}  frames  psnr_mean  psnr_min   ssim_mean  ssim_min"
    ]
    for label, rep in labeled_reports:
        lines.append(
            f"{label:<{width}}  {len(rep.frame_indices):>6d}  "
            f"{rep.psnr_mean:>9.4f}  {float(np.min(rep.psnr_db)):>9.4f}  "
            f"{rep.ssim_mean:>9.6f}  {float(np.min(rep.ssim_values)):>9.6f}"
        )
    return "\n".join(lines) + "\n"


def cmd_metrics(args) -> int:
    source = _load_clip(args.source)
    labeled = []
    for spec in args.magnified:
        if "=" in spec:
            label, path = spec.split("=", 1)
        else:
            path = spec
            label = Path(spec).stem or Path(spec).name
        labeled.append((label, _load_clip(path)))
    reports = []
    for label, clip in labeled:
        try:
            rep = evaluate_clip(
                source,
                clip,
                sample_len=args.sample_len,
                skip_boundary=args.skip_boundary,
            )
        except ClipMismatchError as exc:
            raise _CliError(EXIT_MISMATCH, f"{label}: {exc}") from exc
        except ValueError as exc:
            raise _CliError(EXIT_BAD_CONFIG, str(exc)) from exc
        reports.append((label, rep))
    if len(reports) == 1:
        text = reports[0][1].to_text()
    else:
        sections = [_comparison_table(reports)]
        for label, rep in reports:
            sections.append(f"== {label} ==")
            sections.append(rep.to_text())
        text = "\n".join(sections)
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
    summary = _comparison_table(reports) if len(reports) > 1 else text
    sys.stdout.write(summary)
    return EXIT_OK


def _parse_line_spec(spec: str):
    kind, _, rest = spec.partition(":")
    if kind in ("row", "col"):
        try:
            return (kind, int(rest))
        except ValueError as exc:
            raise _CliError(EXIT_BAD_CONFIG, f"bad line index in {spec!r}") from exc
    if kind == "poly":
        try:
            points = [
                tuple(float(v) for v in pair.split(","))
                for pair in rest.split(";")
                if pair
            ]
            if any(len(p) != 2 for p in points):
                raise ValueError("each vertex needs x,y")
            return points
        except ValueError as exc:
            raise _CliError(EXIT_BAD_CONFIG, f"bad polyline spec {spec!r}") from exc
    raise _CliError(
        EXIT_BAD_CONFIG,
        f"line spec must be row:Y, col:X, or poly:x0,y0;x1,y1;..., got {spec!r}",
    )


def cmd_slice(args) -> int:
    clip = _load_clip(args.input, fps=args.fps)
    line = _parse_line_spec(args.line)
    try:
        sts = extract_sts(clip, line)
    except ValueError as exc:
        raise _CliError(EXIT_BAD_CONFIG, str(exc)) from exc
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    data = np.round(np.clip(sts.data, 0.0, 1.0) * 65535).astype(np.uint16)
    Image.fromarray(data).save(out)
    print(f"wrote {sts.data.shape[0]}x{sts.data.shape[1]} slice to {out}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pulsemag",
        description="Phase-based pulse motion magnification toolkit",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="render a synthetic pulsing test clip")
    p.add_argument("output", help="output directory (PNG sequence) or .rawv file")
    p.add_argument("--width", type=int, default=128)
    p.add_argument("--height", type=int, default=128)
    p.add_argument("--fps", type=float, default=30.0)
    p.add_argument("--duration", type=float, default=5.0, help="seconds")
    p.add_argument("--bpm", type=float, default=60.0, help="pulse rate")
    p.add_argument("--motif", choices=("bump", "edge"), default="bump")
    p.add_argument(
        "--motion-amp", type=float, default=1.0, help="peak displacement, px"
    )
    p.add_argument("--noise-sd", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bit-depth", type=int, choices=(8, 16), default=16)
    p.set_defaults(handler=cmd_synth)

    p = sub.add_parser("magnify", help="magnify pulsatile motion in a clip")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--mode", choices=MODES, default="jerk")
    p.add_argument("--alpha", type=float, default=10.0)
    p.add_argument("--band-center", type=float, default=1.0, help="Hz")
    p.add_argument("--band-half-width", type=float, default=0.1, help="Hz")
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--orientations", type=int, default=4)
    p.add_argument("--octave", choices=("half", "full"), default="half")
    p.add_argument(
        "--smooth",
        type=float,
        default=0.0,
        help="amplitude-weighted phase blur sigma, px (0 = off)",
    )
    p.add_argument("--fps", type=float, default=None, help="override stored fps")
    p.add_argument("--bit-depth", type=int, choices=(8, 16), default=16)
    p.set_defaults(handler=cmd_magnify)

    p = sub.add_parser("metrics", help="PSNR/SSIM of magnified clips vs source")
    p.add_argument("source")
    p.add_argument(
        "magnified",
        nargs="+",
        help="magnified clip path, optionally label=path",
    )
    p.add_argument("--sample-len", type=int, default=100)
    p.add_argument("--skip-boundary", type=int, default=0)
    p.add_argument("--out", default=None, help="write the report to this file")
    p.set_defaults(handler=cmd_metrics)

    p = sub.add_parser("slice", help="extract a spatiotemporal slice image")
    p.add_argument("input")
    p.add_argument("--line", required=True, help="row:Y, col:X, or poly:x0,y0;x1,y1")
    p.add_argument("--out", required=True, help="output PNG path")
    p.add_argument("--fps", type=float, default=None)
    p.set_defaults(handler=cmd_slice)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except _CliError as exc:
        print(f"pulsemag: error: {exc}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(f"pulsemag: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
