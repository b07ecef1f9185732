"""Command line: generate, inspect, and validate bundles; run the gateway.

Exit codes: 0 success, 1 failed validation, 2 bad arguments or unreadable
input (argparse's own usage errors also exit 2).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from .audio import read_wav
from .bundle import BundleError, LearningBundle, assemble_bundle, read_bundle, validate_bundle, write_bundle
from .motion import PoseFormatError, parse_pose_sequence
from .server import BUNDLE_ROOT_ENV, GatewayConfig, create_app
from .skeleton import CANONICAL_SKELETON


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dancekit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="build a learning bundle from audio + pose")
    gen.add_argument("--audio", required=True, help="song WAV file")
    gen.add_argument("--pose", required=True, help="reference pose-JSON file")
    gen.add_argument("--bpm", type=float, required=True, help="beats per minute of the song")
    gen.add_argument("--start", type=float, default=0.0, help="segment start in seconds (default 0)")
    gen.add_argument("--end", type=float, default=None, help="segment end in seconds (default: song end)")
    gen.add_argument("--offset", type=float, default=0.0, help="first beat offset into the segment (default 0)")
    gen.add_argument("--title", default=None, help="bundle title (default: audio file stem)")
    gen.add_argument("--out", default=None, help="output directory (default: <title>.bundle)")
    gen.add_argument("--fps", type=float, default=30.0, help="session frame rate (default 30)")
    gen.add_argument("--overwrite", action="store_true", help="replace an existing non-empty output directory")
    gen.set_defaults(func=_cmd_generate)

    ins = sub.add_parser("inspect", help="print a bundle's manifest, segments, and checksums")
    ins.add_argument("path", help="bundle directory")
    ins.set_defaults(func=_cmd_inspect)

    val = sub.add_parser("validate", help="check a bundle; exits 1 on violations")
    val.add_argument("path", help="bundle directory")
    val.set_defaults(func=_cmd_validate)

    srv = sub.add_parser("serve", help="run the gateway")
    srv.add_argument("--port", type=int, default=8000)
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument(
        "--bundles",
        default=None,
        help=f"bundle root directory (default: ${BUNDLE_ROOT_ENV} or current directory)",
    )
    srv.add_argument("--fps", type=float, default=30.0, help="session tick rate (default 30)")
    srv.set_defaults(func=_cmd_serve)

    return parser


def _cmd_generate(args: argparse.Namespace) -> int:
    try:
        song = read_wav(args.audio)
    except (OSError, ValueError) as exc:
        print(f"error: cannot read audio {args.audio}: {exc}", file=sys.stderr)
        return 2
    try:
        pose = parse_pose_sequence(Path(args.pose).read_bytes(), CANONICAL_SKELETON)
    except (OSError, PoseFormatError) as exc:
        print(f"error: cannot read pose {args.pose}: {exc}", file=sys.stderr)
        return 2

    title = args.title or Path(args.audio).stem
    out_dir = Path(args.out) if args.out else Path(f"{title}.bundle")
    try:
        bundle = assemble_bundle(
            song,
            pose,
            bpm=args.bpm,
            offset_s=args.offset,
            start_s=args.start,
            end_s=args.end,
            title=title,
            fps=args.fps,
        )
        write_bundle(bundle, out_dir, overwrite=args.overwrite)
    except (BundleError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    m = bundle.manifest
    full = sum(1 for s in m.segments if not s.partial)
    print(f"wrote {out_dir}")
    print(f"  title:     {m.title}")
    print(f"  duration:  {m.duration_s:.3f} s at {m.bpm:g} bpm (offset {m.offset_s:g} s)")
    print(f"  segments:  {len(m.segments)} ({full} full)")
    print(f"  fps:       {m.fps:g} ({len(bundle.pose)} pose frames)")
    print(
        "  clipped:   "
        f"mixed {bundle.mixed_audio.clipped}, music {bundle.music_audio.clipped}, beat {bundle.beat_audio.clipped}"
    )
    return 0


def _cmd_inspect(args: argparse.Namespace) -> int:
    loaded = _load_for_report(args.path)
    if isinstance(loaded, int):
        return loaded
    bundle, violations = loaded
    m = bundle.manifest
    print(json.dumps({k: v for k, v in m.to_dict().items() if k != "segments"}, indent=2, sort_keys=True))
    print("segments:")
    for seg in m.segments:
        kind = "partial" if seg.partial else "full"
        print(f"  [{seg.index}] {seg.start_s:8.3f} .. {seg.end_s:8.3f} s  {len(seg.beat_indices)} beats  {kind}")
    print("assets:")
    root = Path(args.path)
    for name, rel in sorted(m.assets.items()):
        digest = hashlib.sha256((root / rel).read_bytes()).hexdigest()[:16]
        print(f"  {name:12s} {rel:28s} sha256:{digest}")
    return _report_violations(violations)


def _cmd_validate(args: argparse.Namespace) -> int:
    loaded = _load_for_report(args.path)
    if isinstance(loaded, int):
        return loaded
    _, violations = loaded
    return _report_violations(violations)


def _load_for_report(path: str) -> tuple[LearningBundle, list[str]] | int:
    root = Path(path)
    if not root.exists():
        print(f"error: no such path: {root}", file=sys.stderr)
        return 2
    try:
        bundle = read_bundle(root, validate=False)
    except BundleError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1
    return bundle, validate_bundle(bundle)


def _report_violations(violations: list[str]) -> int:
    if violations:
        for v in violations:
            print(f"violation: {v}")
        return 1
    print("valid")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    root = args.bundles or os.environ.get(BUNDLE_ROOT_ENV, ".")
    config = GatewayConfig(bundle_root=Path(root), session_fps=args.fps)
    app = create_app(config)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    sys.exit(main())
