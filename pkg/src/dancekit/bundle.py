"""The on-disk learning bundle: assembly, serialization, validation, loading.

A bundle is a self-contained directory:

    manifest.json
    audio/mixed.wav      music + count track, RMS-matched and summed
    audio/music.wav      the trimmed song alone
    audio/beat.wav       the count track alone, time-aligned with the music
    motion/reference.pose.json
    motion/affordance.json

All three audio variants have identical length, so the session's music/beat
toggles are pure source selection. Rate-changed audio is rendered on demand
by the gateway, never stored. The manifest is written as canonical JSON
(sorted keys), so writing the same bundle twice is byte-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .affordance import (
    AffordanceMode,
    AffordanceTrack,
    RetargetTransform,
    UserCalibration,
    compute_retarget,
    generate_affordance_track,
    identity_transform,
    reference_calibration,
)
from .audio import AudioTrack, CountTrackSpec, mix, normalize_rms, read_wav, silence, synthesize_count_track, trim, write_wav
from .motion import PoseSequence, parse_pose_sequence, serialize_pose_sequence
from .skeleton import CANONICAL_SKELETON, DEFAULT_EMPHASIZED_JOINTS
from .timeline import EightCountSegment, build_beat_grid, segment_eight_counts

FORMAT_VERSION = 1

DEFAULT_SESSION_FPS = 30.0
DEFAULT_TARGET_RMS = 0.2

# Largest tolerated gap between pose coverage and the requested audio window.
POSE_AUDIO_MISMATCH_S = 0.5

ASSET_PATHS = {
    "mixed_audio": "audio/mixed.wav",
    "music_audio": "audio/music.wav",
    "beat_audio": "audio/beat.wav",
    "pose": "motion/reference.pose.json",
    "affordance": "motion/affordance.json",
}


class BundleError(ValueError):
    """Raised for unreadable, inconsistent, or mismatched bundle inputs."""


@dataclass(frozen=True)
class BundleManifest:
    title: str
    bpm: float
    offset_s: float
    duration_s: float
    fps: float
    segments: tuple[EightCountSegment, ...]
    affordance_mode_default: AffordanceMode
    emphasized_joints: tuple[str, ...]
    assets: dict[str, str]
    format_version: int = FORMAT_VERSION

    def to_dict(self) -> dict:
        return {
            "format_version": self.format_version,
            "title": self.title,
            "bpm": self.bpm,
            "offset_s": self.offset_s,
            "duration_s": self.duration_s,
            "fps": self.fps,
            "segments": [
                {
                    "index": seg.index,
                    "start_s": seg.start_s,
                    "end_s": seg.end_s,
                    "beat_indices": list(seg.beat_indices),
                    "partial": seg.partial,
                }
                for seg in self.segments
            ],
            "affordance_mode_default": self.affordance_mode_default.value,
            "emphasized_joints": list(self.emphasized_joints),
            "assets": dict(self.assets),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "BundleManifest":
        try:
            segments = tuple(
                EightCountSegment(
                    index=int(seg["index"]),
                    start_s=float(seg["start_s"]),
                    end_s=float(seg["end_s"]),
                    beat_indices=tuple(int(i) for i in seg["beat_indices"]),
                    partial=bool(seg["partial"]),
                )
                for seg in doc["segments"]
            )
            return cls(
                title=str(doc["title"]),
                bpm=float(doc["bpm"]),
                offset_s=float(doc["offset_s"]),
                duration_s=float(doc["duration_s"]),
                fps=float(doc["fps"]),
                segments=segments,
                affordance_mode_default=AffordanceMode(doc["affordance_mode_default"]),
                emphasized_joints=tuple(str(j) for j in doc["emphasized_joints"]),
                assets={str(k): str(v) for k, v in doc["assets"].items()},
                format_version=int(doc["format_version"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise BundleError(f"bad manifest: {exc}") from exc


@dataclass(frozen=True)
class LearningBundle:
    manifest: BundleManifest
    mixed_audio: AudioTrack
    music_audio: AudioTrack
    beat_audio: AudioTrack
    pose: PoseSequence
    affordance: AffordanceTrack


def assemble_bundle(
    song: AudioTrack,
    pose: PoseSequence,
    bpm: float,
    offset_s: float = 0.0,
    start_s: float = 0.0,
    end_s: float | None = None,
    user_calibration: UserCalibration | None = None,
    *,
    title: str = "untitled",
    fps: float = DEFAULT_SESSION_FPS,
    target_rms: float = DEFAULT_TARGET_RMS,
    affordance_mode: AffordanceMode = AffordanceMode.FULL_BODY,
    emphasized_joints: tuple[str, ...] = DEFAULT_EMPHASIZED_JOINTS,
    count_spec: CountTrackSpec | None = None,
) -> LearningBundle:
    """Build a complete in-memory bundle from a song and a pose sequence.

    The song is trimmed to [start_s, end_s); a count track at ``bpm`` starts
    at ``offset_s`` into the trimmed window. Song and count track are each
    normalized to ``target_rms`` and summed into the mixed variant. The pose
    is resampled over the same window to the session fps, and the affordance
    track is generated with the user's retarget transform (identity when no
    calibration is given).
    """
    if end_s is None:
        end_s = song.duration_s
    if end_s - start_s <= 0:
        raise BundleError(f"end before start: [{start_s}, {end_s}]")
    if end_s - pose.duration_s > POSE_AUDIO_MISMATCH_S:
        raise BundleError(
            f"pose covers {pose.duration_s:.3f} s but audio window ends at {end_s:.3f} s "
            f"(mismatch over {POSE_AUDIO_MISMATCH_S} s)"
        )

    music = trim(song, start_s, end_s)
    n_samples = len(music)
    duration_s = n_samples / music.sample_rate
    if not 0.0 <= offset_s < duration_s:
        raise BundleError(f"offset_s {offset_s} outside [0, {duration_s:.3f})")

    spec = count_spec or CountTrackSpec(bpm=bpm, duration_s=duration_s - offset_s)
    if spec.bpm != bpm or spec.duration_s != duration_s - offset_s:
        spec = replace(spec, bpm=bpm, duration_s=duration_s - offset_s)
    count = synthesize_count_track(spec, music.sample_rate)

    music_norm = normalize_rms(music, target_rms)
    count_norm = normalize_rms(count, target_rms)
    mixed = _exact_length(mix(music_norm, count_norm, offset_s), n_samples)
    beat = _exact_length(mix(silence(duration_s, music.sample_rate), count_norm, offset_s), n_samples)

    pose_window = _resample_window(pose, start_s, end_s, fps, duration_s)
    if user_calibration is None:
        transform: RetargetTransform = identity_transform(pose.skeleton)
    else:
        transform = compute_retarget(reference_calibration(pose_window), user_calibration)
    affordance = generate_affordance_track(pose_window, transform, affordance_mode, emphasized_joints)

    grid = build_beat_grid(bpm, offset_s, duration_s)
    segments = tuple(segment_eight_counts(grid))

    manifest = BundleManifest(
        title=title,
        bpm=float(bpm),
        offset_s=float(offset_s),
        duration_s=duration_s,
        fps=float(fps),
        segments=segments,
        affordance_mode_default=affordance_mode,
        emphasized_joints=tuple(emphasized_joints),
        assets=dict(ASSET_PATHS),
    )
    return LearningBundle(
        manifest=manifest,
        mixed_audio=mixed,
        music_audio=music_norm,
        beat_audio=beat,
        pose=pose_window,
        affordance=affordance,
    )


def write_bundle(bundle: LearningBundle, destination: str | Path, overwrite: bool = False) -> None:
    """Write the bundle directory; refuses a non-empty destination unless
    ``overwrite`` is set. Writes are deterministic: identical bundles yield
    byte-identical manifests."""
    dest = Path(destination)
    if dest.exists() and any(dest.iterdir()) and not overwrite:
        raise BundleError(f"destination {dest} is not empty (pass overwrite=True to replace)")
    (dest / "audio").mkdir(parents=True, exist_ok=True)
    (dest / "motion").mkdir(parents=True, exist_ok=True)

    assets = bundle.manifest.assets
    write_wav(bundle.mixed_audio, dest / assets["mixed_audio"])
    write_wav(bundle.music_audio, dest / assets["music_audio"])
    write_wav(bundle.beat_audio, dest / assets["beat_audio"])
    (dest / assets["pose"]).write_bytes(serialize_pose_sequence(bundle.pose))
    (dest / assets["affordance"]).write_bytes(_serialize_affordance(bundle.affordance, bundle.pose))
    manifest_json = json.dumps(bundle.manifest.to_dict(), sort_keys=True, indent=2) + "\n"
    (dest / "manifest.json").write_text(manifest_json, encoding="utf-8")


def read_bundle(path: str | Path, validate: bool = True) -> LearningBundle:
    """Load a bundle directory; with ``validate`` (the default) every
    manifest invariant is checked and violations raise BundleError."""
    root = Path(path)
    manifest_path = root / "manifest.json"
    if not manifest_path.is_file():
        raise BundleError(f"missing manifest: {manifest_path}")
    try:
        doc = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise BundleError(f"manifest is not valid JSON: {exc}") from exc
    manifest = BundleManifest.from_dict(doc)
    if manifest.format_version > FORMAT_VERSION:
        raise BundleError(f"unsupported format_version {manifest.format_version} (reader supports {FORMAT_VERSION})")

    for name, rel in manifest.assets.items():
        if not (root / rel).is_file():
            raise BundleError(f"missing asset {name!r}: {rel}")

    bundle = LearningBundle(
        manifest=manifest,
        mixed_audio=read_wav(root / manifest.assets["mixed_audio"]),
        music_audio=read_wav(root / manifest.assets["music_audio"]),
        beat_audio=read_wav(root / manifest.assets["beat_audio"]),
        pose=parse_pose_sequence((root / manifest.assets["pose"]).read_bytes(), CANONICAL_SKELETON),
        affordance=_parse_affordance((root / manifest.assets["affordance"]).read_bytes()),
    )
    if validate:
        violations = validate_bundle(bundle)
        if violations:
            raise BundleError("bundle failed validation: " + "; ".join(violations))
    return bundle


def validate_bundle(bundle: LearningBundle) -> list[str]:
    """Check every manifest invariant; returns violations (empty = valid)."""
    m = bundle.manifest
    violations: list[str] = []
    if m.bpm <= 0:
        violations.append(f"bpm must be > 0, got {m.bpm}")
    if not 0.0 <= m.offset_s < m.duration_s:
        violations.append(f"offset_s {m.offset_s} outside [0, duration_s {m.duration_s})")
    if m.fps <= 0:
        violations.append(f"fps must be > 0, got {m.fps}")
    if violations:
        return violations

    expected_segments = tuple(segment_eight_counts(build_beat_grid(m.bpm, m.offset_s, m.duration_s)))
    if not _segments_equal(m.segments, expected_segments):
        violations.append(
            f"manifest segments disagree with recomputed segmentation "
            f"({len(m.segments)} listed vs {len(expected_segments)} recomputed)"
        )

    expected_samples = round(m.duration_s * bundle.music_audio.sample_rate)
    for name, track in (
        ("mixed", bundle.mixed_audio),
        ("music", bundle.music_audio),
        ("beat", bundle.beat_audio),
    ):
        if track.sample_rate != bundle.music_audio.sample_rate:
            violations.append(f"{name} audio sample rate {track.sample_rate} differs")
        if abs(len(track) - expected_samples) > 1:
            violations.append(f"{name} audio has {len(track)} samples, expected about {expected_samples}")

    expected_frames = round(m.duration_s * m.fps)
    if abs(len(bundle.pose) - expected_frames) > 1:
        violations.append(f"pose has {len(bundle.pose)} frames, expected about {expected_frames}")
    if bundle.pose.fps != m.fps:
        violations.append(f"pose fps {bundle.pose.fps} differs from manifest fps {m.fps}")
    if len(bundle.affordance) != len(bundle.pose):
        violations.append(
            f"affordance has {len(bundle.affordance)} frames but pose has {len(bundle.pose)}"
        )
    if bundle.affordance.mode is not m.affordance_mode_default:
        violations.append("affordance mode differs from manifest default")
    if bundle.affordance.emphasized_joints != m.emphasized_joints:
        violations.append("affordance emphasized joints differ from manifest")
    unknown = sorted(set(m.emphasized_joints) - set(bundle.pose.skeleton.joints))
    if unknown:
        violations.append(f"manifest emphasizes unknown joints: {', '.join(unknown)}")
    return violations


def _segments_equal(a: tuple[EightCountSegment, ...], b: tuple[EightCountSegment, ...]) -> bool:
    if len(a) != len(b):
        return False
    for x, y in zip(a, b):
        if (
            x.index != y.index
            or x.beat_indices != y.beat_indices
            or x.partial != y.partial
            or abs(x.start_s - y.start_s) > 1e-9
            or abs(x.end_s - y.end_s) > 1e-9
        ):
            return False
    return True


def _exact_length(track: AudioTrack, n: int) -> AudioTrack:
    """Force sample count to n (mix rounding can add one trailing sample)."""
    if len(track) == n:
        return track
    return AudioTrack(sample_rate=track.sample_rate, samples=track.samples[:n], clipped=track.clipped)


def _resample_window(pose: PoseSequence, start_s: float, end_s: float, fps: float, duration_s: float) -> PoseSequence:
    """Resample the pose over [start_s, start_s + duration_s) at ``fps``.

    Frame i sits at start_s + i/fps, linearly interpolated from the source;
    times past the last source frame hold it (the window may end less than
    one source frame period beyond it).
    """
    if fps <= 0:
        raise BundleError("fps must be > 0")
    n_out = round(duration_s * fps)
    if n_out < 1:
        raise BundleError(f"window [{start_s}, {end_s}) too short for fps {fps}")
    t = start_s + np.arange(n_out, dtype=np.float64) / fps
    x = np.clip(t * pose.fps, 0.0, len(pose) - 1)
    i0 = np.floor(x).astype(np.int64)
    i1 = np.minimum(i0 + 1, len(pose) - 1)
    w = (x - i0)[:, None, None]
    out = (1.0 - w) * pose.positions[i0] + w * pose.positions[i1]
    return PoseSequence(skeleton=pose.skeleton, fps=float(fps), positions=out)


def _serialize_affordance(track: AffordanceTrack, pose: PoseSequence) -> bytes:
    doc = {
        "mode": track.mode.value,
        "emphasized_joints": list(track.emphasized_joints),
        "fps": track.fps,
        "joints": list(pose.skeleton.joints),
        "frames": track.positions.tolist(),
    }
    return json.dumps(doc).encode("utf-8")


def _parse_affordance(data: bytes) -> AffordanceTrack:
    try:
        doc = json.loads(data.decode("utf-8"))
        mode = AffordanceMode(doc["mode"])
        emphasized = tuple(str(j) for j in doc["emphasized_joints"])
        fps = float(doc["fps"])
        joints = tuple(str(j) for j in doc["joints"])
        frames = np.asarray(doc["frames"], dtype=np.float64)
    except (KeyError, TypeError, ValueError, UnicodeDecodeError) as exc:
        raise BundleError(f"bad affordance track: {exc}") from exc
    if joints != CANONICAL_SKELETON.joints:
        raise BundleError("affordance joints do not match the canonical skeleton")
    if frames.ndim != 3 or frames.shape[1:] != (len(joints), 3):
        raise BundleError(f"affordance frames have shape {frames.shape}")
    emphasis = np.array([name in set(emphasized) for name in joints], dtype=bool)
    return AffordanceTrack(mode=mode, emphasized_joints=emphasized, fps=fps, positions=frames, emphasis=emphasis)
