"""Pose sequences: parsing, serialization, resampling, smoothing, limb lengths.

A pose frame is a (24, 3) float64 array of absolute joint positions in
meters; a sequence stores all frames as one (T, 24, 3) array sampled
uniformly at ``fps``, so frame ``i`` sits at ``t = i / fps``.

The on-disk format is pose-JSON: a UTF-8 object with

    {"fps": <number>, "joints": [<24 names in canonical order>],
     "frames": [[[x, y, z] * 24], ...]}

NaN/Inf literals are rejected.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .skeleton import JOINT_COUNT, Skeleton


class PoseFormatError(ValueError):
    """Raised when a pose-JSON stream violates the documented format."""


@dataclass(frozen=True)
class PoseFrame:
    """One timestamped pose: ``positions`` is (24, 3) float64 meters."""

    t: float
    positions: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        pos = np.asarray(self.positions, dtype=np.float64)
        if pos.shape != (JOINT_COUNT, 3):
            raise ValueError(f"expected ({JOINT_COUNT}, 3) positions, got {pos.shape}")
        if not np.isfinite(pos).all():
            raise ValueError("pose positions must be finite")
        if self.t < 0:
            raise ValueError("frame time must be >= 0")
        object.__setattr__(self, "positions", pos)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PoseFrame):
            return NotImplemented
        return self.t == other.t and np.array_equal(self.positions, other.positions)


@dataclass(frozen=True)
class PoseSequence:
    """Uniformly sampled joint positions: ``positions`` is (T, 24, 3)."""

    skeleton: Skeleton
    fps: float
    positions: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.fps <= 0:
            raise ValueError("fps must be > 0")
        pos = np.asarray(self.positions, dtype=np.float64)
        if pos.ndim != 3 or pos.shape[1:] != (JOINT_COUNT, 3):
            raise ValueError(f"expected (T, {JOINT_COUNT}, 3) positions, got {pos.shape}")
        if pos.shape[0] == 0:
            raise ValueError("pose sequence must be non-empty")
        if not np.isfinite(pos).all():
            raise ValueError("pose positions must be finite")
        object.__setattr__(self, "positions", pos)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PoseSequence):
            return NotImplemented
        return (
            self.skeleton == other.skeleton
            and self.fps == other.fps
            and np.array_equal(self.positions, other.positions)
        )

    def __len__(self) -> int:
        return self.positions.shape[0]

    @property
    def duration_s(self) -> float:
        """Covered time span, one frame period per frame."""
        return len(self) / self.fps

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self), dtype=np.float64) / self.fps

    def frame(self, i: int) -> PoseFrame:
        return PoseFrame(t=i / self.fps, positions=self.positions[i])


def parse_pose_sequence(data: bytes | str, expected_skeleton: Skeleton) -> PoseSequence:
    """Parse a pose-JSON byte stream against the expected skeleton.

    Raises PoseFormatError on malformed JSON, wrong joint count, joint-name
    mismatch, non-finite values, or fps <= 0.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise PoseFormatError(f"not UTF-8: {exc}") from exc
    try:
        doc = json.loads(data, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise PoseFormatError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise PoseFormatError("top level must be an object")
    for key in ("fps", "joints", "frames"):
        if key not in doc:
            raise PoseFormatError(f"missing key {key!r}")

    fps = doc["fps"]
    if not isinstance(fps, (int, float)) or not math.isfinite(fps) or fps <= 0:
        raise PoseFormatError(f"fps must be a positive number, got {fps!r}")

    joints = doc["joints"]
    if not isinstance(joints, list) or len(joints) != JOINT_COUNT:
        got = len(joints) if isinstance(joints, list) else type(joints).__name__
        raise PoseFormatError(f"expected {JOINT_COUNT} joints, got {got}")
    if tuple(joints) != tuple(expected_skeleton.joints):
        raise PoseFormatError("joint names do not match the expected skeleton order")

    frames = doc["frames"]
    if not isinstance(frames, list) or not frames:
        raise PoseFormatError("frames must be a non-empty array")
    try:
        pos = np.asarray(frames, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise PoseFormatError(f"frames are not numeric: {exc}") from exc
    if pos.ndim != 3 or pos.shape[1:] != (JOINT_COUNT, 3):
        raise PoseFormatError(f"each frame must be {JOINT_COUNT} [x, y, z] points, got shape {pos.shape}")
    if not np.isfinite(pos).all():
        raise PoseFormatError("frames contain non-finite values")
    return PoseSequence(skeleton=expected_skeleton, fps=float(fps), positions=pos)


def serialize_pose_sequence(seq: PoseSequence) -> bytes:
    """Inverse of parse_pose_sequence; output parses back to an equal sequence."""
    doc = {
        "fps": seq.fps,
        "joints": list(seq.skeleton.joints),
        "frames": seq.positions.tolist(),
    }
    return json.dumps(doc).encode("utf-8")


def resample_sequence(seq: PoseSequence, target_fps: float) -> PoseSequence:
    """Resample to target_fps by per-coordinate linear interpolation.

    The output spans the same [0, (T-1)/fps] range and preserves the first
    and last frames exactly. At the input fps this is the identity.
    """
    if target_fps <= 0:
        raise ValueError("target_fps must be > 0")
    if target_fps == seq.fps:
        return seq
    n_in = len(seq)
    span = (n_in - 1) / seq.fps
    # Number of output frames with t_i = i/target_fps <= span, with a small
    # guard against float fuzz at the endpoint.
    n_out = int(math.floor(span * target_fps + 1e-9)) + 1
    t_out = np.arange(n_out, dtype=np.float64) / target_fps
    # Fractional source frame index per output frame.
    x = t_out * seq.fps
    i0 = np.clip(np.floor(x).astype(np.int64), 0, n_in - 1)
    i1 = np.minimum(i0 + 1, n_in - 1)
    w = (x - i0)[:, None, None]
    out = (1.0 - w) * seq.positions[i0] + w * seq.positions[i1]
    out[0] = seq.positions[0]
    if abs(t_out[-1] - span) < 1e-9:
        out[-1] = seq.positions[-1]
    return PoseSequence(skeleton=seq.skeleton, fps=float(target_fps), positions=out)


def smooth_sequence(seq: PoseSequence, alpha: float = 0.5) -> PoseSequence:
    """First-order exponential moving average per coordinate.

    y[0] = x[0]; y[i] = alpha * x[i] + (1 - alpha) * y[i-1]. alpha = 1 is the
    identity. Meant for live, jittery input; reference animations are stored
    unsmoothed.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    if alpha == 1.0:
        return seq
    out = np.empty_like(seq.positions)
    out[0] = seq.positions[0]
    for i in range(1, len(seq)):
        out[i] = alpha * seq.positions[i] + (1.0 - alpha) * out[i - 1]
    return PoseSequence(skeleton=seq.skeleton, fps=seq.fps, positions=out)


def smooth_frame(prev: np.ndarray | None, frame: np.ndarray, alpha: float = 0.5) -> np.ndarray:
    """One EMA step for streaming input; prev=None starts the filter."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    frame = np.asarray(frame, dtype=np.float64)
    if prev is None:
        return frame.copy()
    return alpha * frame + (1.0 - alpha) * np.asarray(prev, dtype=np.float64)


def limb_lengths(frame: PoseFrame, skeleton: Skeleton) -> dict[str, float]:
    """Euclidean length of every bone, keyed by the bone's child joint."""
    pos = frame.positions
    lengths: dict[str, float] = {}
    for parent, child in skeleton.bones:
        d = pos[skeleton.index_of(child)] - pos[skeleton.index_of(parent)]
        lengths[child] = float(np.linalg.norm(d))
    return lengths


def _reject_constant(name: str) -> float:
    raise PoseFormatError(f"non-finite literal {name!r} is not allowed")
