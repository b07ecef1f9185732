"""Body-size normalization: calibration, retargeting, and affordance tracks.

The reference choreography is danced by someone else's body. To make the
on-screen guidance land where the learner's own limbs should go, we measure
the learner once (median bone lengths over a short window of live frames),
derive per-bone scale factors against the reference body plus a root
translation, and re-pose every reference frame hierarchically so bone
directions are kept while bone lengths become the learner's.

An affordance track is the retargeted animation plus display metadata: a
mode (how much of the body the UI draws) and a set of emphasized joints,
wrists/hands/ankles/feet by default.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .motion import PoseFrame, PoseSequence, limb_lengths
from .skeleton import DEFAULT_EMPHASIZED_JOINTS, Skeleton

# Bones measured below this are too degenerate to scale by.
MIN_BONE_LENGTH_M = 1e-3

# Suggested number of calibration frames (~1 s at session fps).
RECOMMENDED_CALIBRATION_FRAMES = 30


class DegenerateCalibrationError(ValueError):
    """Raised when measured bones are too short to derive scales from."""


class AffordanceMode(str, enum.Enum):
    """How much of the retargeted body the UI should draw."""

    JOINTS_ONLY = "joints_only"
    JOINTS_PLUS_TRANSLUCENT_BODY = "joints_plus_translucent_body"
    FULL_BODY = "full_body"
    INVISIBLE = "invisible"


@dataclass(frozen=True)
class UserCalibration:
    """Measured body proportions: bone lengths keyed by child joint, plus
    the mean root position over the frames used."""

    bone_lengths: dict[str, float]
    root_reference: np.ndarray
    frames_used: int

    def __post_init__(self) -> None:
        if self.frames_used < 1:
            raise ValueError("frames_used must be >= 1")
        root = np.asarray(self.root_reference, dtype=np.float64).reshape(3)
        if not np.isfinite(root).all():
            raise ValueError("root_reference must be finite")
        for bone, length in self.bone_lengths.items():
            if not np.isfinite(length) or length < 0:
                raise ValueError(f"bone {bone!r} has invalid length {length}")
        object.__setattr__(self, "root_reference", root)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UserCalibration):
            return NotImplemented
        return (
            self.bone_lengths == other.bone_lengths
            and np.array_equal(self.root_reference, other.root_reference)
            and self.frames_used == other.frames_used
        )


@dataclass(frozen=True)
class RetargetTransform:
    """Per-bone scale factors (keyed by child joint) and a root translation."""

    bone_scale: dict[str, float]
    root_offset: np.ndarray

    def __post_init__(self) -> None:
        offset = np.asarray(self.root_offset, dtype=np.float64).reshape(3)
        if not np.isfinite(offset).all():
            raise ValueError("root_offset must be finite")
        for bone, scale in self.bone_scale.items():
            if not np.isfinite(scale) or scale <= 0:
                raise ValueError(f"bone {bone!r} has invalid scale {scale}")
        object.__setattr__(self, "root_offset", offset)


def identity_transform(skeleton: Skeleton) -> RetargetTransform:
    """Scales 1 and zero offset: retargeting becomes a no-op."""
    return RetargetTransform(
        bone_scale={child: 1.0 for _, child in skeleton.bones},
        root_offset=np.zeros(3),
    )


def calibrate_user(frames: list[PoseFrame], skeleton: Skeleton) -> UserCalibration:
    """Measure the user from a window of pose frames.

    Bone lengths are per-bone medians across the frames, which rejects
    occasional pose-estimator spikes; the root reference is the mean root
    position. Raises DegenerateCalibrationError if any median bone is
    shorter than 1 mm.
    """
    if not frames:
        raise ValueError("calibration needs at least one frame")
    per_bone: dict[str, list[float]] = {child: [] for _, child in skeleton.bones}
    roots = np.empty((len(frames), 3), dtype=np.float64)
    for i, frame in enumerate(frames):
        for child, length in limb_lengths(frame, skeleton).items():
            per_bone[child].append(length)
        roots[i] = frame.positions[skeleton.root_index]
    lengths = {child: float(np.median(values)) for child, values in per_bone.items()}
    degenerate = sorted(child for child, length in lengths.items() if length < MIN_BONE_LENGTH_M)
    if degenerate:
        raise DegenerateCalibrationError(
            f"median length below {MIN_BONE_LENGTH_M * 1000:.0f} mm for bones: {', '.join(degenerate)}"
        )
    return UserCalibration(
        bone_lengths=lengths,
        root_reference=roots.mean(axis=0),
        frames_used=len(frames),
    )


def reference_calibration(seq: PoseSequence) -> UserCalibration:
    """Calibration-shaped measurement of the reference avatar's first frame."""
    return calibrate_user([seq.frame(0)], seq.skeleton)


def compute_retarget(reference: UserCalibration, user: UserCalibration) -> RetargetTransform:
    """Scale factors mapping the reference body onto the user's.

    bone_scale[b] = user length / reference length; root_offset moves the
    reference root onto the user's. Raises DegenerateCalibrationError when a
    reference bone is below 1 mm (the ratio would explode).
    """
    scales: dict[str, float] = {}
    for child, ref_len in reference.bone_lengths.items():
        if ref_len < MIN_BONE_LENGTH_M:
            raise DegenerateCalibrationError(f"reference bone {child!r} is degenerate ({ref_len:.2e} m)")
        scales[child] = user.bone_lengths[child] / ref_len
    return RetargetTransform(
        bone_scale=scales,
        root_offset=user.root_reference - reference.root_reference,
    )


def retarget_pose(frame: PoseFrame, transform: RetargetTransform, skeleton: Skeleton) -> PoseFrame:
    """Re-pose one frame onto the target body.

    The root translates by root_offset; walking the tree parent-first, each
    child is placed at parent' + scale * (child - parent), so bone directions
    are preserved and bone lengths scale.
    """
    src = frame.positions
    out = np.empty_like(src)
    parents = skeleton.parent_indices
    for i in skeleton.topological_order():
        p = int(parents[i])
        if p < 0:
            out[i] = src[i] + transform.root_offset
        else:
            scale = transform.bone_scale[skeleton.joints[i]]
            out[i] = out[p] + scale * (src[i] - src[p])
    return PoseFrame(t=frame.t, positions=out)


@dataclass(frozen=True)
class AffordanceTrack:
    """Retargeted animation plus display metadata.

    positions is (T, 24, 3), parallel to the source sequence; emphasis is a
    per-joint boolean array marking the emphasized joints.
    """

    mode: AffordanceMode
    emphasized_joints: tuple[str, ...]
    fps: float
    positions: np.ndarray = field(repr=False)
    emphasis: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        pos = np.asarray(self.positions, dtype=np.float64)
        emphasis = np.asarray(self.emphasis, dtype=bool)
        if pos.ndim != 3 or pos.shape[1:] != (emphasis.size, 3):
            raise ValueError(f"positions {pos.shape} do not match emphasis flags ({emphasis.size})")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "emphasis", emphasis)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AffordanceTrack):
            return NotImplemented
        return (
            self.mode == other.mode
            and self.emphasized_joints == other.emphasized_joints
            and self.fps == other.fps
            and np.array_equal(self.positions, other.positions)
            and np.array_equal(self.emphasis, other.emphasis)
        )

    def __len__(self) -> int:
        return self.positions.shape[0]


def generate_affordance_track(
    seq: PoseSequence,
    transform: RetargetTransform,
    mode: AffordanceMode = AffordanceMode.FULL_BODY,
    emphasized: tuple[str, ...] = DEFAULT_EMPHASIZED_JOINTS,
) -> AffordanceTrack:
    """Retarget every frame of ``seq`` and attach display metadata.

    The mode is carried for the UI; positions are generated for all modes,
    including INVISIBLE (hiding is a rendering decision). JOINTS_ONLY with
    an empty emphasized set would display nothing and is rejected.
    """
    skeleton = seq.skeleton
    unknown = sorted(set(emphasized) - set(skeleton.joints))
    if unknown:
        raise ValueError(f"unknown emphasized joints: {', '.join(unknown)}")
    if mode is AffordanceMode.JOINTS_ONLY and not emphasized:
        raise ValueError("JOINTS_ONLY with an empty emphasized set displays nothing")
    out = np.empty_like(seq.positions)
    for i in range(len(seq)):
        out[i] = retarget_pose(seq.frame(i), transform, skeleton).positions
    emphasis = np.array([name in set(emphasized) for name in skeleton.joints], dtype=bool)
    return AffordanceTrack(
        mode=mode,
        emphasized_joints=tuple(emphasized),
        fps=seq.fps,
        positions=out,
        emphasis=emphasis,
    )
