"""dancekit: turn a dance song plus a reference pose sequence into a
learnable bundle (8-count beat track, segmented timeline, reference
animation, body-size-normalized affordance tracks) and serve interactive
learning sessions over HTTP + WebSocket."""

from .affordance import (
    AffordanceMode,
    AffordanceTrack,
    RetargetTransform,
    UserCalibration,
    calibrate_user,
    compute_retarget,
    generate_affordance_track,
    identity_transform,
    reference_calibration,
    retarget_pose,
)
from .audio import (
    ALLOWED_RATES,
    AudioTrack,
    CountTrackSpec,
    SilentTrackError,
    measure_rms,
    mix,
    normalize_rms,
    read_wav,
    render_at_rate,
    silence,
    synthesize_count_track,
    trim,
    write_wav,
)
from .bundle import (
    BundleError,
    BundleManifest,
    LearningBundle,
    assemble_bundle,
    read_bundle,
    validate_bundle,
    write_bundle,
)
from .motion import (
    PoseFormatError,
    PoseFrame,
    PoseSequence,
    limb_lengths,
    parse_pose_sequence,
    resample_sequence,
    serialize_pose_sequence,
    smooth_sequence,
)
from .session import (
    AudioSource,
    SessionCommand,
    SessionState,
    TickOutput,
    apply_command,
    initial_state,
    snapshot,
    tick,
)
from .skeleton import CANONICAL_SKELETON, DEFAULT_EMPHASIZED_JOINTS, Skeleton, canonical_skeleton
from .timeline import (
    BeatGrid,
    EightCountSegment,
    build_beat_grid,
    locate,
    segment_eight_counts,
    time_to_frame,
)

__version__ = "0.1.0"

__all__ = [
    "ALLOWED_RATES",
    "AffordanceMode",
    "AffordanceTrack",
    "AudioSource",
    "AudioTrack",
    "BeatGrid",
    "BundleError",
    "BundleManifest",
    "CANONICAL_SKELETON",
    "CountTrackSpec",
    "DEFAULT_EMPHASIZED_JOINTS",
    "EightCountSegment",
    "LearningBundle",
    "PoseFormatError",
    "PoseFrame",
    "PoseSequence",
    "RetargetTransform",
    "SessionCommand",
    "SessionState",
    "SilentTrackError",
    "Skeleton",
    "TickOutput",
    "UserCalibration",
    "apply_command",
    "assemble_bundle",
    "build_beat_grid",
    "calibrate_user",
    "canonical_skeleton",
    "compute_retarget",
    "generate_affordance_track",
    "identity_transform",
    "initial_state",
    "limb_lengths",
    "locate",
    "measure_rms",
    "mix",
    "normalize_rms",
    "parse_pose_sequence",
    "read_bundle",
    "read_wav",
    "reference_calibration",
    "render_at_rate",
    "resample_sequence",
    "retarget_pose",
    "segment_eight_counts",
    "serialize_pose_sequence",
    "silence",
    "smooth_sequence",
    "snapshot",
    "synthesize_count_track",
    "tick",
    "time_to_frame",
    "trim",
    "validate_bundle",
    "write_bundle",
    "write_wav",
]
