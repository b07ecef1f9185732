"""Replay pose source: streams a recorded pose-JSON as if it were a live
learner, so end-to-end sessions run without a webcam or estimator."""

from __future__ import annotations

from pathlib import Path
from typing import Iterator

from .motion import PoseSequence, parse_pose_sequence
from .protocol import CalibrationFinishMessage, CalibrationFrameMessage, CalibrationStartMessage, ClientMessage, UserPoseMessage
from .skeleton import CANONICAL_SKELETON


class ReplayPoseSource:
    """Iterates a pose sequence as user-pose client messages.

    ``calibration_messages`` yields a full calibration round from the first
    frames; ``pose_messages`` yields the live stream (optionally looped).
    """

    def __init__(self, seq: PoseSequence):
        self.seq = seq

    @classmethod
    def from_file(cls, path: str | Path) -> "ReplayPoseSource":
        return cls(parse_pose_sequence(Path(path).read_bytes(), CANONICAL_SKELETON))

    def calibration_messages(self, frames: int = 30) -> Iterator[ClientMessage]:
        frames = min(frames, len(self.seq))
        yield CalibrationStartMessage()
        for i in range(frames):
            yield CalibrationFrameMessage(frame=self.seq.frame(i))
        yield CalibrationFinishMessage()

    def pose_messages(self, loop: bool = False) -> Iterator[ClientMessage]:
        while True:
            for i in range(len(self.seq)):
                yield UserPoseMessage(frame=self.seq.frame(i))
            if not loop:
                return
