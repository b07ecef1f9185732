"""Wire format for the live-session stream.

Messages travel as JSON text frames (the transport's own framing delimits
them). Client messages carry learner commands and pose frames; server
messages carry state snapshots, per-tick frames with affordance positions,
calibration results, and errors. Every message round-trips through
encode/decode to an equal value; decode rejects anything malformed with
ProtocolError. The schema is documented in docs/protocol.schema.json.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .affordance import AffordanceMode
from .motion import PoseFrame
from .session import AudioSource, SessionCommand


class ProtocolError(ValueError):
    """Raised when a wire message violates the documented schema."""


# ---------------------------------------------------------------------------
# client -> server


@dataclass(frozen=True)
class CommandMessage:
    command: SessionCommand


@dataclass(frozen=True)
class UserPoseMessage:
    frame: PoseFrame


@dataclass(frozen=True)
class CalibrationStartMessage:
    pass


@dataclass(frozen=True)
class CalibrationFrameMessage:
    frame: PoseFrame


@dataclass(frozen=True)
class CalibrationFinishMessage:
    pass


ClientMessage = Union[
    CommandMessage,
    UserPoseMessage,
    CalibrationStartMessage,
    CalibrationFrameMessage,
    CalibrationFinishMessage,
]


# ---------------------------------------------------------------------------
# server -> client


@dataclass(frozen=True)
class StateUpdateMessage:
    snapshot: dict


@dataclass(frozen=True)
class FrameMessage:
    """One playback tick plus the affordance positions to draw."""

    position_s: float
    reference_frame: int
    affordance_frame: int
    segment: int
    count: int
    phase: float
    wrapped: bool
    audio_source: AudioSource
    affordance_positions: tuple[tuple[float, float, float], ...]


@dataclass(frozen=True)
class CalibrationResultMessage:
    bone_lengths: dict[str, float]
    root_reference: tuple[float, float, float]
    frames_used: int

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CalibrationResultMessage):
            return NotImplemented
        return (
            self.bone_lengths == other.bone_lengths
            and self.root_reference == other.root_reference
            and self.frames_used == other.frames_used
        )


@dataclass(frozen=True)
class ErrorMessage:
    code: str
    detail: str = ""


ServerMessage = Union[StateUpdateMessage, FrameMessage, CalibrationResultMessage, ErrorMessage]


# ---------------------------------------------------------------------------
# encoding


def encode_client(msg: ClientMessage) -> str:
    if isinstance(msg, CommandMessage):
        return json.dumps({"type": "command", "command": _command_to_dict(msg.command)})
    if isinstance(msg, UserPoseMessage):
        return json.dumps({"type": "user_pose", "frame": _frame_to_dict(msg.frame)})
    if isinstance(msg, CalibrationStartMessage):
        return json.dumps({"type": "calibration_start"})
    if isinstance(msg, CalibrationFrameMessage):
        return json.dumps({"type": "calibration_frame", "frame": _frame_to_dict(msg.frame)})
    if isinstance(msg, CalibrationFinishMessage):
        return json.dumps({"type": "calibration_finish"})
    raise ProtocolError(f"not a client message: {type(msg).__name__}")


def decode_client(text: str) -> ClientMessage:
    doc = _load(text)
    kind = doc.get("type")
    if kind == "command":
        return CommandMessage(command=_command_from_dict(_expect(doc, "command", dict)))
    if kind == "user_pose":
        return UserPoseMessage(frame=_frame_from_dict(_expect(doc, "frame", dict)))
    if kind == "calibration_start":
        return CalibrationStartMessage()
    if kind == "calibration_frame":
        return CalibrationFrameMessage(frame=_frame_from_dict(_expect(doc, "frame", dict)))
    if kind == "calibration_finish":
        return CalibrationFinishMessage()
    raise ProtocolError(f"unknown client message type {kind!r}")


def encode_server(msg: ServerMessage) -> str:
    if isinstance(msg, StateUpdateMessage):
        return json.dumps({"type": "state", "snapshot": msg.snapshot})
    if isinstance(msg, FrameMessage):
        return json.dumps(
            {
                "type": "frame",
                "position_s": msg.position_s,
                "reference_frame": msg.reference_frame,
                "affordance_frame": msg.affordance_frame,
                "segment": msg.segment,
                "count": msg.count,
                "phase": msg.phase,
                "wrapped": msg.wrapped,
                "audio_source": msg.audio_source.value,
                "affordance_positions": [list(p) for p in msg.affordance_positions],
            }
        )
    if isinstance(msg, CalibrationResultMessage):
        return json.dumps(
            {
                "type": "calibration_result",
                "bone_lengths": msg.bone_lengths,
                "root_reference": list(msg.root_reference),
                "frames_used": msg.frames_used,
            }
        )
    if isinstance(msg, ErrorMessage):
        return json.dumps({"type": "error", "code": msg.code, "detail": msg.detail})
    raise ProtocolError(f"not a server message: {type(msg).__name__}")


def decode_server(text: str) -> ServerMessage:
    doc = _load(text)
    kind = doc.get("type")
    if kind == "state":
        return StateUpdateMessage(snapshot=_expect(doc, "snapshot", dict))
    if kind == "frame":
        try:
            positions = tuple(
                (float(p[0]), float(p[1]), float(p[2])) for p in doc["affordance_positions"]
            )
            return FrameMessage(
                position_s=float(doc["position_s"]),
                reference_frame=int(doc["reference_frame"]),
                affordance_frame=int(doc["affordance_frame"]),
                segment=int(doc["segment"]),
                count=int(doc["count"]),
                phase=float(doc["phase"]),
                wrapped=bool(doc["wrapped"]),
                audio_source=AudioSource(doc["audio_source"]),
                affordance_positions=positions,
            )
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise ProtocolError(f"bad frame message: {exc}") from exc
    if kind == "calibration_result":
        try:
            root = doc["root_reference"]
            return CalibrationResultMessage(
                bone_lengths={str(k): float(v) for k, v in doc["bone_lengths"].items()},
                root_reference=(float(root[0]), float(root[1]), float(root[2])),
                frames_used=int(doc["frames_used"]),
            )
        except (KeyError, TypeError, ValueError, IndexError, AttributeError) as exc:
            raise ProtocolError(f"bad calibration result: {exc}") from exc
    if kind == "error":
        return ErrorMessage(code=str(doc.get("code", "")), detail=str(doc.get("detail", "")))
    raise ProtocolError(f"unknown server message type {kind!r}")


def frame_message(tick_output, affordance_positions: np.ndarray) -> FrameMessage:
    """Build a FrameMessage from a session TickOutput and a (24, 3) array."""
    return FrameMessage(
        position_s=tick_output.position_s,
        reference_frame=tick_output.reference_frame,
        affordance_frame=tick_output.affordance_frame,
        segment=tick_output.segment,
        count=tick_output.count,
        phase=tick_output.phase,
        wrapped=tick_output.wrapped,
        audio_source=tick_output.audio_source,
        affordance_positions=tuple(tuple(float(c) for c in row) for row in affordance_positions),
    )


# ---------------------------------------------------------------------------
# helpers


def _load(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ProtocolError("message must be a JSON object")
    return doc


def _expect(doc: dict, key: str, cls: type) -> dict:
    value = doc.get(key)
    if not isinstance(value, cls):
        raise ProtocolError(f"field {key!r} must be {cls.__name__}")
    return value


def _command_to_dict(cmd: SessionCommand) -> dict:
    out: dict = {"kind": cmd.kind}
    if cmd.rate is not None:
        out["rate"] = cmd.rate
    if cmd.segment is not None:
        out["segment"] = cmd.segment
    if cmd.time_s is not None:
        out["time_s"] = cmd.time_s
    if cmd.mode is not None:
        out["mode"] = AffordanceMode(cmd.mode).value
    return out


def _command_from_dict(doc: dict) -> SessionCommand:
    try:
        return SessionCommand(
            kind=str(doc["kind"]),
            rate=None if doc.get("rate") is None else float(doc["rate"]),
            segment=None if doc.get("segment") is None else int(doc["segment"]),
            time_s=None if doc.get("time_s") is None else float(doc["time_s"]),
            mode=None if doc.get("mode") is None else AffordanceMode(doc["mode"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ProtocolError(f"bad command: {exc}") from exc


def _frame_to_dict(frame: PoseFrame) -> dict:
    return {"t": frame.t, "positions": frame.positions.tolist()}


def _frame_from_dict(doc: dict) -> PoseFrame:
    try:
        t = float(doc["t"])
        positions = np.asarray(doc["positions"], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise ProtocolError(f"bad pose frame: {exc}") from exc
    if not math.isfinite(t):
        raise ProtocolError("frame time must be finite")
    try:
        return PoseFrame(t=t, positions=positions)
    except ValueError as exc:
        raise ProtocolError(str(exc)) from exc
