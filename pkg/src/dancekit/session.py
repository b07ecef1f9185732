"""Deterministic playback state machine for a learning session.

The engine is wall-clock-free: callers feed explicit dt values into
``tick`` and commands into ``apply_command``, both pure functions from
(state, input, bundle) to new values. Replaying the same script therefore
reproduces the same states bit for bit, which is what the tests rely on.

Repeat semantics: with a selected segment, repeat loops that segment;
otherwise it loops the whole piece. Without repeat, playback auto-advances
the selection across segment boundaries and pauses at the end.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from .affordance import AffordanceMode
from .audio import ALLOWED_RATES
from .bundle import LearningBundle
from .timeline import build_beat_grid, locate, time_to_frame

# Largest dt a single tick will integrate; longer stalls are absorbed.
MAX_TICK_DT_S = 1.0

COMMAND_KINDS = (
    "play",
    "pause",
    "set_rate",
    "toggle_repeat",
    "toggle_music",
    "toggle_beat",
    "seek_segment",
    "next_segment",
    "prev_segment",
    "seek_time",
    "set_affordance_mode",
)


class AudioSource(str, enum.Enum):
    """Which pre-rendered variant the client should play."""

    MIXED = "mixed"
    MUSIC = "music"
    BEAT = "beat"
    SILENT = "silent"


@dataclass(frozen=True)
class SessionState:
    bundle_id: str
    position_s: float = 0.0
    playing: bool = False
    rate: float = 1.0
    repeat: bool = False
    music_on: bool = True
    beat_on: bool = True
    selected_segment: int | None = None
    affordance_mode: AffordanceMode = AffordanceMode.FULL_BODY

    @property
    def audio_source(self) -> AudioSource:
        if self.music_on and self.beat_on:
            return AudioSource.MIXED
        if self.music_on:
            return AudioSource.MUSIC
        if self.beat_on:
            return AudioSource.BEAT
        return AudioSource.SILENT


@dataclass(frozen=True)
class SessionCommand:
    """One learner action; ``kind`` is one of COMMAND_KINDS and the optional
    fields carry its argument."""

    kind: str
    rate: float | None = None
    segment: int | None = None
    time_s: float | None = None
    mode: AffordanceMode | None = None

    def __post_init__(self) -> None:
        if self.kind not in COMMAND_KINDS:
            raise ValueError(f"unknown command kind {self.kind!r}")


@dataclass(frozen=True)
class TickOutput:
    position_s: float
    reference_frame: int
    affordance_frame: int
    segment: int
    count: int
    phase: float
    wrapped: bool
    audio_source: AudioSource


def initial_state(bundle: LearningBundle, bundle_id: str) -> SessionState:
    return SessionState(
        bundle_id=bundle_id,
        affordance_mode=bundle.manifest.affordance_mode_default,
    )


def apply_command(state: SessionState, command: SessionCommand, bundle: LearningBundle) -> SessionState:
    """Pure state transition for one command.

    Raises ValueError for a rate outside the allowed set or a segment index
    out of range; everything else is total.
    """
    m = bundle.manifest
    kind = command.kind
    if kind == "play":
        return replace(state, playing=True)
    if kind == "pause":
        return replace(state, playing=False)
    if kind == "set_rate":
        if command.rate not in ALLOWED_RATES:
            raise ValueError(f"rate {command.rate} not in allowed set {ALLOWED_RATES}")
        return replace(state, rate=float(command.rate))
    if kind == "toggle_repeat":
        return replace(state, repeat=not state.repeat)
    if kind == "toggle_music":
        return replace(state, music_on=not state.music_on)
    if kind == "toggle_beat":
        return replace(state, beat_on=not state.beat_on)
    if kind == "seek_segment":
        index = command.segment
        if index is None or not 0 <= index < len(m.segments):
            raise ValueError(f"segment {index} out of range (bundle has {len(m.segments)})")
        return replace(state, position_s=m.segments[index].start_s, selected_segment=index)
    if kind in ("next_segment", "prev_segment"):
        current = state.selected_segment
        if current is None:
            current = _segment_at(state.position_s, bundle)
        step = 1 if kind == "next_segment" else -1
        index = min(max(current + step, 0), len(m.segments) - 1)
        return replace(state, position_s=m.segments[index].start_s, selected_segment=index)
    if kind == "seek_time":
        if command.time_s is None:
            raise ValueError("seek_time needs time_s")
        return replace(state, position_s=min(max(command.time_s, 0.0), m.duration_s))
    if kind == "set_affordance_mode":
        if command.mode is None:
            raise ValueError("set_affordance_mode needs mode")
        return replace(state, affordance_mode=AffordanceMode(command.mode))
    raise ValueError(f"unknown command kind {kind!r}")  # pragma: no cover


def tick(state: SessionState, dt: float, bundle: LearningBundle) -> tuple[SessionState, TickOutput]:
    """Advance playback by dt seconds of wall time (scaled by the rate).

    dt is clamped to MAX_TICK_DT_S to absorb caller stalls. With repeat and
    a selected segment the position wraps inside that segment; without
    repeat the selection auto-advances and the bundle end pauses playback
    (or wraps to the start when repeat is on with no selection).
    """
    if dt < 0:
        raise ValueError("dt must be >= 0")
    m = bundle.manifest
    dt = min(dt, MAX_TICK_DT_S)
    position = state.position_s
    playing = state.playing
    selected = state.selected_segment
    wrapped = False

    if playing:
        position = position + dt * state.rate
        if state.repeat and selected is not None:
            seg = m.segments[selected]
            span = seg.end_s - seg.start_s
            if not seg.start_s <= position < seg.end_s:
                position = seg.start_s + (position - seg.start_s) % span
                wrapped = True
        elif position >= m.duration_s:
            if state.repeat:
                position = position % m.duration_s
                wrapped = True
            else:
                position = m.duration_s
                playing = False
                if selected is not None:
                    selected = len(m.segments) - 1
        elif selected is not None:
            # Keep the selection on the segment being played.
            selected = _segment_at(position, bundle)

    new_state = replace(state, position_s=position, playing=playing, selected_segment=selected)
    return new_state, _tick_output(new_state, bundle, wrapped)


def snapshot(state: SessionState, bundle: LearningBundle) -> dict:
    """Serializable client view: state, current segment, timeline summary."""
    m = bundle.manifest
    out = _tick_output(state, bundle, wrapped=False)
    return {
        "bundle_id": state.bundle_id,
        "position_s": state.position_s,
        "playing": state.playing,
        "rate": state.rate,
        "repeat": state.repeat,
        "music_on": state.music_on,
        "beat_on": state.beat_on,
        "selected_segment": state.selected_segment,
        "affordance_mode": state.affordance_mode.value,
        "audio_source": state.audio_source.value,
        "duration_s": m.duration_s,
        "fps": m.fps,
        "current_segment": out.segment,
        "count": out.count,
        "phase": out.phase,
        "segments": [
            {
                "index": seg.index,
                "start_s": seg.start_s,
                "end_s": seg.end_s,
                "partial": seg.partial,
            }
            for seg in m.segments
        ],
    }


def _segment_at(position_s: float, bundle: LearningBundle) -> int:
    m = bundle.manifest
    t = min(max(position_s, 0.0), math.nextafter(m.duration_s, 0.0))
    grid = build_beat_grid(m.bpm, m.offset_s, m.duration_s)
    seg, _, _ = locate(grid, list(m.segments), t)
    return seg


def _tick_output(state: SessionState, bundle: LearningBundle, wrapped: bool) -> TickOutput:
    m = bundle.manifest
    t = min(max(state.position_s, 0.0), math.nextafter(m.duration_s, 0.0))
    grid = build_beat_grid(m.bpm, m.offset_s, m.duration_s)
    seg, count, phase = locate(grid, list(m.segments), t)
    frame = min(time_to_frame(t, m.fps), len(bundle.pose) - 1)
    affordance_frame = min(frame, len(bundle.affordance) - 1)
    return TickOutput(
        position_s=state.position_s,
        reference_frame=frame,
        affordance_frame=affordance_frame,
        segment=seg,
        count=count,
        phase=phase,
        wrapped=wrapped,
        audio_source=state.audio_source,
    )
