"""Beat grid and 8-count segmentation.

Choreography is practiced in 8-beat sections, so the timeline groups the
beat grid (bpm + offset of the first beat) into consecutive 8-count
segments and converts between time, beat index, frame index, and segment.
Audio before the first beat belongs to no segment; lookups there clamp to
the start of segment 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

BEATS_PER_SEGMENT = 8


@dataclass(frozen=True)
class BeatGrid:
    """Beat timestamps offset_s + k * 60/bpm for every time < duration_s."""

    bpm: float
    offset_s: float
    duration_s: float
    beat_times: np.ndarray = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.bpm <= 0:
            raise ValueError("bpm must be > 0")
        if not 0.0 <= self.offset_s < self.duration_s:
            raise ValueError(
                f"offset_s must lie in [0, duration_s): offset={self.offset_s}, duration={self.duration_s}"
            )
        period = 60.0 / self.bpm
        n = int(math.ceil((self.duration_s - self.offset_s) / period))
        times = self.offset_s + np.arange(max(n, 1), dtype=np.float64) * period
        while times.size and times[-1] >= self.duration_s:
            times = times[:-1]
        object.__setattr__(self, "beat_times", times)

    @property
    def beat_period_s(self) -> float:
        return 60.0 / self.bpm

    @property
    def beat_count(self) -> int:
        return int(self.beat_times.size)


@dataclass(frozen=True)
class EightCountSegment:
    """One learning section: up to 8 consecutive beats of the grid."""

    index: int
    start_s: float
    end_s: float
    beat_indices: tuple[int, ...]
    partial: bool

    def __post_init__(self) -> None:
        if self.start_s >= self.end_s:
            raise ValueError("segment must have start_s < end_s")
        if not self.beat_indices:
            raise ValueError("segment must contain at least one beat")
        if len(self.beat_indices) > BEATS_PER_SEGMENT:
            raise ValueError("segment cannot contain more than 8 beats")
        if not self.partial and len(self.beat_indices) != BEATS_PER_SEGMENT:
            raise ValueError("full segments contain exactly 8 beats")


def build_beat_grid(bpm: float, offset_s: float, duration_s: float) -> BeatGrid:
    """Validate the inputs and lay out the beat times."""
    return BeatGrid(bpm=bpm, offset_s=offset_s, duration_s=duration_s)


def segment_eight_counts(grid: BeatGrid) -> list[EightCountSegment]:
    """Group consecutive beats 8 at a time into ordered, disjoint segments.

    Each segment starts at its first beat; it ends where the next segment
    starts, or at the grid duration for the last one. The trailing segment
    is flagged partial when the grid truncates it, either in beat count
    (< 8 beats) or in time span (< 8 beat periods before duration_s).
    """
    times = grid.beat_times
    segments: list[EightCountSegment] = []
    full_span = BEATS_PER_SEGMENT * grid.beat_period_s
    for seg_index, first in enumerate(range(0, times.size, BEATS_PER_SEGMENT)):
        last = min(first + BEATS_PER_SEGMENT, times.size)
        start = float(times[first])
        if last < times.size:
            end = float(times[last])
        else:
            end = grid.duration_s
        partial = (last - first) < BEATS_PER_SEGMENT or (end - start) < full_span - 1e-9
        segments.append(
            EightCountSegment(
                index=seg_index,
                start_s=start,
                end_s=end,
                beat_indices=tuple(range(first, last)),
                partial=partial,
            )
        )
    return segments


def locate(grid: BeatGrid, segments: list[EightCountSegment], t: float) -> tuple[int, int, float]:
    """(segment index, count 1-8, beat phase in [0, 1)) at time t.

    t must lie in [0, grid.duration_s). Times before the first beat clamp
    to segment 0, count 1, phase 0 (pre-roll convention).
    """
    if not 0.0 <= t < grid.duration_s:
        raise ValueError(f"t={t} outside [0, {grid.duration_s})")
    if not segments:
        raise ValueError("no segments")
    if t < grid.offset_s:
        return 0, 1, 0.0
    beat = int(math.floor((t - grid.offset_s) / grid.beat_period_s))
    beat = min(max(beat, 0), grid.beat_count - 1)
    # Nudge against the actual beat times so t exactly on a beat lands on it.
    if beat + 1 < grid.beat_count and t >= grid.beat_times[beat + 1]:
        beat += 1
    elif beat > 0 and t < grid.beat_times[beat]:
        beat -= 1
    count = 1 + beat % BEATS_PER_SEGMENT
    phase = (t - float(grid.beat_times[beat])) / grid.beat_period_s
    phase = min(max(phase, 0.0), math.nextafter(1.0, 0.0))
    seg_index = min(beat // BEATS_PER_SEGMENT, len(segments) - 1)
    return seg_index, count, phase


def time_to_frame(t: float, fps: float) -> int:
    """floor(t * fps)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if fps <= 0:
        raise ValueError("fps must be > 0")
    return int(math.floor(t * fps))
