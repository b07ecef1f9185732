"""Shared fixtures: synthetic song, synthetic pose sequence, built bundle."""

from __future__ import annotations

import math

import numpy as np
import pytest

from dancekit.audio import AudioTrack
from dancekit.bundle import assemble_bundle
from dancekit.motion import PoseSequence
from dancekit.skeleton import CANONICAL_SKELETON

# Rough rest pose: plausible positive bone lengths so retargeting and
# calibration have something realistic to chew on.
_REST_OFFSETS = {
    "pelvis": (0.0, 0.9, 0.0),
    "left_hip": (0.1, -0.05, 0.0),
    "right_hip": (-0.1, -0.05, 0.0),
    "spine1": (0.0, 0.12, 0.0),
    "left_knee": (0.0, -0.4, 0.0),
    "right_knee": (0.0, -0.4, 0.0),
    "spine2": (0.0, 0.13, 0.0),
    "left_ankle": (0.0, -0.4, 0.0),
    "right_ankle": (0.0, -0.4, 0.0),
    "spine3": (0.0, 0.13, 0.0),
    "left_foot": (0.0, -0.05, 0.12),
    "right_foot": (0.0, -0.05, 0.12),
    "neck": (0.0, 0.1, 0.0),
    "left_collar": (0.07, 0.03, 0.0),
    "right_collar": (-0.07, 0.03, 0.0),
    "head": (0.0, 0.12, 0.0),
    "left_shoulder": (0.1, 0.0, 0.0),
    "right_shoulder": (-0.1, 0.0, 0.0),
    "left_elbow": (0.28, 0.0, 0.0),
    "right_elbow": (-0.28, 0.0, 0.0),
    "left_wrist": (0.25, 0.0, 0.0),
    "right_wrist": (-0.25, 0.0, 0.0),
    "left_hand": (0.09, 0.0, 0.0),
    "right_hand": (-0.09, 0.0, 0.0),
}


def rest_pose() -> np.ndarray:
    """(24, 3) rest pose built by accumulating offsets down the tree."""
    sk = CANONICAL_SKELETON
    pos = np.zeros((len(sk.joints), 3))
    for i in sk.topological_order():
        p = int(sk.parent_indices[i])
        offset = np.array(_REST_OFFSETS[sk.joints[i]])
        pos[i] = offset if p < 0 else pos[p] + offset
    return pos


def swaying_pose_positions(n_frames: int, fps: float) -> np.ndarray:
    """A rest pose swaying side to side and bobbing, (T, 24, 3)."""
    base = rest_pose()
    t = np.arange(n_frames) / fps
    out = np.repeat(base[None, :, :], n_frames, axis=0)
    out[:, :, 0] += 0.2 * np.sin(2 * math.pi * 0.5 * t)[:, None]
    out[:, :, 1] += 0.05 * np.sin(2 * math.pi * 1.0 * t)[:, None]
    return out


def sine_track(duration_s: float, freq_hz: float = 220.0, amplitude: float = 0.5, sample_rate: int = 48_000) -> AudioTrack:
    n = int(round(duration_s * sample_rate))
    t = np.arange(n) / sample_rate
    return AudioTrack(sample_rate=sample_rate, samples=amplitude * np.sin(2 * math.pi * freq_hz * t))


def detect_click_onsets(track: AudioTrack, threshold: float = 0.01, min_gap: int = 96) -> np.ndarray:
    """Sample indices where click bursts begin, by amplitude threshold.

    A burst starts where a sample exceeds the threshold after at least
    ``min_gap`` quiet samples (zero crossings inside a burst are far shorter
    than the silence between clicks). A burst's first sample is sin(0) = 0,
    so activity appears one sample in; the index just before it is reported.
    """
    active = np.abs(track.samples) > threshold
    if not active.any():
        return np.zeros(0, dtype=np.int64)
    rising = np.flatnonzero(active[1:] & ~active[:-1]) + 1
    if active[0]:
        rising = np.concatenate([[0], rising])
    falling = np.flatnonzero(~active[1:] & active[:-1])  # last sample of a run
    if falling.size == 0:
        return np.maximum(rising - 1, 0)
    # Gap between each rising edge and the end of the previous active run.
    n_before = np.searchsorted(falling, rising)
    prev_end = falling[np.maximum(n_before - 1, 0)]
    gap = np.where(n_before > 0, rising - prev_end, min_gap + 1)
    onsets = rising[gap > min_gap]
    return np.maximum(onsets - 1, 0)


@pytest.fixture
def skeleton():
    return CANONICAL_SKELETON


@pytest.fixture
def fixture_song() -> AudioTrack:
    """8 s sine 'song' at 48 kHz."""
    return sine_track(8.0)


@pytest.fixture
def fixture_pose() -> PoseSequence:
    """240-frame synthetic choreography at 30 fps (8 s)."""
    return PoseSequence(skeleton=CANONICAL_SKELETON, fps=30.0, positions=swaying_pose_positions(240, 30.0))


@pytest.fixture
def fixture_bundle(fixture_song, fixture_pose):
    """The standard test bundle: 8 s at 120 bpm -> two full 8-counts."""
    return assemble_bundle(fixture_song, fixture_pose, bpm=120.0, title="fixture")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion."""
    results: dict[str, str] = {}
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" in nodeid and getattr(report, "when", "call") in ("call", "setup"):
                name = nodeid.split("::")[-1]
                # A later failure (teardown) must not overwrite a FAIL.
                if results.get(name) != "FAIL":
                    results[name] = "PASS" if outcome == "passed" else "FAIL"
    if not results:
        return
    try:
        from test_acceptance import CRITERIA
    except ImportError:
        CRITERIA = {}
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, status in results.items():
        label = CRITERIA.get(name, name)
        terminalreporter.write_line(f"{status}  {label}")
