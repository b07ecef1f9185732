"""Shared synthetic inputs for the demo scripts: a sine "song" and a
procedurally swaying reference dance."""

from __future__ import annotations

import math

import numpy as np

from dancekit import CANONICAL_SKELETON, AudioTrack, PoseSequence

REST_OFFSETS = {
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
    sk = CANONICAL_SKELETON
    pos = np.zeros((24, 3))
    for i in sk.topological_order():
        p = int(sk.parent_indices[i])
        offset = np.array(REST_OFFSETS[sk.joints[i]])
        pos[i] = offset if p < 0 else pos[p] + offset
    return pos


def demo_song(duration_s: float = 8.0, sample_rate: int = 48_000) -> AudioTrack:
    """Two detuned sines with a slow tremolo, quiet enough to mix safely."""
    t = np.arange(int(round(duration_s * sample_rate))) / sample_rate
    tone = 0.35 * np.sin(2 * math.pi * 220.0 * t) + 0.15 * np.sin(2 * math.pi * 277.18 * t)
    tremolo = 0.8 + 0.2 * np.sin(2 * math.pi * 0.5 * t)
    return AudioTrack(sample_rate=sample_rate, samples=tone * tremolo)


def demo_dance(duration_s: float = 8.0, fps: float = 30.0) -> PoseSequence:
    """The rest pose swaying, bobbing, and waving its arms to a 120 bpm feel."""
    n = int(round(duration_s * fps))
    t = np.arange(n) / fps
    base = rest_pose()
    pos = np.repeat(base[None, :, :], n, axis=0)
    beat = 2.0  # beats per second at 120 bpm
    pos[:, :, 0] += 0.25 * np.sin(math.pi * beat / 2 * t)[:, None]
    pos[:, :, 1] += 0.04 * np.abs(np.sin(math.pi * beat * t))[:, None]
    sk = CANONICAL_SKELETON
    for side, sign in (("left", 1.0), ("right", -1.0)):
        for name, amp in ((f"{side}_elbow", 0.08), (f"{side}_wrist", 0.18), (f"{side}_hand", 0.22)):
            j = sk.index_of(name)
            pos[:, j, 1] += amp * np.sin(2 * math.pi * beat / 4 * t + sign * math.pi / 2)
    return PoseSequence(skeleton=sk, fps=fps, positions=pos)
