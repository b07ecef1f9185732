"""Mono audio: count-track synthesis, RMS normalization, mixing, trimming,
and rate-changed rendering.

Samples are float32 in [-1, 1]. Every operation hard-clips its output to
that range and records how many samples clipped on the returned track
(``clipped``, informational metadata excluded from equality). Rate change
is plain linear-interpolation resampling, so pitch shifts with speed; the
session's beat-only playback covers slowed practice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.io import wavfile

DEFAULT_SAMPLE_RATE = 48_000

# Playback rates the session offers.
ALLOWED_RATES: tuple[float, ...] = (0.5, 0.75, 1.0)

# RMS at or below this is treated as silence, not quiet audio.
SILENCE_RMS = 1e-6

# Peak amplitude of a regular click; the accent click is this times the
# spec's accent_gain, clipped to full scale.
_CLICK_PEAK = 0.8


class SilentTrackError(ValueError):
    """Raised when an operation needs signal but the input is silent."""


@dataclass(frozen=True)
class AudioTrack:
    """Mono PCM audio: float32 samples in [-1, 1] at an integer sample rate."""

    sample_rate: int
    samples: np.ndarray = field(repr=False)
    clipped: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        if int(self.sample_rate) != self.sample_rate or self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be a positive integer, got {self.sample_rate}")
        samples = np.asarray(self.samples, dtype=np.float32).reshape(-1)
        if not np.isfinite(samples).all():
            raise ValueError("samples must be finite")
        if samples.size and float(np.abs(samples).max()) > 1.0:
            raise ValueError("samples must lie in [-1, 1]")
        object.__setattr__(self, "sample_rate", int(self.sample_rate))
        object.__setattr__(self, "samples", samples)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AudioTrack):
            return NotImplemented
        return self.sample_rate == other.sample_rate and np.array_equal(self.samples, other.samples)

    def __len__(self) -> int:
        return int(self.samples.size)

    @property
    def duration_s(self) -> float:
        return len(self) / self.sample_rate


def silence(duration_s: float, sample_rate: int = DEFAULT_SAMPLE_RATE) -> AudioTrack:
    """An all-zero track of round(duration_s * sample_rate) samples."""
    n = int(round(duration_s * sample_rate))
    return AudioTrack(sample_rate=sample_rate, samples=np.zeros(n, dtype=np.float32))


@dataclass(frozen=True)
class CountTrackSpec:
    """Parameters of the synthesized count track.

    Clicks fall every 60/bpm seconds; the click opening each cycle of
    ``cycle_length`` beats uses the accent tone and gain.
    """

    bpm: float
    duration_s: float
    cycle_length: int = 8
    accent_gain: float = 1.25
    tone_hz_accent: float = 880.0
    tone_hz_regular: float = 440.0
    click_length_s: float = 0.04

    def __post_init__(self) -> None:
        if self.bpm <= 0:
            raise ValueError("bpm must be > 0")
        if self.duration_s < 0:
            raise ValueError("duration_s must be >= 0")
        if self.cycle_length < 1:
            raise ValueError("cycle_length must be >= 1")
        if not 0.0 < self.click_length_s < 60.0 / self.bpm:
            raise ValueError("click_length_s must be positive and shorter than one beat")


def synthesize_count_track(spec: CountTrackSpec, sample_rate: int = DEFAULT_SAMPLE_RATE) -> AudioTrack:
    """Render the click track described by ``spec``.

    Click k starts at t = k * 60/bpm for every t < duration_s; each click is
    a sine burst of click_length_s with a linear fade to zero. Output length
    is round(duration_s * sample_rate) samples.
    """
    if sample_rate <= 0:
        raise ValueError("sample_rate must be > 0")
    n_total = int(round(spec.duration_s * sample_rate))
    out = np.zeros(n_total, dtype=np.float64)
    if n_total == 0:
        return AudioTrack(sample_rate=sample_rate, samples=out)

    period = 60.0 / spec.bpm
    n_click = int(round(spec.click_length_s * sample_rate))
    t_click = np.arange(n_click, dtype=np.float64) / sample_rate
    fade = 1.0 - t_click / spec.click_length_s
    accent_amp = min(1.0, _CLICK_PEAK * spec.accent_gain)
    accent = accent_amp * np.sin(2.0 * math.pi * spec.tone_hz_accent * t_click) * fade
    regular = _CLICK_PEAK * np.sin(2.0 * math.pi * spec.tone_hz_regular * t_click) * fade

    k = 0
    while True:
        t_k = k * period
        if t_k >= spec.duration_s:
            break
        start = int(round(t_k * sample_rate))
        if start >= n_total:
            break
        burst = accent if k % spec.cycle_length == 0 else regular
        stop = min(start + n_click, n_total)
        out[start:stop] += burst[: stop - start]
        k += 1

    clipped_out, n_clipped = _clip(out)
    return AudioTrack(sample_rate=sample_rate, samples=clipped_out, clipped=n_clipped)


def measure_rms(track: AudioTrack) -> float:
    """Root mean square of the samples; 0 for an empty track."""
    if len(track) == 0:
        return 0.0
    x = track.samples.astype(np.float64)
    return float(np.sqrt(np.mean(x * x)))


def normalize_rms(track: AudioTrack, target_rms: float) -> AudioTrack:
    """Scale the track so its RMS matches target_rms, then hard-clip.

    If nothing clips the result's RMS equals the target within 1e-6.
    Raises SilentTrackError when the input RMS is at the silence threshold.
    """
    if target_rms <= 0:
        raise ValueError("target_rms must be > 0")
    rms = measure_rms(track)
    if rms <= SILENCE_RMS:
        raise SilentTrackError(f"input RMS {rms:.2e} is below the silence threshold")
    gain = target_rms / rms
    scaled, n_clipped = _clip(track.samples.astype(np.float64) * gain)
    return AudioTrack(sample_rate=track.sample_rate, samples=scaled, clipped=n_clipped)


def mix(a: AudioTrack, b: AudioTrack, b_offset_s: float = 0.0, gain_a: float = 1.0, gain_b: float = 1.0) -> AudioTrack:
    """Sum two tracks with ``b`` delayed by b_offset_s, zero-padding both.

    Output length is max(len(a), round(b_offset_s * rate) + len(b)); the sum
    is hard-clipped to [-1, 1].
    """
    if a.sample_rate != b.sample_rate:
        raise ValueError(f"sample rates differ: {a.sample_rate} vs {b.sample_rate}")
    if b_offset_s < 0:
        raise ValueError("b_offset_s must be >= 0")
    offset = int(round(b_offset_s * a.sample_rate))
    n = max(len(a), offset + len(b))
    out = np.zeros(n, dtype=np.float64)
    out[: len(a)] = gain_a * a.samples.astype(np.float64)
    out[offset : offset + len(b)] += gain_b * b.samples.astype(np.float64)
    samples, n_clipped = _clip(out)
    return AudioTrack(sample_rate=a.sample_rate, samples=samples, clipped=n_clipped)


def trim(track: AudioTrack, start_s: float, end_s: float) -> AudioTrack:
    """Samples in [round(start_s * rate), round(end_s * rate))."""
    if start_s < 0:
        raise ValueError("start_s must be >= 0")
    if end_s <= start_s:
        raise ValueError(f"end_s ({end_s}) must be after start_s ({start_s})")
    if end_s > track.duration_s + 1e-9:
        raise ValueError(f"end_s ({end_s}) exceeds track duration ({track.duration_s:.6f})")
    i0 = int(round(start_s * track.sample_rate))
    i1 = int(round(end_s * track.sample_rate))
    return AudioTrack(sample_rate=track.sample_rate, samples=track.samples[i0:i1].copy())


def render_at_rate(track: AudioTrack, rate: float, allowed_rates: tuple[float, ...] = ALLOWED_RATES) -> AudioTrack:
    """Resample for playback at ``rate`` (0.5 = half speed, duration doubles).

    Output sample j is the input linearly interpolated at position j * rate;
    output length is floor((len - 1) / rate) + 1. Pitch shifts with rate.
    """
    if rate not in allowed_rates:
        raise ValueError(f"rate {rate} not in allowed set {allowed_rates}")
    if rate == 1.0:
        return track
    if len(track) == 0:
        return track
    n_out = int(math.floor((len(track) - 1) / rate)) + 1
    positions = np.arange(n_out, dtype=np.float64) * rate
    out = np.interp(positions, np.arange(len(track), dtype=np.float64), track.samples.astype(np.float64))
    return AudioTrack(sample_rate=track.sample_rate, samples=out)


def read_wav(path: str | Path) -> AudioTrack:
    """Load a WAV file as mono float32; stereo is downmixed by averaging.

    Accepts PCM 8/16/32-bit and float32/float64 data.
    """
    rate, data = wavfile.read(str(path))
    x = np.asarray(data)
    if x.ndim == 2:
        x = x.mean(axis=1)
    if x.dtype == np.int16:
        x = x.astype(np.float64) / 32768.0
    elif x.dtype == np.int32:
        x = x.astype(np.float64) / 2147483648.0
    elif x.dtype == np.uint8:
        x = (x.astype(np.float64) - 128.0) / 128.0
    else:
        x = x.astype(np.float64)
    samples, n_clipped = _clip(x)
    return AudioTrack(sample_rate=int(rate), samples=samples, clipped=n_clipped)


def write_wav(track: AudioTrack, path: str | Path) -> None:
    """Write mono float32 WAV."""
    wavfile.write(str(path), track.sample_rate, track.samples.astype(np.float32))


def _clip(x: np.ndarray) -> tuple[np.ndarray, int]:
    """Hard-clip to [-1, 1]; returns (float32 samples, clipped count)."""
    n_clipped = int(np.count_nonzero((x < -1.0) | (x > 1.0)))
    return np.clip(x, -1.0, 1.0).astype(np.float32), n_clipped
