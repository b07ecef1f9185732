"""Synthesize an 8-count click track, match loudness with a song, and mix.

Run:  python3 demos/01_count_track_and_mixing.py
Writes song.wav / counts.wav / mixed.wav into ./demo_output/.
"""

from pathlib import Path

import numpy as np

from dancekit import CountTrackSpec, measure_rms, mix, normalize_rms, synthesize_count_track, write_wav

from common import demo_song

out_dir = Path("demo_output")
out_dir.mkdir(exist_ok=True)

song = demo_song(duration_s=8.0)
print(f"song: {song.duration_s:.1f} s, RMS {measure_rms(song):.3f}")

# A 120 bpm count track: a click every 0.5 s, the first of each 8 accented
# (higher tone, louder).
spec = CountTrackSpec(bpm=120.0, duration_s=8.0)
counts = synthesize_count_track(spec, song.sample_rate)
onset_times = [k * 60.0 / spec.bpm for k in range(16)]
print(f"counts: {len(onset_times)} clicks at {onset_times[:4]} ... {onset_times[-1]} s")

# Volume-normalize both sides to the same RMS before summing, so neither
# drowns the other.
target = 0.2
song_n = normalize_rms(song, target)
counts_n = normalize_rms(counts, target)
print(f"normalized RMS: song {measure_rms(song_n):.6f}, counts {measure_rms(counts_n):.6f}")

mixed = mix(song_n, counts_n, b_offset_s=0.0)
print(f"mixed: {mixed.duration_s:.1f} s, peak {np.abs(mixed.samples).max():.3f}, clipped {mixed.clipped} samples")

for name, track in (("song", song_n), ("counts", counts_n), ("mixed", mixed)):
    write_wav(track, out_dir / f"{name}.wav")
    print(f"wrote {out_dir / f'{name}.wav'}")
