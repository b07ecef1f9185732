"""Lay a beat grid over a song and group it into 8-count practice sections.

Run:  python3 demos/02_beat_grid_and_segments.py
"""

from dancekit import build_beat_grid, locate, segment_eight_counts, time_to_frame

# A 100 bpm song, 20 s long, first beat landing 0.3 s in.
grid = build_beat_grid(bpm=100.0, offset_s=0.3, duration_s=20.0)
print(f"{grid.beat_count} beats, one every {grid.beat_period_s:.3f} s")
print("first beats:", [round(float(t), 2) for t in grid.beat_times[:6]])

segments = segment_eight_counts(grid)
print(f"\n{len(segments)} sections:")
for seg in segments:
    kind = "partial" if seg.partial else "full"
    print(f"  section {seg.index}: {seg.start_s:6.2f} .. {seg.end_s:6.2f} s  ({len(seg.beat_indices)} beats, {kind})")

# Where is the dancer at a given moment? locate() drives the progress bar:
# which section, which count (1..8), and how far into the beat.
print("\ntimeline walk:")
for t in (0.0, 0.3, 2.7, 5.1, 10.0, 19.9):
    seg, count, phase = locate(grid, segments, t)
    frame = time_to_frame(t, fps=30.0)
    print(f"  t={t:5.2f} s -> section {seg}, count {count}, phase {phase:.2f}, frame {frame}")
