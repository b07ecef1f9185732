"""Assemble a complete learning bundle and round-trip it through disk.

Run:  python3 demos/04_build_a_bundle.py
Writes the bundle into ./demo_output/eight_counts.bundle/.
"""

from pathlib import Path

from dancekit import assemble_bundle, read_bundle, validate_bundle, write_bundle

from common import demo_dance, demo_song

song = demo_song(duration_s=8.0)
pose = demo_dance(duration_s=8.0)

# One call runs the whole content pipeline: trim, count-track synthesis,
# loudness matching, mixing, pose resampling, affordance generation, and
# 8-count segmentation.
bundle = assemble_bundle(song, pose, bpm=120.0, title="demo groove")
m = bundle.manifest
print(f"'{m.title}': {m.duration_s:.1f} s at {m.bpm:g} bpm")
print(f"sections: {[(s.index, s.start_s, s.end_s) for s in m.segments]}")
print(f"audio variants: mixed/music/beat, {bundle.mixed_audio.duration_s:.1f} s each")
print(f"motion: {len(bundle.pose)} frames at {m.fps:g} fps, affordance mode {m.affordance_mode_default.value}")

dest = Path("demo_output") / "eight_counts.bundle"
write_bundle(bundle, dest, overwrite=True)
print(f"\nwrote {dest}")
for path in sorted(dest.rglob("*")):
    if path.is_file():
        print(f"  {path.relative_to(dest)}  ({path.stat().st_size} bytes)")

again = read_bundle(dest)
print(f"\nreloaded: deep-equal={again.pose == bundle.pose and again.mixed_audio == bundle.mixed_audio}")
print(f"validation violations: {validate_bundle(again) or 'none'}")
