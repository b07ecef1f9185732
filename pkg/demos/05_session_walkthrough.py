"""Drive a learning session by hand: commands in, deterministic ticks out.

Run:  python3 demos/05_session_walkthrough.py
"""

from dancekit import SessionCommand, apply_command, assemble_bundle, initial_state, tick

from common import demo_dance, demo_song

bundle = assemble_bundle(demo_song(), demo_dance(), bpm=120.0, title="demo groove")
state = initial_state(bundle, "demo")


def cmd(s, kind, **kwargs):
    s = apply_command(s, SessionCommand(kind, **kwargs), bundle)
    print(f"  -> {kind:22s} pos={s.position_s:5.2f} rate={s.rate} repeat={s.repeat} "
          f"segment={s.selected_segment} source={s.audio_source.value}")
    return s


print("a learner's first minute:")
state = cmd(state, "seek_segment", segment=1)   # jump to the second 8-count
state = cmd(state, "set_rate", rate=0.5)        # half speed while learning
state = cmd(state, "toggle_music")              # beat only: hear the counts
state = cmd(state, "toggle_repeat")             # loop this section
state = cmd(state, "play")

print("\nticking at 30 fps (half speed, looping section 1):")
for i in range(1, 241):
    state, out = tick(state, 1.0 / 30.0, bundle)
    if i % 48 == 0 or out.wrapped:
        marker = "WRAP" if out.wrapped else "    "
        print(f"  tick {i:3d} {marker} pos={out.position_s:6.3f} count={out.count} "
              f"phase={out.phase:.2f} frame={out.reference_frame}")

print("\nback to full speed with music for a run-through:")
state = cmd(state, "set_rate", rate=1.0)
state = cmd(state, "toggle_music")
state = cmd(state, "toggle_repeat")
for i in range(1, 121):
    state, out = tick(state, 1.0 / 30.0, bundle)
print(f"after 120 more ticks: pos={state.position_s:.2f} s, playing={state.playing}")
