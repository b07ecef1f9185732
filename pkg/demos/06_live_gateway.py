"""Full loop over a real socket: serve a bundle, join a session over
WebSocket, calibrate from a replayed pose stream, and practice.

Run:  python3 demos/06_live_gateway.py
"""

import threading
import time
from pathlib import Path

import httpx
import uvicorn
from websockets.sync.client import connect

from dancekit import assemble_bundle, write_bundle
from dancekit.protocol import CommandMessage, decode_server, encode_client
from dancekit.replay import ReplayPoseSource
from dancekit.server import GatewayConfig, create_app
from dancekit.session import SessionCommand

from common import demo_dance, demo_song

PORT = 8765

root = Path("demo_output") / "bundles"
root.mkdir(parents=True, exist_ok=True)
pose = demo_dance()
bundle_dir = root / "demo-groove"
if not (bundle_dir / "manifest.json").exists():
    write_bundle(assemble_bundle(demo_song(), pose, bpm=120.0, title="demo groove"), bundle_dir)

server = uvicorn.Server(uvicorn.Config(create_app(GatewayConfig(bundle_root=root)), port=PORT, log_level="warning"))
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.05)

base = f"http://127.0.0.1:{PORT}"
print("bundles on the server:", httpx.get(f"{base}/bundles").json())
manifest = httpx.get(f"{base}/bundles/demo-groove/manifest").json()
print(f"manifest: {manifest['title']} at {manifest['bpm']} bpm, {len(manifest['segments'])} sections")
wav = httpx.get(f"{base}/bundles/demo-groove/audio/beat", params={"rate": 0.5})
print(f"beat track at half speed: {len(wav.content)} WAV bytes")

replay = ReplayPoseSource(pose)
with connect(f"ws://127.0.0.1:{PORT}/session/demo-groove") as ws:
    print("\njoined session:", decode_server(ws.recv()).snapshot["bundle_id"])

    # Calibrate "the learner" from the replayed stream, then start practice.
    for msg in replay.calibration_messages(frames=30):
        ws.send(encode_client(msg))
    ws.send(encode_client(CommandMessage(SessionCommand("play"))))

    frames_seen = 0
    while frames_seen < 45:
        msg = decode_server(ws.recv())
        if hasattr(msg, "bone_lengths"):
            print(f"calibrated: {len(msg.bone_lengths)} bone lengths from {msg.frames_used} frames")
        if hasattr(msg, "count") and msg.position_s > 0:
            frames_seen += 1
            if frames_seen % 15 == 0:
                print(f"  live frame: pos={msg.position_s:.3f} s count={msg.count} "
                      f"source={msg.audio_source.value}")
    ws.send(encode_client(CommandMessage(SessionCommand("pause"))))

server.should_exit = True
thread.join(timeout=5)
print("done")
