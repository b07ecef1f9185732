"""Gateway HTTP endpoints, live WebSocket sessions, and outgoing QoS."""

from __future__ import annotations

import io
import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from dancekit.affordance import AffordanceMode
from dancekit.bundle import write_bundle
from dancekit.motion import PoseFrame, limb_lengths
from dancekit.protocol import (
    CalibrationFinishMessage,
    CalibrationFrameMessage,
    CalibrationStartMessage,
    CommandMessage,
    ErrorMessage,
    FrameMessage,
    StateUpdateMessage,
    UserPoseMessage,
    decode_server,
    encode_client,
)
from dancekit.server import GatewayConfig, _Outbox, create_app
from dancekit.session import SessionCommand
from dancekit.skeleton import CANONICAL_SKELETON as SK

from conftest import rest_pose


@pytest.fixture(scope="module")
def bundle_root(tmp_path_factory):
    root = tmp_path_factory.mktemp("bundles")
    # Build the fixture bundle once for the whole module (module-scoped
    # because assembling + writing costs a couple of seconds).
    from conftest import sine_track, swaying_pose_positions
    from dancekit.bundle import assemble_bundle
    from dancekit.motion import PoseSequence

    song = sine_track(8.0)
    pose = PoseSequence(skeleton=SK, fps=30.0, positions=swaying_pose_positions(240, 30.0))
    bundle = assemble_bundle(song, pose, bpm=120.0, title="fixture")
    write_bundle(bundle, root / "fixture")
    return root


@pytest.fixture(scope="module")
def client(bundle_root):
    app = create_app(GatewayConfig(bundle_root=bundle_root))
    with TestClient(app) as c:
        yield c


def recv(ws):
    return decode_server(ws.receive_text())


def recv_until(ws, cls, limit: int = 400):
    """Read until a message of type cls arrives; fail after ``limit`` reads."""
    for _ in range(limit):
        msg = recv(ws)
        if isinstance(msg, cls):
            return msg
        assert not isinstance(msg, ErrorMessage), f"unexpected error: {msg}"
    raise AssertionError(f"no {cls.__name__} within {limit} messages")


class TestHttp:
    def test_list_bundles(self, client):
        doc = client.get("/bundles").json()
        assert doc["bundles"][0]["id"] == "fixture"
        assert doc["bundles"][0]["segment_count"] == 2

    def test_manifest(self, client):
        doc = client.get("/bundles/fixture/manifest").json()
        assert doc["bpm"] == 120.0
        assert doc["format_version"] == 1
        assert len(doc["segments"]) == 2

    def test_manifest_unknown_404(self, client):
        assert client.get("/bundles/ghost/manifest").status_code == 404

    def test_audio_variants(self, client):
        from scipy.io import wavfile

        for variant in ("mixed", "music", "beat"):
            resp = client.get(f"/bundles/fixture/audio/{variant}")
            assert resp.status_code == 200
            rate, data = wavfile.read(io.BytesIO(resp.content))
            assert rate == 48_000
            assert len(data) == 8 * 48_000

    def test_audio_rate_variant_duration(self, client):
        from scipy.io import wavfile

        resp = client.get("/bundles/fixture/audio/mixed", params={"rate": 0.5})
        rate, data = wavfile.read(io.BytesIO(resp.content))
        assert len(data) == pytest.approx(2 * 8 * 48_000, abs=2)

    def test_audio_bad_rate_400(self, client):
        assert client.get("/bundles/fixture/audio/mixed", params={"rate": 2.0}).status_code == 400

    def test_audio_unknown_variant_404(self, client):
        assert client.get("/bundles/fixture/audio/vocals").status_code == 404

    def test_motion_document(self, client):
        doc = client.get("/bundles/fixture/motion").json()
        assert len(doc["reference"]["frames"]) == 240
        assert doc["affordance"]["mode"] == "full_body"
        assert len(doc["affordance"]["frames"]) == 240

    def test_cors_headers_for_browser_ui(self, client):
        resp = client.get("/bundles", headers={"Origin": "http://localhost:5173"})
        assert resp.headers.get("access-control-allow-origin") == "*"

    def test_unreadable_bundle_skipped_in_listing(self, client, bundle_root):
        broken = bundle_root / "broken"
        broken.mkdir(exist_ok=True)
        (broken / "manifest.json").write_text("{not json")
        doc = client.get("/bundles").json()
        assert [b["id"] for b in doc["bundles"]] == ["fixture"]


class TestSession:
    def test_initial_state_update(self, client):
        with client.websocket_connect("/session/fixture") as ws:
            first = recv(ws)
            assert isinstance(first, StateUpdateMessage)
            assert first.snapshot["position_s"] == 0.0
            assert first.snapshot["playing"] is False

    def test_frames_flow_while_paused(self, client):
        with client.websocket_connect("/session/fixture") as ws:
            recv_until(ws, StateUpdateMessage)
            frame = recv_until(ws, FrameMessage)
            assert frame.position_s == 0.0
            assert len(frame.affordance_positions) == 24

    def test_play_thirty_ticks_reaches_one_second(self, client):
        with client.websocket_connect("/session/fixture") as ws:
            recv_until(ws, StateUpdateMessage)
            ws.send_text(encode_client(CommandMessage(SessionCommand("play"))))
            recv_until(ws, StateUpdateMessage)  # ack of the play command
            moving = 0
            last = None
            while moving < 30:
                msg = recv(ws)
                if isinstance(msg, FrameMessage) and msg.position_s > 0:
                    moving += 1
                    last = msg
            assert last.position_s == pytest.approx(1.0, abs=1.0 / 30 + 1e-9)
            ws.send_text(encode_client(CommandMessage(SessionCommand("pause"))))
            update = recv_until(ws, StateUpdateMessage)
            assert update.snapshot["playing"] is False

    def test_bad_rate_gets_error_and_state_unchanged(self, client):
        with client.websocket_connect("/session/fixture") as ws:
            recv_until(ws, StateUpdateMessage)
            ws.send_text(encode_client(CommandMessage(SessionCommand("set_rate", rate=2.0))))
            for _ in range(200):
                msg = recv(ws)
                if isinstance(msg, ErrorMessage):
                    assert msg.code == "rate-not-allowed"
                    break
            else:
                raise AssertionError("no error message")
            ws.send_text(encode_client(CommandMessage(SessionCommand("pause"))))
            update = recv_until(ws, StateUpdateMessage)
            assert update.snapshot["rate"] == 1.0

    def test_calibration_round_trip(self, client):
        scaled = np.empty_like(rest_pose())
        base = rest_pose()
        for i in SK.topological_order():
            p = int(SK.parent_indices[i])
            scaled[i] = base[i] if p < 0 else scaled[p] + 1.5 * (base[i] - base[p])
        with client.websocket_connect("/session/fixture") as ws:
            recv_until(ws, StateUpdateMessage)
            ws.send_text(encode_client(CalibrationStartMessage()))
            for _ in range(30):
                ws.send_text(encode_client(CalibrationFrameMessage(PoseFrame(t=0.0, positions=scaled))))
            ws.send_text(encode_client(CalibrationFinishMessage()))
            result = None
            for _ in range(400):
                msg = recv(ws)
                if hasattr(msg, "bone_lengths"):
                    result = msg
                    break
                assert not isinstance(msg, ErrorMessage), msg
            assert result is not None
            assert len(result.bone_lengths) == 23
            assert result.frames_used == 30
            # Affordance positions now carry the learner's proportions.
            frame = recv_until(ws, FrameMessage)
            lengths = limb_lengths(
                PoseFrame(t=0.0, positions=np.asarray(frame.affordance_positions)), SK
            )
            for child, expected in result.bone_lengths.items():
                assert lengths[child] == pytest.approx(expected, abs=1e-6)

    def test_user_pose_stream_accepted(self, client):
        with client.websocket_connect("/session/fixture") as ws:
            recv_until(ws, StateUpdateMessage)
            for _ in range(5):
                ws.send_text(encode_client(UserPoseMessage(PoseFrame(t=0.0, positions=rest_pose()))))
            # Still alive and ticking.
            assert isinstance(recv_until(ws, FrameMessage), FrameMessage)

    def test_malformed_message_gets_error_not_disconnect(self, client):
        with client.websocket_connect("/session/fixture") as ws:
            recv_until(ws, StateUpdateMessage)
            ws.send_text("{nope")
            for _ in range(200):
                msg = recv(ws)
                if isinstance(msg, ErrorMessage):
                    assert msg.code == "bad-message"
                    break
            else:
                raise AssertionError("no error message")
            assert isinstance(recv_until(ws, FrameMessage), FrameMessage)

    def test_unknown_bundle_error_connection_open(self, client):
        with client.websocket_connect("/session/ghost") as ws:
            msg = recv(ws)
            assert isinstance(msg, ErrorMessage)
            assert msg.code == "unknown-bundle"
            ws.send_text(encode_client(CommandMessage(SessionCommand("play"))))
            again = recv(ws)
            assert isinstance(again, ErrorMessage)

    def test_two_sessions_no_cross_talk(self, client):
        with client.websocket_connect("/session/fixture") as a, client.websocket_connect("/session/fixture") as b:
            recv_until(a, StateUpdateMessage)
            recv_until(b, StateUpdateMessage)
            a.send_text(encode_client(CommandMessage(SessionCommand("set_rate", rate=0.5))))
            a.send_text(encode_client(CommandMessage(SessionCommand("toggle_music"))))
            a.send_text(encode_client(CommandMessage(SessionCommand("play"))))
            b.send_text(encode_client(CommandMessage(SessionCommand("seek_segment", segment=1))))
            update_b = recv_until(b, StateUpdateMessage)
            assert update_b.snapshot["selected_segment"] == 1
            assert update_b.snapshot["playing"] is False
            assert update_b.snapshot["rate"] == 1.0
            assert update_b.snapshot["music_on"] is True
            moving = recv_until(a, FrameMessage)
            for _ in range(200):
                if moving.position_s > 0:
                    break
                moving = recv_until(a, FrameMessage)
            assert moving.position_s > 0
            frame_b = recv_until(b, FrameMessage)
            assert frame_b.position_s == pytest.approx(4.0, abs=1e-9)


class TestOutboxQos:
    def test_frames_drop_oldest_first(self):
        box = _Outbox(frame_limit=5)
        for i in range(9):
            box.put_frame(
                FrameMessage(
                    position_s=float(i),
                    reference_frame=i,
                    affordance_frame=i,
                    segment=0,
                    count=1,
                    phase=0.0,
                    wrapped=False,
                    audio_source="mixed",
                    affordance_positions=(),
                )
            )
        kept = [box.pop().position_s for _ in range(5)]
        assert kept == [4.0, 5.0, 6.0, 7.0, 8.0]
        assert box.pop() is None

    def test_control_never_dropped_and_served_first(self):
        box = _Outbox(frame_limit=2)
        for i in range(50):
            box.put_control(ErrorMessage(code=f"e{i}"))
        box.put_frame(
            FrameMessage(
                position_s=0.0,
                reference_frame=0,
                affordance_frame=0,
                segment=0,
                count=1,
                phase=0.0,
                wrapped=False,
                audio_source="mixed",
                affordance_positions=(),
            )
        )
        codes = []
        while True:
            msg = box.pop()
            if msg is None or isinstance(msg, FrameMessage):
                break
            codes.append(msg.code)
        assert codes == [f"e{i}" for i in range(50)]
