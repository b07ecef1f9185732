"""HTTP + WebSocket gateway serving bundles and live learning sessions.

One WebSocket connection is one session. A receiver task decodes client
messages into a per-session inbox; the tick loop (single writer for all
session state) drains the inbox, applies commands, advances the engine at
the session fps using monotonic-clock deadlines, and emits one Frame per
tick. Outgoing traffic has two QoS classes: StateUpdate / CalibrationResult
/ Error messages are never dropped, while Frame messages overflow
oldest-first when a client cannot keep up.

Live user pose frames are EMA-smoothed on arrival. After a calibration
round, the retarget transform is recomputed from the learner's measured
bone lengths and applied to every outgoing affordance frame.
"""

from __future__ import annotations

import asyncio
import io
import json
import os
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import Response
from scipy.io import wavfile

from . import protocol
from .affordance import DegenerateCalibrationError, RetargetTransform, calibrate_user, compute_retarget, reference_calibration, retarget_pose
from .audio import ALLOWED_RATES, AudioTrack, render_at_rate
from .bundle import LearningBundle, read_bundle
from .motion import PoseFrame, smooth_frame
from .session import SessionCommand, SessionState, apply_command, initial_state, snapshot, tick

BUNDLE_ROOT_ENV = "DANCEKIT_BUNDLE_ROOT"

AUDIO_VARIANTS = ("mixed", "music", "beat")


@dataclass(frozen=True)
class GatewayConfig:
    bundle_root: Path
    session_fps: float = 30.0
    smoothing_alpha: float = 0.5
    frame_queue_limit: int = 30


class BundleStore:
    """Read-only view of a directory of bundle subdirectories."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self._cache: dict[str, LearningBundle] = {}
        self._audio_cache: dict[tuple[str, str, float], bytes] = {}

    def ids(self) -> list[str]:
        if not self.root.is_dir():
            return []
        return sorted(p.name for p in self.root.iterdir() if (p / "manifest.json").is_file())

    def get(self, bundle_id: str) -> LearningBundle | None:
        if bundle_id not in self._cache:
            if "/" in bundle_id or bundle_id in ("", ".", ".."):
                return None
            path = self.root / bundle_id
            if not (path / "manifest.json").is_file():
                return None
            self._cache[bundle_id] = read_bundle(path)
        return self._cache[bundle_id]

    def audio_wav(self, bundle_id: str, variant: str, rate: float) -> bytes | None:
        """Rate-rendered WAV bytes, cached per (bundle, variant, rate)."""
        key = (bundle_id, variant, rate)
        if key not in self._audio_cache:
            bundle = self.get(bundle_id)
            if bundle is None:
                return None
            track: AudioTrack = {
                "mixed": bundle.mixed_audio,
                "music": bundle.music_audio,
                "beat": bundle.beat_audio,
            }[variant]
            rendered = render_at_rate(track, rate)
            buf = io.BytesIO()
            wavfile.write(buf, rendered.sample_rate, rendered.samples.astype(np.float32))
            self._audio_cache[key] = buf.getvalue()
        return self._audio_cache[key]


def create_app(config: GatewayConfig) -> FastAPI:
    app = FastAPI(title="dancekit gateway")
    # The studio UI is typically served from another local origin.
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["GET"], allow_headers=["*"])
    store = BundleStore(config.bundle_root)
    app.state.config = config
    app.state.store = store

    @app.get("/bundles")
    def list_bundles() -> dict:
        bundles = []
        for bundle_id in store.ids():
            try:
                bundle = store.get(bundle_id)
            except Exception:
                continue  # an unreadable bundle must not break the listing
            if bundle is None:
                continue
            m = bundle.manifest
            bundles.append(
                {
                    "id": bundle_id,
                    "title": m.title,
                    "bpm": m.bpm,
                    "duration_s": m.duration_s,
                    "segment_count": len(m.segments),
                }
            )
        return {"bundles": bundles}

    @app.get("/bundles/{bundle_id}/manifest")
    def get_manifest(bundle_id: str) -> dict:
        bundle = _get_or_404(store, bundle_id)
        return bundle.manifest.to_dict()

    @app.get("/bundles/{bundle_id}/audio/{variant}")
    def get_audio(bundle_id: str, variant: str, rate: float = 1.0) -> Response:
        if variant not in AUDIO_VARIANTS:
            raise HTTPException(status_code=404, detail=f"unknown variant {variant!r}")
        if rate not in ALLOWED_RATES:
            raise HTTPException(status_code=400, detail=f"rate {rate} not in allowed set {ALLOWED_RATES}")
        _get_or_404(store, bundle_id)
        wav = store.audio_wav(bundle_id, variant, rate)
        assert wav is not None
        return Response(content=wav, media_type="audio/wav")

    @app.get("/bundles/{bundle_id}/motion")
    def get_motion(bundle_id: str) -> Response:
        bundle = _get_or_404(store, bundle_id)
        root = store.root / bundle_id
        reference = json.loads((root / bundle.manifest.assets["pose"]).read_text())
        affordance = json.loads((root / bundle.manifest.assets["affordance"]).read_text())
        return Response(
            content=json.dumps({"reference": reference, "affordance": affordance}),
            media_type="application/json",
        )

    @app.websocket("/session/{bundle_id}")
    async def session_stream(ws: WebSocket, bundle_id: str) -> None:
        await ws.accept()
        try:
            bundle = store.get(bundle_id)
        except Exception as exc:  # unreadable bundle directory
            bundle = None
            detail = str(exc)
        else:
            detail = f"no bundle named {bundle_id!r}"
        if bundle is None:
            # Per-connection error; the connection stays open so the client
            # can read the reason instead of seeing a bare close.
            try:
                await ws.send_text(protocol.encode_server(protocol.ErrorMessage("unknown-bundle", detail)))
                while True:
                    await ws.receive_text()
                    await ws.send_text(protocol.encode_server(protocol.ErrorMessage("unknown-bundle", detail)))
            except WebSocketDisconnect:
                return
        session = _Session(ws, bundle_id, bundle, config)
        await session.run()

    return app


def app_from_env() -> FastAPI:
    """App factory for `uvicorn dancekit.server:app_from_env --factory`."""
    root = os.environ.get(BUNDLE_ROOT_ENV, ".")
    return create_app(GatewayConfig(bundle_root=Path(root)))


def _get_or_404(store: BundleStore, bundle_id: str) -> LearningBundle:
    try:
        bundle = store.get(bundle_id)
    except Exception as exc:
        raise HTTPException(status_code=500, detail=f"bundle unreadable: {exc}") from exc
    if bundle is None:
        raise HTTPException(status_code=404, detail=f"no bundle named {bundle_id!r}")
    return bundle


@dataclass
class _Outbox:
    """Two QoS classes: control messages are never dropped, frames are
    bounded and overflow oldest-first."""

    frame_limit: int
    control: deque = field(default_factory=deque)
    frames: deque = field(init=False)
    wake: asyncio.Event = field(default_factory=asyncio.Event)

    def __post_init__(self) -> None:
        self.frames = deque(maxlen=self.frame_limit)

    def put_control(self, msg: protocol.ServerMessage) -> None:
        self.control.append(msg)
        self.wake.set()

    def put_frame(self, msg: protocol.FrameMessage) -> None:
        self.frames.append(msg)  # deque(maxlen) drops the oldest
        self.wake.set()

    def pop(self) -> protocol.ServerMessage | None:
        if self.control:
            return self.control.popleft()
        if self.frames:
            return self.frames.popleft()
        return None


class _Session:
    """State owned by one WebSocket connection."""

    def __init__(self, ws: WebSocket, bundle_id: str, bundle: LearningBundle, config: GatewayConfig):
        self.ws = ws
        self.bundle = bundle
        self.config = config
        self.state: SessionState = initial_state(bundle, bundle_id)
        self.inbox: asyncio.Queue = asyncio.Queue()
        self.outbox = _Outbox(frame_limit=config.frame_queue_limit)
        self.transform: RetargetTransform | None = None
        self.calibration_frames: list[PoseFrame] | None = None
        self.ema_prev: np.ndarray | None = None
        self.latest_user_pose: np.ndarray | None = None

    async def run(self) -> None:
        self.outbox.put_control(protocol.StateUpdateMessage(snapshot(self.state, self.bundle)))
        receiver = asyncio.create_task(self._receive_loop())
        ticker = asyncio.create_task(self._tick_loop())
        sender = asyncio.create_task(self._send_loop())
        try:
            await receiver
        finally:
            ticker.cancel()
            sender.cancel()
            for task in (ticker, sender):
                try:
                    await task
                except (asyncio.CancelledError, Exception):
                    pass

    async def _receive_loop(self) -> None:
        while True:
            try:
                text = await self.ws.receive_text()
            except WebSocketDisconnect:
                return
            try:
                msg = protocol.decode_client(text)
            except protocol.ProtocolError as exc:
                self.outbox.put_control(protocol.ErrorMessage("bad-message", str(exc)))
                continue
            await self.inbox.put(msg)

    async def _tick_loop(self) -> None:
        fps = self.config.session_fps
        period = 1.0 / fps
        loop = asyncio.get_running_loop()
        deadline = loop.time() + period
        while True:
            delay = deadline - loop.time()
            if delay > 0:
                await asyncio.sleep(delay)
            try:
                self._drain_inbox()
                self.state, out = tick(self.state, period, self.bundle)
                self.outbox.put_frame(protocol.frame_message(out, self._affordance_positions(out)))
            except asyncio.CancelledError:
                raise
            except Exception as exc:
                # Surface instead of dying silently; the session stops ticking.
                self.outbox.put_control(protocol.ErrorMessage("internal-error", repr(exc)))
                raise
            deadline += period
            if loop.time() - deadline > 0.25:
                # Badly stalled; resynchronize instead of bursting ticks.
                deadline = loop.time() + period

    async def _send_loop(self) -> None:
        while True:
            msg = self.outbox.pop()
            if msg is None:
                self.outbox.wake.clear()
                await self.outbox.wake.wait()
                continue
            await self.ws.send_text(protocol.encode_server(msg))

    def _drain_inbox(self) -> None:
        while True:
            try:
                msg = self.inbox.get_nowait()
            except asyncio.QueueEmpty:
                return
            self._handle(msg)

    def _handle(self, msg: protocol.ClientMessage) -> None:
        if isinstance(msg, protocol.CommandMessage):
            try:
                self.state = apply_command(self.state, msg.command, self.bundle)
            except ValueError as exc:
                self.outbox.put_control(protocol.ErrorMessage(_error_code(msg.command), str(exc)))
                return
            self.outbox.put_control(protocol.StateUpdateMessage(snapshot(self.state, self.bundle)))
        elif isinstance(msg, protocol.UserPoseMessage):
            self.ema_prev = smooth_frame(self.ema_prev, msg.frame.positions, self.config.smoothing_alpha)
            self.latest_user_pose = self.ema_prev
        elif isinstance(msg, protocol.CalibrationStartMessage):
            self.calibration_frames = []
        elif isinstance(msg, protocol.CalibrationFrameMessage):
            if self.calibration_frames is None:
                self.outbox.put_control(
                    protocol.ErrorMessage("calibration-error", "calibration_frame before calibration_start")
                )
            else:
                self.calibration_frames.append(msg.frame)
        elif isinstance(msg, protocol.CalibrationFinishMessage):
            frames, self.calibration_frames = self.calibration_frames, None
            if frames is None:
                self.outbox.put_control(
                    protocol.ErrorMessage("calibration-error", "calibration_finish before calibration_start")
                )
                return
            try:
                calibration = calibrate_user(frames, self.bundle.pose.skeleton)
                self.transform = compute_retarget(reference_calibration(self.bundle.pose), calibration)
            except (ValueError, DegenerateCalibrationError) as exc:
                self.outbox.put_control(protocol.ErrorMessage("calibration-error", str(exc)))
                return
            self.outbox.put_control(
                protocol.CalibrationResultMessage(
                    bone_lengths=dict(calibration.bone_lengths),
                    root_reference=tuple(float(c) for c in calibration.root_reference),
                    frames_used=calibration.frames_used,
                )
            )

    def _affordance_positions(self, out) -> np.ndarray:
        if self.transform is None:
            return self.bundle.affordance.positions[out.affordance_frame]
        frame = self.bundle.pose.frame(out.reference_frame)
        return retarget_pose(frame, self.transform, self.bundle.pose.skeleton).positions


def _error_code(command: SessionCommand) -> str:
    if command.kind == "set_rate":
        return "rate-not-allowed"
    if command.kind in ("seek_segment", "next_segment", "prev_segment"):
        return "segment-out-of-range"
    return "bad-command"
