"""FastAPI teleop bridge: REST inspection endpoints plus the /teleop socket.

One simulation-tick driver per connected client broadcasts state frames at
the configured rate; the reader coroutine handles inbound control frames.
States may be dropped for a slow client, recorded frames never are.
"""

from __future__ import annotations

import asyncio
import logging
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from ..playdata.dataset import load_dataset, validate_dataset
from ..playdata.episode import EpisodeFormatError
from ..sim.scene import SceneConfig
from .models import (
    ActionFrame,
    EpisodeInfo,
    EpisodeListResponse,
    ErrorFrame,
    HealthResponse,
    HelloFrame,
    RecordStoppedFrame,
    SceneResponse,
    StateFrame,
    ValidateRequest,
    ValidateResponse,
)
from .session import TeleopSession

logger = logging.getLogger(__name__)

OUTBOUND_QUEUE_SIZE = 8


def create_app(
    scene: SceneConfig | None = None,
    data_root: str | Path = "teleop_data",
    tick_interval: float | None = None,
) -> FastAPI:
    """App factory; tick_interval defaults to 1/hz (tests may accelerate)."""
    sc = scene or SceneConfig()
    interval = (1.0 / sc.hz) if tick_interval is None else tick_interval
    app = FastAPI(title="playclone teleop bridge")
    app.state.scene = sc
    app.state.data_root = Path(data_root)
    app.state.session = None

    @app.get("/health", response_model=HealthResponse)
    def health():
        session: TeleopSession | None = app.state.session
        return HealthResponse(
            session_active=session is not None,
            recording=bool(session and session.recording),
        )

    @app.get("/scene", response_model=SceneResponse)
    def scene_info():
        return SceneResponse.from_scene(sc)

    @app.get("/episodes", response_model=EpisodeListResponse)
    def episodes():
        root = app.state.data_root
        infos: list[EpisodeInfo] = []
        if (root / "manifest.txt").exists():
            ds = load_dataset(root)
            for e in ds.entries:
                infos.append(
                    EpisodeInfo(
                        path=str(root / e.path),
                        frames=e.frames,
                        source=e.source,
                        duration_s=e.frames / sc.hz,
                    )
                )
        return EpisodeListResponse(root=str(root), episodes=infos)

    @app.post("/validate", response_model=ValidateResponse)
    def validate(req: ValidateRequest):
        try:
            totals = validate_dataset(req.path)
            return ValidateResponse(ok=True, frames_by_source=totals)
        except (EpisodeFormatError, FileNotFoundError, OSError) as exc:
            return ValidateResponse(ok=False, error=f"{type(exc).__name__}: {exc}")

    @app.websocket("/teleop")
    async def teleop(ws: WebSocket):
        await ws.accept()
        if app.state.session is not None:
            await ws.send_text(ErrorFrame(message="session busy").model_dump_json())
            await ws.close(code=1008)
            return
        session = TeleopSession(sc, app.state.data_root)
        app.state.session = session
        outbound: asyncio.Queue[str] = asyncio.Queue(maxsize=OUTBOUND_QUEUE_SIZE)

        def queue_state(payload: str) -> None:
            # drop the oldest state frame rather than stall the tick driver
            while True:
                try:
                    outbound.put_nowait(payload)
                    return
                except asyncio.QueueFull:
                    try:
                        outbound.get_nowait()
                    except asyncio.QueueEmpty:
                        pass

        async def tick_driver():
            while True:
                obs = session.step()
                frame = StateFrame(
                    tick=session.tick, obs=list(obs), recording=session.recording
                )
                queue_state(frame.model_dump_json())
                await asyncio.sleep(interval)

        async def sender():
            while True:
                await ws.send_text(await outbound.get())

        await ws.send_text(
            HelloFrame(scene=SceneResponse.from_scene(sc), hz=sc.hz).model_dump_json()
        )
        ticker = asyncio.create_task(tick_driver())
        pump = asyncio.create_task(sender())
        try:
            while True:
                msg = await ws.receive_json()
                kind = msg.get("type")
                try:
                    if kind == "action":
                        session.submit_action(ActionFrame(**msg).act)
                    elif kind == "reset":
                        session.reset(msg.get("seed"))
                    elif kind == "record_start":
                        session.record_start()
                    elif kind == "record_stop":
                        path, frames = session.record_stop()
                        await ws.send_text(
                            RecordStoppedFrame(
                                episode_path=str(path), frames=frames
                            ).model_dump_json()
                        )
                    else:
                        await ws.send_text(
                            ErrorFrame(message=f"unknown frame type {kind!r}").model_dump_json()
                        )
                except (ValueError, RuntimeError) as exc:
                    await ws.send_text(ErrorFrame(message=str(exc)).model_dump_json())
        except WebSocketDisconnect:
            if session.recording:
                path, frames = session.record_stop(truncated=True)
                logger.warning(
                    "client left mid-recording; saved %d frames to %s", frames, path
                )
        finally:
            ticker.cancel()
            pump.cancel()
            app.state.session = None

    return app
