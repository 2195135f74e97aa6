import json

import numpy as np
import pytest
from starlette.testclient import TestClient

from playclone.playdata import Episode, load_dataset, load_episode
from playclone.server import TeleopSession, append_episode, create_app
from playclone.sim.scene import SceneConfig


@pytest.fixture
def client(tmp_path):
    app = create_app(data_root=tmp_path / "teleop", tick_interval=0.001)
    with TestClient(app) as c:
        yield c


def recv_until(ws, frame_type, limit=500):
    for _ in range(limit):
        msg = json.loads(ws.receive_text())
        if msg["type"] == frame_type:
            return msg
    raise AssertionError(f"no {frame_type!r} frame within {limit} messages")


def test_health_and_scene(client):
    h = client.get("/health").json()
    assert h == {"status": "ok", "session_active": False, "recording": False}
    s = client.get("/scene").json()
    assert s["hz"] == 30
    assert len(s["button_centers"]) == 3


def test_episodes_empty_before_any_recording(client, tmp_path):
    body = client.get("/episodes").json()
    assert body["episodes"] == []


def test_validate_endpoint(client, tmp_path):
    root = tmp_path / "ds"
    ep = Episode(obs=np.zeros((4, 19)), act=np.zeros((4, 8)), source="human")
    append_episode(root, ep)
    ok = client.post("/validate", json={"path": str(root)}).json()
    assert ok["ok"] is True and ok["frames_by_source"] == {"human": 4}
    bad = client.post("/validate", json={"path": str(tmp_path / "nope")}).json()
    assert bad["ok"] is False and "FileNotFoundError" in bad["error"]


def test_teleop_record_session(client, tmp_path):
    """Scripted client: hello, reset, record 60 paced actions, stop, verify."""
    with client.websocket_connect("/teleop") as ws:
        hello = json.loads(ws.receive_text())
        assert hello["type"] == "hello" and hello["hz"] == 30
        ws.send_json({"type": "reset", "seed": 4})
        ws.send_json({"type": "record_start"})
        state = recv_until(ws, "state")
        start_tick = state["tick"]
        sent = 0
        while True:
            state = json.loads(ws.receive_text())
            if state["type"] != "state":
                continue
            if state["recording"] and sent < 60:
                ws.send_json({"type": "action", "act": [0.01] * 8})
                sent += 1
            if state["tick"] >= start_tick + 70:
                break
        ws.send_json({"type": "record_stop"})
        stopped = recv_until(ws, "record_stopped")
        assert stopped["frames"] > 0
    ep = load_episode(stopped["episode_path"])
    assert ep.source == "human"
    assert not ep.truncated
    assert len(ep) == stopped["frames"]
    listing = client.get("/episodes").json()
    assert len(listing["episodes"]) == 1
    assert listing["episodes"][0]["frames"] == stopped["frames"]


def test_second_connection_rejected(client):
    with client.websocket_connect("/teleop") as ws1:
        recv_until(ws1, "hello")
        with client.websocket_connect("/teleop") as ws2:
            msg = json.loads(ws2.receive_text())
            assert msg["type"] == "error" and "busy" in msg["message"]


def test_disconnect_mid_recording_truncates(client, tmp_path):
    with client.websocket_connect("/teleop") as ws:
        recv_until(ws, "hello")
        ws.send_json({"type": "record_start"})
        recv_until(ws, "state")
        ws.send_json({"type": "action", "act": [0.0] * 8})
        recv_until(ws, "state")
        # context exit disconnects without record_stop
    ds = load_dataset(tmp_path / "teleop")
    assert len(ds) == 1
    assert ds.load(0).truncated
    # the session slot is free again
    with client.websocket_connect("/teleop") as ws:
        recv_until(ws, "hello")


def test_bad_frames_report_errors(client):
    with client.websocket_connect("/teleop") as ws:
        recv_until(ws, "hello")
        ws.send_json({"type": "action", "act": [1.0] * 3})
        err = recv_until(ws, "error")
        assert "8" in err["message"]
        ws.send_json({"type": "record_stop"})
        err = recv_until(ws, "error")
        assert "recording" in err["message"]
        ws.send_json({"type": "warp_drive"})
        err = recv_until(ws, "error")
        assert "unknown" in err["message"]


def test_session_unit_behavior(tmp_path):
    sess = TeleopSession(SceneConfig(), tmp_path / "d", seed=1)
    with pytest.raises(ValueError):
        sess.submit_action([np.nan] * 8)
    sess.record_start()
    sess.submit_action([0.02] * 8)
    for _ in range(5):
        sess.step()
    path, frames = sess.record_stop()
    assert frames == 5
    ep = load_episode(path)
    np.testing.assert_array_equal(ep.act, np.tile(np.full(8, 0.02), (5, 1)))
