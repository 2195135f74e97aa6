"""Teleoperation session state: simulator, action mailbox, episode recorder.

The tick driver is the only writer of simulation and recording state; the
client I/O handler only swaps the latest-action mailbox and toggles flags,
so a slow client can never stall the simulation or drop recorded frames.
"""

from __future__ import annotations

import threading
from pathlib import Path

import numpy as np

from ..playdata.dataset import ManifestEntry, load_dataset
from ..playdata.dataset import _write_manifest  # single-package private use
from ..playdata.episode import ACT_DIM, Episode, save_episode
from ..sim.scene import SceneConfig
from ..sim.simulator import Simulator, sample_rest_state


class SessionBusyError(RuntimeError):
    """Only one teleop client may be connected at a time."""


def append_episode(root: str | Path, episode: Episode) -> Path:
    """Add one episode to a dataset directory, creating it if needed."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    entries: list[ManifestEntry] = []
    if (root / "manifest.txt").exists():
        entries = list(load_dataset(root).entries)
    name = f"episode_{len(entries):05d}.play"
    save_episode(episode, root / name)
    entries.append(ManifestEntry(name, len(episode), episode.source))
    _write_manifest(root, entries)
    return root / name


class TeleopSession:
    """One connected operator driving the simulator at the server tick rate."""

    def __init__(self, scene: SceneConfig, data_root: str | Path, seed: int = 0):
        self.scene = scene
        self.data_root = Path(data_root)
        self.sim = Simulator(scene)
        self.tick = 0
        self.recording = False
        self._mailbox = np.zeros(ACT_DIM)
        self._lock = threading.Lock()
        self._obs_buf: list[np.ndarray] = []
        self._act_buf: list[np.ndarray] = []
        self._episode_seed = seed
        self.reset(seed)

    def reset(self, seed: int | None = None) -> np.ndarray:
        rng = np.random.default_rng(np.random.SeedSequence(0 if seed is None else seed))
        state = self.sim.reset(initial=sample_rest_state(self.scene, rng))
        self.tick = 0
        with self._lock:
            self._mailbox = np.zeros(ACT_DIM)
        return state.to_vector()

    def submit_action(self, act: list[float] | np.ndarray) -> None:
        act = np.asarray(act, dtype=float)
        if act.shape != (ACT_DIM,):
            raise ValueError(f"action must have {ACT_DIM} coordinates")
        if not np.all(np.isfinite(act)):
            raise ValueError("action must be finite")
        with self._lock:
            self._mailbox = act

    def step(self) -> np.ndarray:
        """One simulation tick: zero-order hold of the latest client action."""
        with self._lock:
            act = self._mailbox.copy()
        obs = self.sim.observe().to_vector()
        if self.recording:
            self._obs_buf.append(obs)
            self._act_buf.append(act)
        state = self.sim.step(act)
        self.tick += 1
        return state.to_vector()

    def record_start(self) -> None:
        self._obs_buf = []
        self._act_buf = []
        self.recording = True

    def record_stop(self, truncated: bool = False) -> tuple[Path, int]:
        """Finalize the buffered episode; returns (path, frame count)."""
        if not self.recording:
            raise RuntimeError("no recording in progress")
        self.recording = False
        if not self._obs_buf:
            raise RuntimeError("recording holds no frames")
        episode = Episode(
            obs=np.stack(self._obs_buf),
            act=np.stack(self._act_buf),
            source="human",
            seed=self._episode_seed,
            hz=self.scene.hz,
            truncated=truncated,
        )
        path = append_episode(self.data_root, episode)
        self._obs_buf = []
        self._act_buf = []
        return path, len(episode)
