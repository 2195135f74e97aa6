"""Autonomous (cloned) play generation: unroll the play-cloning policy from
teleported resets drawn uniformly over the frames of a source dataset."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..playdata.dataset import Dataset, DatasetWriter
from ..playdata.episode import Episode
from ..sim.scene import EnvState, InvalidStateError, SceneConfig
from ..sim.simulator import Simulator
from .policy import PolicyBundle, PolicyStepper

log = logging.getLogger(__name__)


@dataclass
class CloneConfig:
    episodes: int = 600
    minutes: float = 1.0
    temperature: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.minutes <= 0:
            raise ValueError("episode duration must be positive")
        if self.episodes < 0:
            raise ValueError("episode count must be >= 0")


class _FrameIndex:
    """Uniform-over-frames access to a dataset's observations."""

    def __init__(self, dataset: Dataset):
        self.obs = [ep.obs for ep in dataset.iter_episodes()]
        counts = np.array([o.shape[0] for o in self.obs])
        self.cum = np.cumsum(counts)
        self.total = int(self.cum[-1]) if len(counts) else 0

    def draw(self, rng: np.random.Generator) -> np.ndarray:
        flat = int(rng.integers(0, self.total))
        ep = int(np.searchsorted(self.cum, flat, side="right"))
        offset = flat - (self.cum[ep - 1] if ep > 0 else 0)
        return self.obs[ep][offset].copy()


def generate_cloned_play(
    bundle: PolicyBundle,
    source: Dataset,
    cfg: CloneConfig,
    out_dir: str | Path,
    scene: SceneConfig | None = None,
) -> Dataset:
    """Roll the Play-BC policy for cfg.episodes episodes of cfg.minutes each.

    Per episode: teleport the environment to a random source frame, zero the
    recurrent state, then sample actions at the configured temperature.
    """
    if bundle.goal_conditioned:
        raise ValueError("cloned play requires a non-goal-conditioned policy")
    sc = scene or SceneConfig()
    frames = _FrameIndex(source)
    if cfg.episodes > 0 and frames.total == 0:
        raise ValueError("initial-state source dataset is empty")
    n_ticks = int(round(cfg.minutes * 60 * sc.hz))
    writer = DatasetWriter(out_dir)
    ep_idx = 0
    attempts = 0
    while ep_idx < cfg.episodes:
        ss = np.random.SeedSequence(entropy=(cfg.seed, attempts))
        rng = np.random.default_rng(ss)
        attempts += 1
        start_vec = frames.draw(rng)
        try:
            initial = EnvState.from_vector(start_vec)
            env = Simulator(sc)
            state = env.reset(initial)
        except (InvalidStateError, ValueError) as e:
            log.warning("skipping invalid teleport state: %s", e)
            continue
        stepper = PolicyStepper(bundle, temperature=cfg.temperature)
        stepper.reset()
        obs = np.empty((n_ticks, 19))
        act = np.empty((n_ticks, 8))
        for t in range(n_ticks):
            obs[t] = state.to_vector()
            a = stepper.act(state, rng)
            act[t] = a
            state = env.step(a)
        writer.add_episode(
            Episode(obs=obs, act=act, source="cloned", seed=cfg.seed, hz=sc.hz)
        )
        ep_idx += 1
    return writer.finalize()
