"""Play collection: roll a data-generating policy in the simulator and write
standard episode files plus a primitive-transition sidecar for the oracle."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from ..playdata.dataset import Dataset, DatasetWriter
from ..playdata.episode import Episode
from ..sim.scene import SceneConfig
from ..sim.simulator import Simulator
from .oracle import OracleConfig, PlayOracle
from .random_policy import RandomPolicyStats, random_act


def _episode_seed(seed: int, episode_index: int) -> np.random.SeedSequence:
    # stable per-episode derivation; shard order cannot affect content
    return np.random.SeedSequence(entropy=(seed, episode_index))


def collect_play(
    out_dir: str | Path,
    policy: str,
    minutes: float,
    episode_minutes: float = 1.0,
    seed: int = 0,
    scene: SceneConfig | None = None,
    random_stats: RandomPolicyStats | None = None,
    source_tag: str | None = None,
) -> Dataset:
    """Collect ceil(minutes / episode_minutes) episodes at 30 Hz.

    Total frame count is exactly minutes*60*hz; the last episode is truncated
    if the budget is not a whole number of episodes.
    """
    if minutes <= 0 or episode_minutes <= 0:
        raise ValueError("minutes and episode_minutes must be positive")
    if policy not in ("oracle", "random"):
        raise ValueError(f"policy must be 'oracle' or 'random', got {policy!r}")
    if policy == "random" and random_stats is None:
        raise ValueError("random collection requires reference RandomPolicyStats")

    sc = scene or SceneConfig()
    total_frames = int(round(minutes * 60 * sc.hz))
    frames_per_episode = int(round(episode_minutes * 60 * sc.hz))
    n_episodes = math.ceil(total_frames / frames_per_episode)
    source = source_tag or policy

    writer = DatasetWriter(out_dir)
    switch_lines: list[str] = []
    frames_left = total_frames
    for ep_idx in range(n_episodes):
        ss = _episode_seed(seed, ep_idx)
        reset_seed, policy_seed = [int(s.generate_state(1)[0]) for s in ss.spawn(2)]
        n = min(frames_per_episode, frames_left)
        frames_left -= n

        env = Simulator(sc)
        state = env.reset(seed=reset_seed)
        obs = np.empty((n, 19))
        act = np.empty((n, 8))
        if policy == "oracle":
            oracle = PlayOracle(sc, OracleConfig(seed=policy_seed))
            for t in range(n):
                obs[t] = state.to_vector()
                a = oracle.act(state)
                act[t] = a
                state = env.step(a)
            for sw in oracle.switch_log:
                switch_lines.append(f"{ep_idx}\t{sw.tick}\t{sw.name}")
        else:
            rng = np.random.default_rng(np.random.SeedSequence(policy_seed))
            for t in range(n):
                obs[t] = state.to_vector()
                a = random_act(random_stats, rng)
                act[t] = a
                state = env.step(a)

        writer.add_episode(
            Episode(obs=obs, act=act, source=source, seed=reset_seed, hz=sc.hz)
        )

    if switch_lines:
        (Path(out_dir) / "primitive_switches.txt").write_text(
            "\n".join(switch_lines) + "\n"
        )
    return writer.finalize()
