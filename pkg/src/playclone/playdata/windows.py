"""Hindsight window sampling: the unit of training for both policies.

A window is a contiguous 32-64 frame slice of one episode whose final
observation is relabeled as the goal that the window's actions achieved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MIN_WINDOW = 32
MAX_WINDOW = 64


class NoEligibleEpisodeError(ValueError):
    pass


@dataclass
class Window:
    obs: np.ndarray  # (L, 19)
    act: np.ndarray  # (L, 8)
    goal: np.ndarray  # (19,) == obs[-1]
    episode_index: int
    start: int

    def __len__(self) -> int:
        return self.obs.shape[0]


class WindowSampler:
    """Caches episode frames and draws hindsight-relabeled windows.

    Episodes are drawn with probability proportional to their eligible start
    count (n - 32 + 1); episodes shorter than 32 frames are never drawn.
    Immutable after construction; safe for concurrent rng-parameterized use.
    """

    def __init__(self, dataset):
        self.episodes = [
            (ep.obs, ep.act) for ep in dataset.iter_episodes() if len(ep) >= MIN_WINDOW
        ]
        if not self.episodes:
            raise NoEligibleEpisodeError(
                f"no episode with at least {MIN_WINDOW} frames"
            )
        weights = np.array([obs.shape[0] - MIN_WINDOW + 1 for obs, _ in self.episodes], dtype=float)
        self._probs = weights / weights.sum()

    def eligible_starts(self) -> np.ndarray:
        return np.array([obs.shape[0] - MIN_WINDOW + 1 for obs, _ in self.episodes])

    def sample(self, rng: np.random.Generator) -> Window:
        idx = int(rng.choice(len(self.episodes), p=self._probs))
        obs, act = self.episodes[idx]
        n = obs.shape[0]
        length = min(int(rng.integers(MIN_WINDOW, MAX_WINDOW + 1)), n)
        start = int(rng.integers(0, n - length + 1))
        w_obs = obs[start : start + length]
        w_act = act[start : start + length]
        return Window(w_obs, w_act, w_obs[-1].copy(), idx, start)

    def sample_batch(self, batch_size: int, rng: np.random.Generator) -> list[Window]:
        return [self.sample(rng) for _ in range(batch_size)]


def sample_window(dataset, rng: np.random.Generator) -> Window:
    """One-shot convenience wrapper; builds a sampler per call."""
    return WindowSampler(dataset).sample(rng)
