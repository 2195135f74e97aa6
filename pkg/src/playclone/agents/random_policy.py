"""Random-exploration baseline: per-dimension normal actions matched to the
moments of a reference play dataset, clipped to its observed range."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..sim.scene import ACT_DIM
from ..playdata.stats import NormStats


@dataclass
class RandomPolicyStats:
    mean: np.ndarray  # (8,)
    std: np.ndarray  # (8,)
    clip_low: np.ndarray  # (8,)
    clip_high: np.ndarray  # (8,)

    def __post_init__(self):
        for name in ("mean", "std", "clip_low", "clip_high"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (ACT_DIM,):
                raise ValueError(f"{name} must have shape ({ACT_DIM},)")
            setattr(self, name, arr)
        if np.any(self.std < 0):
            raise ValueError("std must be non-negative")
        if np.any(self.clip_low > self.mean) or np.any(self.mean > self.clip_high):
            raise ValueError("mean must lie within the clip bounds")

    @staticmethod
    def from_norm_stats(stats: NormStats) -> "RandomPolicyStats":
        return RandomPolicyStats(
            mean=stats.act_mean.copy(),
            std=stats.act_std.copy(),
            clip_low=stats.act_min.copy(),
            clip_high=stats.act_max.copy(),
        )


def random_act(stats: RandomPolicyStats, rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(stats.mean, stats.std)
    return np.clip(a, stats.clip_low, stats.clip_high)


class RandomPolicy:
    """Policy-interface adapter for the random baseline."""

    def __init__(self, stats: RandomPolicyStats, seed: int = 0):
        self.stats = stats
        self.rng = np.random.default_rng(np.random.SeedSequence(seed))

    def begin_episode(self, task_id=None, initial=None, goal=None, rng=None):
        if rng is not None:
            self.rng = rng

    def act(self, state) -> np.ndarray:
        return random_act(self.stats, self.rng)
