"""Normalization statistics, action quantization and observation scaling.

Actions and observations are mapped per-dimension to [-1, 1] by an affine
map over the [min, max] range observed in a reference dataset; actions are
then quantized into 256 bins that tile that range exactly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..sim.scene import ACT_DIM, OBS_DIM

NUM_BINS = 256


class EmptyDatasetError(ValueError):
    pass


@dataclass
class NormStats:
    obs_mean: np.ndarray
    obs_std: np.ndarray
    obs_min: np.ndarray
    obs_max: np.ndarray
    act_mean: np.ndarray
    act_std: np.ndarray
    act_min: np.ndarray
    act_max: np.ndarray

    def __post_init__(self):
        for name in ("obs", "act"):
            dim = OBS_DIM if name == "obs" else ACT_DIM
            for stat in ("mean", "std", "min", "max"):
                arr = np.asarray(getattr(self, f"{name}_{stat}"), dtype=float)
                if arr.shape != (dim,):
                    raise ValueError(f"{name}_{stat} must have shape ({dim},)")
                setattr(self, f"{name}_{stat}", arr)


def compute_norm_stats(dataset) -> NormStats:
    """Exact population moments and extrema, streamed in two passes."""
    total = 0
    obs_sum = np.zeros(OBS_DIM)
    act_sum = np.zeros(ACT_DIM)
    obs_min = np.full(OBS_DIM, np.inf)
    obs_max = np.full(OBS_DIM, -np.inf)
    act_min = np.full(ACT_DIM, np.inf)
    act_max = np.full(ACT_DIM, -np.inf)
    for ep in dataset.iter_episodes():
        total += len(ep)
        obs_sum += ep.obs.sum(axis=0)
        act_sum += ep.act.sum(axis=0)
        obs_min = np.minimum(obs_min, ep.obs.min(axis=0))
        obs_max = np.maximum(obs_max, ep.obs.max(axis=0))
        act_min = np.minimum(act_min, ep.act.min(axis=0))
        act_max = np.maximum(act_max, ep.act.max(axis=0))
    if total < 2:
        raise EmptyDatasetError("norm stats require a dataset with at least 2 frames")
    obs_mean = obs_sum / total
    act_mean = act_sum / total
    obs_sq = np.zeros(OBS_DIM)
    act_sq = np.zeros(ACT_DIM)
    for ep in dataset.iter_episodes():
        obs_sq += ((ep.obs - obs_mean) ** 2).sum(axis=0)
        act_sq += ((ep.act - act_mean) ** 2).sum(axis=0)
    return NormStats(
        obs_mean=obs_mean,
        obs_std=np.sqrt(obs_sq / total),
        obs_min=obs_min,
        obs_max=obs_max,
        act_mean=act_mean,
        act_std=np.sqrt(act_sq / total),
        act_min=act_min,
        act_max=act_max,
    )


def _normalize(x: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Affine map of [lo, hi] onto [-1, 1], clamped; degenerate dims -> 0."""
    span = hi - lo
    degenerate = span <= 0
    safe_span = np.where(degenerate, 1.0, span)
    y = 2.0 * (x - lo) / safe_span - 1.0
    y = np.where(degenerate, 0.0, y)
    return np.clip(y, -1.0, 1.0)


def normalize_obs(obs: np.ndarray, stats: NormStats) -> np.ndarray:
    return _normalize(np.asarray(obs, dtype=float), stats.obs_min, stats.obs_max)


def quantize_action(a: np.ndarray, stats: NormStats) -> np.ndarray:
    """Per-dimension 256-bin index; degenerate dims map to bin 128."""
    a = np.asarray(a, dtype=float)
    degenerate = stats.act_max - stats.act_min <= 0
    if np.any(degenerate):
        warnings.warn(
            f"degenerate action dimensions {np.nonzero(degenerate)[0].tolist()}: "
            "all values map to bin 128",
            stacklevel=2,
        )
    x = _normalize(a, stats.act_min, stats.act_max)
    bins = np.minimum(NUM_BINS - 1, np.floor((x + 1.0) / 2.0 * NUM_BINS)).astype(np.int64)
    return np.where(degenerate, 128, bins)


def dequantize_action(bins: np.ndarray, stats: NormStats) -> np.ndarray:
    """Bin centers mapped back to original action units."""
    bins = np.asarray(bins)
    if np.any(bins < 0) or np.any(bins >= NUM_BINS):
        raise ValueError("bin index out of range")
    x = -1.0 + (2.0 * bins + 1.0) / NUM_BINS
    span = stats.act_max - stats.act_min
    a = stats.act_min + (x + 1.0) / 2.0 * span
    return np.where(span <= 0, stats.act_min, a)


def save_norm_stats(stats: NormStats, path: str | Path) -> None:
    lines = []
    for name in ("obs_mean", "obs_std", "obs_min", "obs_max",
                 "act_mean", "act_std", "act_min", "act_max"):
        vals = " ".join(repr(float(v)) for v in getattr(stats, name))
        lines.append(f"{name}={vals}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_norm_stats(path: str | Path) -> NormStats:
    fields = {}
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        key, _, val = line.partition("=")
        fields[key] = np.array([float(x) for x in val.split()])
    return NormStats(**fields)
