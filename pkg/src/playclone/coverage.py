"""Quantized state-space coverage analytics.

The 11 environment dimensions of the state vector (block pose, drawer,
slider, buttons — robot dims excluded) are each quantized into 10 bins:
8 equal-width inner bins spanning the [min, max] of a reference dataset,
plus a below-min bin 0 and an above-max bin 9.  Coverage is the number of
distinct 11-tuples of bin indices visited.
"""

from __future__ import annotations

import csv
import logging
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .playdata.dataset import Dataset
from .sim.scene import SceneConfig

logger = logging.getLogger(__name__)

ENV_DIM_START = 8  # state vector layout: 8 robot dims then 11 environment dims
ENV_DIMS = 11
INNER_BINS = 8
BINS_PER_DIM = INNER_BINS + 2
TOTAL_BIN_SPACE = BINS_PER_DIM**ENV_DIMS


class EmptyReferenceError(ValueError):
    """A coverage grid needs at least one reference frame."""


class ZeroDurationError(ValueError):
    """Coverage rate over a zero-length segment is undefined."""


@dataclass(frozen=True)
class CoverageGrid:
    """Per-dimension inner-bin extents over the 11 environment dims."""

    lo: np.ndarray  # (11,) reference minima
    hi: np.ndarray  # (11,) reference maxima
    hz: float = SceneConfig().hz

    def __post_init__(self):
        lo = np.asarray(self.lo, dtype=float)
        hi = np.asarray(self.hi, dtype=float)
        if lo.shape != (ENV_DIMS,) or hi.shape != (ENV_DIMS,):
            raise ValueError(f"grid extents must have shape ({ENV_DIMS},)")
        if np.any(hi < lo):
            raise ValueError("grid maxima must be >= minima")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def degenerate(self) -> np.ndarray:
        return self.hi == self.lo

    @property
    def cardinality(self) -> int:
        return TOTAL_BIN_SPACE


@dataclass
class CurvePoint:
    frames: int
    unique: int
    segment: str


@dataclass
class CoverageCurve:
    points: list[CurvePoint] = field(default_factory=list)
    segment_frames: dict[str, int] = field(default_factory=dict)
    hz: float = SceneConfig().hz

    def final_unique(self) -> int:
        return self.points[-1].unique if self.points else 0


def build_grid(reference: Dataset, hz: float | None = None) -> CoverageGrid:
    """Extents of the inner bins come from the reference (human-role) data."""
    lo = np.full(ENV_DIMS, np.inf)
    hi = np.full(ENV_DIMS, -np.inf)
    frames = 0
    for ep in reference.iter_episodes():
        env = ep.obs[:, ENV_DIM_START:]
        lo = np.minimum(lo, env.min(axis=0))
        hi = np.maximum(hi, env.max(axis=0))
        frames += len(ep.obs)
    if frames == 0:
        raise EmptyReferenceError("reference dataset has no frames")
    for d in np.flatnonzero(hi == lo):
        logger.warning(
            "coverage grid dim %d is degenerate (all values %r); inner bins collapse", d, lo[d]
        )
    if hz is None:
        hz = reference.load(0).hz if len(reference) else SceneConfig().hz
    return CoverageGrid(lo=lo, hi=hi, hz=hz)


def quantize_env_frames(env: np.ndarray, grid: CoverageGrid) -> np.ndarray:
    """Bin indices for (N, 11) environment-dim frames; returns (N, 11) uint8.

    Inner bins are half-open [edge_i, edge_{i+1}); the exact maximum maps to
    inner bin 8, values below/above the extents map to bins 0/9.  Degenerate
    dimensions put the single reference value in bin 1.
    """
    env = np.asarray(env, dtype=float)
    span = grid.hi - grid.lo
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # degenerate dims divide by zero; masked below
        frac = (env - grid.lo) / span
    frac = np.nan_to_num(frac)  # degenerate dims overwritten below
    idx = 1 + np.floor(frac * INNER_BINS).astype(np.int64)
    idx = np.clip(idx, 0, INNER_BINS + 1)
    # the exact maximum belongs to the top inner bin, not the overflow bin
    at_max = env == grid.hi
    idx = np.where(at_max, INNER_BINS, idx)
    deg = grid.degenerate
    if deg.any():
        on_point = env[:, deg] == grid.lo[deg]
        idx[:, deg] = np.where(on_point, 1, np.where(env[:, deg] < grid.lo[deg], 0, 9))
    below = env < grid.lo
    above = (env > grid.hi) & ~deg
    idx = np.where(below, 0, np.where(above, INNER_BINS + 1, idx))
    return idx.astype(np.uint8)


def quantize_env_state(state_vector: np.ndarray, grid: CoverageGrid) -> tuple[int, ...]:
    """Bin 11-tuple for one 19-dim state vector (or an 11-dim env slice)."""
    v = np.asarray(state_vector, dtype=float)
    if v.shape == (ENV_DIM_START + ENV_DIMS,):
        v = v[ENV_DIM_START:]
    if v.shape != (ENV_DIMS,):
        raise ValueError("expected a 19-dim state vector or 11 environment dims")
    return tuple(int(b) for b in quantize_env_frames(v[None], grid)[0])


def pack_keys(idx: np.ndarray) -> np.ndarray:
    """Pack (N, 11) bin indices into scalar 44-bit keys (4 bits per dim)."""
    keys = np.zeros(len(idx), dtype=np.int64)
    for d in range(ENV_DIMS):
        keys = (keys << 4) | idx[:, d].astype(np.int64)
    return keys


def coverage_curve(
    segments: list[tuple[str, Dataset]], grid: CoverageGrid, stride: int = 100
) -> CoverageCurve:
    """Stream segments in order, counting cumulative unique env-state bins.

    Emits a point every `stride` frames plus one at each segment boundary.
    """
    if not segments:
        raise ValueError("at least one segment is required")
    if stride < 1:
        raise ValueError("stride must be >= 1")
    curve = CoverageCurve(hz=grid.hz)
    seen: set[int] = set()
    frames = 0
    next_emit = stride
    for tag, dataset in segments:
        seg_frames = 0
        for ep in dataset.iter_episodes():
            keys = pack_keys(quantize_env_frames(ep.obs[:, ENV_DIM_START:], grid))
            for k in keys:
                seen.add(int(k))
                frames += 1
                seg_frames += 1
                if frames >= next_emit:
                    curve.points.append(CurvePoint(frames, len(seen), tag))
                    next_emit = frames + stride
        if not curve.points or curve.points[-1].frames != frames:
            curve.points.append(CurvePoint(frames, len(seen), tag))
            next_emit = frames + stride
        curve.segment_frames[tag] = curve.segment_frames.get(tag, 0) + seg_frames
    return curve


def coverage_count(dataset: Dataset, grid: CoverageGrid) -> int:
    """Unique env-state bins over one dataset (order-free convenience)."""
    return coverage_curve([("all", dataset)], grid, stride=1 << 62).final_unique()


def coverage_rate(curve: CoverageCurve, segment: str) -> float:
    """Unique bins newly covered per hour within one segment of the curve."""
    pts = [p for p in curve.points if p.segment == segment]
    if not pts:
        raise KeyError(f"segment {segment!r} not in curve")
    seg_frames = curve.segment_frames.get(segment, 0)
    if seg_frames == 0 or curve.hz <= 0:
        raise ZeroDurationError(f"segment {segment!r} has zero duration")
    start = 0
    for p in curve.points:
        if p.segment == segment:
            break
        start = p.unique
    hours = seg_frames / curve.hz / 3600.0
    return (pts[-1].unique - start) / hours


def write_curve_csv(curve: CoverageCurve, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["frames", "hours", "cumulative_unique", "segment_tag"])
        for p in curve.points:
            hours = p.frames / curve.hz / 3600.0
            writer.writerow([p.frames, f"{hours:.6f}", p.unique, p.segment])
