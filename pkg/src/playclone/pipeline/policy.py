"""Trained policy bundle: network spec, parameters and normalization stats."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..playdata.stats import (
    NormStats,
    dequantize_action,
    load_norm_stats,
    normalize_obs,
    save_norm_stats,
)
from ..seqnet.checkpoint import load_checkpoint, save_checkpoint
from ..seqnet.modl import ModlHead, modl_sample, softmax
from ..seqnet.netspec import NetSpec, Params
from ..seqnet.rnn import rnn_forward, split_head, zero_hidden
from ..sim.scene import OBS_DIM, EnvState

GOAL_INPUT_WIDTH = 2 * OBS_DIM  # [s_t, s_g]


@dataclass
class PolicyBundle:
    spec: NetSpec
    params: Params
    stats: NormStats

    @property
    def goal_conditioned(self) -> bool:
        return self.spec.input_width == GOAL_INPUT_WIDTH

    def save(self, path: str | Path, sidecar: dict | None = None) -> None:
        save_checkpoint(path, self.spec, self.params, sidecar=sidecar)
        save_norm_stats(self.stats, str(path) + ".stats")

    @staticmethod
    def load(path: str | Path) -> "PolicyBundle":
        spec, params = load_checkpoint(path)
        stats = load_norm_stats(str(path) + ".stats")
        return PolicyBundle(spec, params, stats)


class PolicyStepper:
    """Stateful single-step executor of a trained policy in the simulator."""

    def __init__(
        self,
        bundle: PolicyBundle,
        temperature: float = 1.0,
        greedy: bool = False,
    ):
        self.bundle = bundle
        self.temperature = temperature
        self.greedy = greedy
        self.hidden = zero_hidden(bundle.spec, batch=1)
        self._goal_norm: np.ndarray | None = None

    def reset(self, goal: EnvState | np.ndarray | None = None) -> None:
        self.hidden = zero_hidden(self.bundle.spec, batch=1)
        if goal is not None:
            g = goal.to_vector() if isinstance(goal, EnvState) else np.asarray(goal)
            self._goal_norm = normalize_obs(g, self.bundle.stats)
        else:
            self._goal_norm = None
        if self.bundle.goal_conditioned and self._goal_norm is None:
            raise ValueError("goal-conditioned policy requires a goal at reset")

    def act(self, state: EnvState, rng: np.random.Generator) -> np.ndarray:
        x = normalize_obs(state.to_vector(), self.bundle.stats)
        if self.bundle.goal_conditioned:
            x = np.concatenate([x, self._goal_norm])
        out, self.hidden = rnn_forward(
            self.bundle.spec, self.bundle.params, x[None, None, :], self.hidden
        )
        logits, means, log_scales = split_head(self.bundle.spec, out[0, 0])
        head = ModlHead(logits, means, log_scales)
        if self.greedy:
            bins = greedy_bins(head)
        else:
            bins = modl_sample(head, rng, self.temperature)
        return dequantize_action(bins, self.bundle.stats)


def greedy_bins(head: ModlHead) -> np.ndarray:
    """Bin containing the most likely mixture component's mean."""
    comp = head.logits.argmax(axis=-1)
    idx = np.arange(head.means.shape[0])
    mu = head.means[idx, comp]
    from ..seqnet.modl import NUM_BINS

    return np.clip(np.floor((mu + 1.0) / 2.0 * NUM_BINS), 0, NUM_BINS - 1).astype(np.int64)
