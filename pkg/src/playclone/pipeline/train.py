"""Maximum-likelihood training of the play-cloning and goal-conditioned
policies on hindsight-sampled windows."""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ..playdata.dataset import Dataset
from ..playdata.stats import compute_norm_stats, normalize_obs, quantize_action
from ..playdata.windows import Window, WindowSampler
from ..seqnet.adam import AdamState, adam_step, clip_grad_norm
from ..seqnet.loss import NonFiniteLossError, loss_and_grad
from ..seqnet.netspec import NetSpec, flatten_params, init_params, unflatten_params
from ..sim.scene import ACT_DIM, OBS_DIM
from .policy import GOAL_INPUT_WIDTH, PolicyBundle


class TrainingDivergedError(RuntimeError):
    def __init__(self, step: int, cause: Exception):
        self.step = step
        super().__init__(f"training diverged at step {step}: {cause}")


@dataclass
class TrainConfig:
    layers: int = 2
    width: int = 128
    mixtures: int = 5
    batch_size: int = 8
    steps: int = 3000
    lr: float = 1e-3
    lr_final: float | None = None
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    grad_clip: float = 10.0
    seed: int = 0
    log_every: int = 10

    def __post_init__(self):
        if self.steps < 0 or self.batch_size < 1:
            raise ValueError("steps must be >= 0 and batch_size >= 1")
        if self.lr_final is not None and not 0 < self.lr_final <= self.lr:
            raise ValueError("lr_final must be in (0, lr]")

    def lr_at(self, step: int) -> float:
        """Learning rate at a step: constant, or exponential decay to lr_final."""
        if self.lr_final is None or self.steps <= 1:
            return self.lr
        return self.lr * (self.lr_final / self.lr) ** (step / (self.steps - 1))


@dataclass
class TrainLogRow:
    step: int
    loss: float
    grad_norm: float
    wallclock: float


def write_train_log(rows: list[TrainLogRow], path: str | Path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["step", "loss", "grad_norm", "wallclock"])
        for r in rows:
            writer.writerow([r.step, repr(r.loss), repr(r.grad_norm), f"{r.wallclock:.3f}"])


def build_batch(
    windows: list[Window], stats, goal_conditioned: bool
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Pad a window batch into (T, B, in), (T, B, 8) targets and (T, B) mask."""
    t_max = max(len(w) for w in windows)
    batch = len(windows)
    in_width = GOAL_INPUT_WIDTH if goal_conditioned else OBS_DIM
    x = np.zeros((t_max, batch, in_width))
    targets = np.zeros((t_max, batch, ACT_DIM), dtype=np.int64)
    mask = np.zeros((t_max, batch))
    for j, w in enumerate(windows):
        n = len(w)
        x[:n, j, :OBS_DIM] = normalize_obs(w.obs, stats)
        if goal_conditioned:
            x[:n, j, OBS_DIM:] = normalize_obs(w.goal, stats)
        targets[:n, j] = quantize_action(w.act, stats)
        mask[:n, j] = 1.0
    return x, targets, mask


def _train(
    dataset: Dataset, cfg: TrainConfig, goal_conditioned: bool
) -> tuple[PolicyBundle, list[TrainLogRow]]:
    stats = compute_norm_stats(dataset)
    sampler = WindowSampler(dataset)
    in_width = GOAL_INPUT_WIDTH if goal_conditioned else OBS_DIM
    spec = NetSpec(input_width=in_width, layers=cfg.layers, width=cfg.width, mixtures=cfg.mixtures)
    rng = np.random.default_rng(np.random.SeedSequence(entropy=(cfg.seed, 2 if goal_conditioned else 1)))
    params = init_params(spec, rng)
    flat = flatten_params(spec, params)
    opt = AdamState(dim=flat.size, lr=cfg.lr, beta1=cfg.beta1, beta2=cfg.beta2, eps=cfg.eps)
    log: list[TrainLogRow] = []
    t0 = time.monotonic()
    for step in range(cfg.steps):
        windows = sampler.sample_batch(cfg.batch_size, rng)
        x, targets, mask = build_batch(windows, stats, goal_conditioned)
        try:
            loss, grads = loss_and_grad(spec, params, x, targets, mask)
        except NonFiniteLossError as e:
            raise TrainingDivergedError(step, e) from e
        gflat, gnorm = clip_grad_norm(flatten_params(spec, grads), cfg.grad_clip)
        opt = replace(opt, lr=cfg.lr_at(step))
        flat, opt = adam_step(flat, gflat, opt)
        params = unflatten_params(spec, flat)
        if step % cfg.log_every == 0 or step == cfg.steps - 1:
            log.append(TrainLogRow(step, loss, gnorm, time.monotonic() - t0))
    return PolicyBundle(spec, params, stats), log


def train_play_bc(dataset: Dataset, cfg: TrainConfig) -> tuple[PolicyBundle, list[TrainLogRow]]:
    """Behavioral cloning of play: maximize likelihood of quantized actions
    given the observation sequence alone."""
    return _train(dataset, cfg, goal_conditioned=False)


def train_lfp(dataset: Dataset, cfg: TrainConfig) -> tuple[PolicyBundle, list[TrainLogRow]]:
    """Goal-conditioned training on hindsight-relabeled windows: each input
    timestep is the 38-wide concatenation of the state and the window goal."""
    return _train(dataset, cfg, goal_conditioned=True)
