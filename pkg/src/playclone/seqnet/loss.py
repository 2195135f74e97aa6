"""Sequence negative log-likelihood and its exact gradient."""

from __future__ import annotations

import numpy as np

from .modl import modl_logprob, modl_logprob_grad
from .netspec import NetSpec, Params
from .rnn import rnn_backward, rnn_forward, split_head


class NonFiniteLossError(FloatingPointError):
    pass


def loss_and_grad(
    spec: NetSpec,
    params: Params,
    inputs: np.ndarray,
    targets: np.ndarray,
    mask: np.ndarray | None = None,
) -> tuple[float, Params]:
    """Mean NLL over (masked) batch timesteps and its exact BPTT gradient.

    inputs: (T, B, input_width); targets: (T, B, 8) bin indices;
    mask: (T, B) with 1 for real timesteps, 0 for padding.
    """
    x = np.asarray(inputs, dtype=float)
    if x.ndim == 2:
        x = x[:, None, :]
    targets = np.asarray(targets)
    if targets.ndim == 2:
        targets = targets[:, None, :]
    t_len, batch, _ = x.shape
    if batch == 0 or t_len == 0:
        raise ValueError("empty batch")
    if mask is None:
        mask = np.ones((t_len, batch))
    mask = np.asarray(mask, dtype=float)

    out, _, cache = rnn_forward(spec, params, x, with_cache=True)
    logits, means, log_scales = split_head(spec, out)
    logp = modl_logprob(logits, means, log_scales, targets)  # (T, B, 8)
    total = float(mask.sum())
    if total <= 0:
        raise ValueError("mask selects no timesteps")
    loss = float(-(logp.sum(axis=-1) * mask).sum() / total)
    if not np.isfinite(loss):
        bad = np.argwhere(~np.isfinite(logp))
        where = f"t={bad[0][0]}, b={bad[0][1]}, dim={bad[0][2]}" if len(bad) else "loss"
        raise NonFiniteLossError(f"non-finite likelihood at {where}")

    dlogp = -(mask / total)[..., None] * np.ones_like(logp)
    dlogits, dmeans, dls = modl_logprob_grad(logits, means, log_scales, targets, dlogp)
    k = spec.mixtures
    d_head = np.concatenate([dlogits, dmeans, dls], axis=-1)
    d_out = d_head.reshape(t_len, batch, spec.act_dims * 3 * k)
    grads = rnn_backward(spec, params, cache, d_out)
    return loss, grads
