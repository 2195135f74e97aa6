"""Mixture-of-discretized-logistics action head.

Per action dimension the head holds K mixture logits, K means (in the
normalized action range [-1, 1]) and K log-scales. Bin probabilities are
logistic CDF differences over 256 equal bins tiling [-1, 1]; the edge bins
integrate to -inf / +inf so the 256 probabilities sum to one exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NUM_BINS = 256
BIN_HALF = 1.0 / NUM_BINS  # half of one bin width in normalized units
LOG_SCALE_FLOOR = -8.0
PROB_EPS = 1e-32  # additive floor inside log; keeps gradients exact


def sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=float)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def softmax(logits: np.ndarray, axis: int = -1) -> np.ndarray:
    z = logits - logits.max(axis=axis, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=axis, keepdims=True)


def bin_center(bins: np.ndarray) -> np.ndarray:
    return -1.0 + (2.0 * np.asarray(bins) + 1.0) / NUM_BINS


@dataclass
class ModlHead:
    """One timestep's distribution parameters, arrays of shape (8, K)."""

    logits: np.ndarray
    means: np.ndarray
    log_scales: np.ndarray

    def __post_init__(self):
        if not (self.logits.shape == self.means.shape == self.log_scales.shape):
            raise ValueError("head arrays must share shape (act_dims, K)")

    def mixture_weights(self) -> np.ndarray:
        return softmax(self.logits, axis=-1)


def _component_bin_probs(
    means: np.ndarray, log_scales: np.ndarray, bins: np.ndarray
) -> tuple[np.ndarray, ...]:
    """CDF-difference pieces for target bins.

    means/log_scales: (..., K); bins: (...) int. Returns per-component
    probabilities and the intermediates needed for the exact backward pass.
    """
    ls = np.maximum(log_scales, LOG_SCALE_FLOOR)
    inv_s = np.exp(-ls)
    xb = bin_center(bins)[..., None]
    plus_in = (xb + BIN_HALF - means) * inv_s
    minus_in = (xb - BIN_HALF - means) * inv_s
    cdf_plus = sigmoid(plus_in)
    cdf_minus = sigmoid(minus_in)
    is_top = (bins == NUM_BINS - 1)[..., None]
    is_bottom = (bins == 0)[..., None]
    cdf_plus = np.where(is_top, 1.0, cdf_plus)
    cdf_minus = np.where(is_bottom, 0.0, cdf_minus)
    comp_probs = cdf_plus - cdf_minus
    return comp_probs, plus_in, minus_in, cdf_plus, cdf_minus, is_top, is_bottom


def modl_logprob(
    logits: np.ndarray,
    means: np.ndarray,
    log_scales: np.ndarray,
    bins: np.ndarray,
) -> np.ndarray:
    """log P(bin) per action dimension; broadcasts over leading axes."""
    bins = np.asarray(bins)
    if np.any(bins < 0) or np.any(bins >= NUM_BINS):
        raise ValueError("bin index out of range [0, 255]")
    comp_probs = _component_bin_probs(means, log_scales, bins)[0]
    w = softmax(logits, axis=-1)
    p = (w * comp_probs).sum(axis=-1)
    return np.log(p + PROB_EPS)


def modl_bin_logprob(head: ModlHead, bins: np.ndarray) -> float:
    """Total log-probability of one 8-dim quantized action."""
    return float(modl_logprob(head.logits, head.means, head.log_scales, bins).sum())


def modl_logprob_grad(
    logits: np.ndarray,
    means: np.ndarray,
    log_scales: np.ndarray,
    bins: np.ndarray,
    dlogp: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Exact gradients of sum(dlogp * logP(bin)) w.r.t. the head parameters."""
    bins = np.asarray(bins)
    (
        comp_probs,
        plus_in,
        minus_in,
        cdf_plus,
        cdf_minus,
        is_top,
        is_bottom,
    ) = _component_bin_probs(means, log_scales, bins)
    w = softmax(logits, axis=-1)
    p = (w * comp_probs).sum(axis=-1)
    dp = (dlogp / (p + PROB_EPS))[..., None]

    dcomp = dp * w
    dw = dp * comp_probs
    dlogits = w * (dw - (dw * w).sum(axis=-1, keepdims=True))

    ls = np.maximum(log_scales, LOG_SCALE_FLOOR)
    inv_s = np.exp(-ls)
    dplus = np.where(is_top, 0.0, dcomp * cdf_plus * (1.0 - cdf_plus))
    dminus = np.where(is_bottom, 0.0, -dcomp * cdf_minus * (1.0 - cdf_minus))
    dmeans = -(dplus + dminus) * inv_s
    dls = -(dplus * plus_in + dminus * minus_in)
    dls = np.where(log_scales < LOG_SCALE_FLOOR, 0.0, dls)
    return dlogits, dmeans, dls


def modl_all_bin_probs(
    logits: np.ndarray, means: np.ndarray, log_scales: np.ndarray
) -> np.ndarray:
    """Probability of every bin: shape (..., 256). Rows sum to one."""
    lead = logits.shape[:-1]
    all_bins = np.broadcast_to(np.arange(NUM_BINS), lead + (NUM_BINS,))
    comp = _component_bin_probs(
        means[..., None, :], log_scales[..., None, :], all_bins
    )[0]
    w = softmax(logits, axis=-1)[..., None, :]
    return (w * comp).sum(axis=-1)


def modl_sample(
    head: ModlHead, rng: np.random.Generator, temperature: float = 1.0
) -> np.ndarray:
    """Sample one bin index per action dimension.

    The mixture component is drawn from the temperature-scaled softmax and
    the logistic noise is scaled by temperature, so temperature -> 0 recovers
    the bin containing the selected component's mean.
    """
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    dims, k = head.logits.shape
    w = softmax(head.logits / temperature, axis=-1)
    cum = np.cumsum(w, axis=-1)
    comp = (rng.uniform(size=(dims, 1)) < cum).argmax(axis=-1)
    idx = np.arange(dims)
    mu = head.means[idx, comp]
    s = np.exp(np.maximum(head.log_scales[idx, comp], LOG_SCALE_FLOOR))
    u = rng.uniform(low=1e-12, high=1.0 - 1e-12, size=dims)
    x = mu + s * temperature * (np.log(u) - np.log1p(-u))
    return np.clip(np.floor((x + 1.0) / 2.0 * NUM_BINS), 0, NUM_BINS - 1).astype(np.int64)
