"""Gated recurrent network with exact manual backpropagation through time.

All math is float64. The forward pass caches gate activations so the
backward pass is the exact derivative of the forward computation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .modl import ModlHead, sigmoid
from .netspec import NetSpec, Params


class WidthMismatchError(ValueError):
    pass


@dataclass
class ForwardCache:
    layer_inputs: list[np.ndarray]  # per layer: (T, B, D_l)
    h_prev: list[np.ndarray]  # per layer: (T, B, H)
    z: list[np.ndarray]
    r: list[np.ndarray]
    n: list[np.ndarray]
    top: np.ndarray  # (T, B, H)


def zero_hidden(spec: NetSpec, batch: int = 1) -> np.ndarray:
    return np.zeros((spec.layers, batch, spec.width))


def rnn_forward(
    spec: NetSpec,
    params: Params,
    inputs: np.ndarray,
    hidden: np.ndarray | None = None,
    with_cache: bool = False,
):
    """Run the network over (T, B, input_width) inputs.

    Returns (out, hidden_out[, cache]) where out is (T, B, head_width):
    per action dimension K logits, K means, K log-scales.
    """
    x = np.asarray(inputs, dtype=float)
    if x.ndim == 2:
        x = x[:, None, :]
    t_len, batch, width_in = x.shape
    if width_in != spec.input_width:
        raise WidthMismatchError(
            f"expected input width {spec.input_width}, got {width_in}"
        )
    if t_len < 1:
        raise ValueError("sequence length must be >= 1")
    h = zero_hidden(spec, batch) if hidden is None else np.array(hidden, dtype=float)
    if h.shape != (spec.layers, batch, spec.width):
        raise WidthMismatchError(
            f"expected hidden shape {(spec.layers, batch, spec.width)}, got {h.shape}"
        )

    cache = ForwardCache([], [], [], [], [], np.empty(0)) if with_cache else None
    layer_in = x
    for l in range(spec.layers):
        wz, uz, bz = params[f"l{l}.Wz"], params[f"l{l}.Uz"], params[f"l{l}.bz"]
        wr, ur, br = params[f"l{l}.Wr"], params[f"l{l}.Ur"], params[f"l{l}.br"]
        wn, un, bn = params[f"l{l}.Wn"], params[f"l{l}.Un"], params[f"l{l}.bn"]
        h_l = h[l]
        out_l = np.empty((t_len, batch, spec.width))
        if with_cache:
            zc = np.empty_like(out_l)
            rc = np.empty_like(out_l)
            nc = np.empty_like(out_l)
            hp = np.empty_like(out_l)
        xw_z = layer_in @ wz.T + bz  # (T, B, H), time-invariant part
        xw_r = layer_in @ wr.T + br
        xw_n = layer_in @ wn.T + bn
        for t in range(t_len):
            z = sigmoid(xw_z[t] + h_l @ uz.T)
            r = sigmoid(xw_r[t] + h_l @ ur.T)
            n = np.tanh(xw_n[t] + (r * h_l) @ un.T)
            if with_cache:
                zc[t], rc[t], nc[t], hp[t] = z, r, n, h_l
            h_l = (1.0 - z) * h_l + z * n
            out_l[t] = h_l
        h[l] = h_l
        if with_cache:
            cache.layer_inputs.append(layer_in)
            cache.z.append(zc)
            cache.r.append(rc)
            cache.n.append(nc)
            cache.h_prev.append(hp)
        layer_in = out_l

    out = layer_in @ params["out.W"].T + params["out.b"]
    if with_cache:
        cache.top = layer_in  # hidden sequence of the top layer
        return out, h, cache
    return out, h


def rnn_backward(
    spec: NetSpec,
    params: Params,
    cache: ForwardCache,
    d_out: np.ndarray,
) -> Params:
    """Exact gradients of sum(d_out * out) w.r.t. every parameter."""
    t_len, batch, _ = d_out.shape
    grads: Params = {name: np.zeros(shape) for name, shape in spec.param_shapes()}

    grads["out.W"] = np.einsum("tbo,tbh->oh", d_out, cache.top)
    grads["out.b"] = d_out.sum(axis=(0, 1))
    d_layer = d_out @ params["out.W"]  # (T, B, H): gradient w.r.t. top hidden seq

    for l in reversed(range(spec.layers)):
        uz, ur, un = params[f"l{l}.Uz"], params[f"l{l}.Ur"], params[f"l{l}.Un"]
        wz, wr, wn = params[f"l{l}.Wz"], params[f"l{l}.Wr"], params[f"l{l}.Wn"]
        x_l = cache.layer_inputs[l]
        d_x = np.empty_like(x_l)
        dh_carry = np.zeros((batch, spec.width))
        for t in reversed(range(t_len)):
            dh = d_layer[t] + dh_carry
            z, r, n, hprev = cache.z[l][t], cache.r[l][t], cache.n[l][t], cache.h_prev[l][t]
            dn = dh * z
            da_n = dn * (1.0 - n * n)
            dz = dh * (n - hprev)
            da_z = dz * z * (1.0 - z)
            drh = da_n @ un  # gradient w.r.t. (r * hprev)
            dr = drh * hprev
            da_r = dr * r * (1.0 - r)

            xt = x_l[t]
            grads[f"l{l}.Wz"] += da_z.T @ xt
            grads[f"l{l}.Uz"] += da_z.T @ hprev
            grads[f"l{l}.bz"] += da_z.sum(axis=0)
            grads[f"l{l}.Wr"] += da_r.T @ xt
            grads[f"l{l}.Ur"] += da_r.T @ hprev
            grads[f"l{l}.br"] += da_r.sum(axis=0)
            grads[f"l{l}.Wn"] += da_n.T @ xt
            grads[f"l{l}.Un"] += da_n.T @ (r * hprev)
            grads[f"l{l}.bn"] += da_n.sum(axis=0)

            dh_carry = dh * (1.0 - z) + da_z @ uz + da_r @ ur + drh * r
            d_x[t] = da_z @ wz + da_r @ wr + da_n @ wn
        d_layer = d_x
    return grads


def split_head(spec: NetSpec, out: np.ndarray):
    """(..., head_width) -> logits, means, log_scales of (..., 8, K)."""
    k = spec.mixtures
    shaped = out.reshape(out.shape[:-1] + (spec.act_dims, 3 * k))
    return shaped[..., 0:k], shaped[..., k : 2 * k], shaped[..., 2 * k : 3 * k]


def heads_at(spec: NetSpec, out: np.ndarray, t: int, b: int = 0) -> ModlHead:
    logits, means, log_scales = split_head(spec, out[t, b])
    return ModlHead(logits, means, log_scales)
