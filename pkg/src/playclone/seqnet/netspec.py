"""Network specification and parameter vector layout.

Parameters live in a name->array dict; the flat-vector layout is a pure
function of the NetSpec, with a fixed key order used by the optimizer, the
checkpoint format and the finite-difference checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class NetSpec:
    input_width: int
    layers: int = 2
    width: int = 128
    mixtures: int = 5
    act_dims: int = 8
    bins: int = 256

    def __post_init__(self):
        if self.layers < 1 or self.width < 1 or self.mixtures < 1:
            raise ValueError("layers, width and mixtures must all be >= 1")
        if self.input_width < 1:
            raise ValueError("input_width must be >= 1")

    @property
    def head_width(self) -> int:
        # per action dimension: K logits, K means, K log-scales
        return self.act_dims * 3 * self.mixtures

    def layer_input(self, layer: int) -> int:
        return self.input_width if layer == 0 else self.width

    def param_shapes(self) -> list[tuple[str, tuple[int, ...]]]:
        shapes: list[tuple[str, tuple[int, ...]]] = []
        h = self.width
        for l in range(self.layers):
            d = self.layer_input(l)
            for gate in ("z", "r", "n"):
                shapes.append((f"l{l}.W{gate}", (h, d)))
                shapes.append((f"l{l}.U{gate}", (h, h)))
                shapes.append((f"l{l}.b{gate}", (h,)))
        shapes.append(("out.W", (self.head_width, h)))
        shapes.append(("out.b", (self.head_width,)))
        return shapes

    @property
    def num_params(self) -> int:
        return sum(int(np.prod(s)) for _, s in self.param_shapes())


Params = dict[str, np.ndarray]


def init_params(spec: NetSpec, rng: np.random.Generator) -> Params:
    """Uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) per tensor, float64."""
    params: Params = {}
    for name, shape in spec.param_shapes():
        fan_in = shape[-1] if len(shape) > 1 else spec.width
        bound = 1.0 / np.sqrt(fan_in)
        params[name] = rng.uniform(-bound, bound, size=shape)
    return params


def zeros_params(spec: NetSpec) -> Params:
    return {name: np.zeros(shape) for name, shape in spec.param_shapes()}


def flatten_params(spec: NetSpec, params: Params) -> np.ndarray:
    return np.concatenate([params[name].ravel() for name, _ in spec.param_shapes()])


def unflatten_params(spec: NetSpec, flat: np.ndarray) -> Params:
    flat = np.asarray(flat, dtype=float)
    if flat.shape != (spec.num_params,):
        raise ValueError(f"expected {spec.num_params} parameters, got {flat.shape}")
    params: Params = {}
    offset = 0
    for name, shape in spec.param_shapes():
        size = int(np.prod(shape))
        params[name] = flat[offset : offset + size].reshape(shape).copy()
        offset += size
    return params
