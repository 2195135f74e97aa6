"""Versioned binary parameter checkpoints.

Layout: magic, format version, six NetSpec fields (little-endian uint32),
then the flat parameter vector as little-endian float64. A text sidecar
(same path + ".txt") records training config and final loss.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .netspec import NetSpec, Params, flatten_params, unflatten_params

MAGIC = b"PLCK"
CKPT_VERSION = 1
_HEADER = struct.Struct("<4sIIIIIII")  # magic, version, 6 spec fields


class CheckpointError(ValueError):
    pass


def save_checkpoint(
    path: str | Path,
    spec: NetSpec,
    params: Params,
    sidecar: dict | None = None,
) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    flat = flatten_params(spec, params)
    header = _HEADER.pack(
        MAGIC,
        CKPT_VERSION,
        spec.input_width,
        spec.layers,
        spec.width,
        spec.mixtures,
        spec.act_dims,
        spec.bins,
    )
    with open(path, "wb") as f:
        f.write(header)
        f.write(flat.astype("<f8").tobytes())
    if sidecar is not None:
        lines = [f"{k}={v}" for k, v in sidecar.items()]
        Path(str(path) + ".txt").write_text("\n".join(lines) + "\n")


def load_checkpoint(path: str | Path) -> tuple[NetSpec, Params]:
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < _HEADER.size:
        raise CheckpointError(f"{path}: truncated header")
    magic, version, iw, layers, width, k, dims, bins = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise CheckpointError(f"{path}: bad magic")
    if version != CKPT_VERSION:
        raise CheckpointError(f"{path}: version {version}, expected {CKPT_VERSION}")
    spec = NetSpec(
        input_width=iw, layers=layers, width=width, mixtures=k, act_dims=dims, bins=bins
    )
    flat = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size)
    if flat.shape != (spec.num_params,):
        raise CheckpointError(
            f"{path}: expected {spec.num_params} parameters, found {flat.shape[0]}"
        )
    return spec, unflatten_params(spec, flat)
