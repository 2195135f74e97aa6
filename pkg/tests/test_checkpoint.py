import numpy as np
import pytest

from playclone.seqnet.checkpoint import (
    CheckpointError,
    load_checkpoint,
    save_checkpoint,
)
from playclone.seqnet.netspec import NetSpec, flatten_params, init_params


@pytest.fixture
def spec():
    return NetSpec(input_width=19, layers=2, width=16, mixtures=3)


def test_roundtrip_bitwise(tmp_path, spec):
    params = init_params(spec, np.random.default_rng(0))
    path = tmp_path / "p.ckpt"
    save_checkpoint(path, spec, params)
    spec2, params2 = load_checkpoint(path)
    assert spec2 == spec
    np.testing.assert_array_equal(
        flatten_params(spec, params), flatten_params(spec2, params2)
    )


def test_sidecar_written(tmp_path, spec):
    params = init_params(spec, np.random.default_rng(1))
    path = tmp_path / "p.ckpt"
    save_checkpoint(path, spec, params, sidecar={"steps": 100, "loss": 0.25})
    text = (tmp_path / "p.ckpt.txt").read_text()
    assert "steps=100" in text and "loss=0.25" in text


def test_bad_magic(tmp_path, spec):
    params = init_params(spec, np.random.default_rng(2))
    path = tmp_path / "p.ckpt"
    save_checkpoint(path, spec, params)
    raw = bytearray(path.read_bytes())
    raw[:4] = b"XXXX"
    path.write_bytes(bytes(raw))
    with pytest.raises(CheckpointError, match="magic"):
        load_checkpoint(path)


def test_bad_version(tmp_path, spec):
    params = init_params(spec, np.random.default_rng(3))
    path = tmp_path / "p.ckpt"
    save_checkpoint(path, spec, params)
    raw = bytearray(path.read_bytes())
    raw[4] = 99
    path.write_bytes(bytes(raw))
    with pytest.raises(CheckpointError, match="version"):
        load_checkpoint(path)


def test_truncated_payload(tmp_path, spec):
    params = init_params(spec, np.random.default_rng(4))
    path = tmp_path / "p.ckpt"
    save_checkpoint(path, spec, params)
    raw = path.read_bytes()
    path.write_bytes(raw[: len(raw) - 16])
    with pytest.raises(CheckpointError, match="parameters"):
        load_checkpoint(path)


def test_truncated_header(tmp_path):
    path = tmp_path / "p.ckpt"
    path.write_bytes(b"PLCK\x01")
    with pytest.raises(CheckpointError, match="header"):
        load_checkpoint(path)
