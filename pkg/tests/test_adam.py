import numpy as np
import pytest

from playclone.seqnet.adam import AdamState, adam_step, clip_grad_norm


def test_descent_direction_on_square():
    # f(p) = p^2 from p=1 with lr .1: one step decreases p
    p = np.array([1.0])
    state = AdamState(dim=1, lr=0.1)
    p2, _ = adam_step(p, 2 * p, state)
    assert p2[0] < 1.0


def test_converges_on_convex_quadratic():
    # f(p) = 0.5 (p - c)^T A (p - c), A diagonal PSD; minimizer is c
    rng = np.random.default_rng(0)
    c = rng.normal(size=4)
    a = np.array([1.0, 2.0, 0.5, 3.0])
    p = np.zeros(4)
    state = AdamState(dim=4, lr=0.05)
    for _ in range(500):
        p, state = adam_step(p, a * (p - c), state)
    assert np.max(np.abs(p - c)) <= 1e-3


def test_pure_update_does_not_mutate():
    p = np.ones(3)
    g = np.ones(3)
    state = AdamState(dim=3)
    p2, state2 = adam_step(p, g, state)
    assert np.array_equal(p, np.ones(3))
    assert state.step == 0 and state2.step == 1
    assert np.all(state.m == 0.0)


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        adam_step(np.ones(3), np.ones(4), AdamState(dim=3))


def test_clip_grad_norm():
    g = np.array([3.0, 4.0])  # norm 5
    clipped, norm = clip_grad_norm(g, 1.0)
    assert norm == 5.0
    assert np.linalg.norm(clipped) == pytest.approx(1.0)
    same, norm2 = clip_grad_norm(g, 10.0)
    assert np.array_equal(same, g) and norm2 == 5.0
