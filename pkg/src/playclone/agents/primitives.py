"""Phase-based proportional controllers shared by the play oracle and the
per-task scripted experts.

A primitive is a short list of phases; each phase recomputes its target from
the current observation every tick, so primitives are pure functions of the
visible state plus a tick counter.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..sim.scene import BLUE, GREEN, RED, EnvState, SceneConfig
from ..sim.simulator import is_grasped

# target components; None means "hold" (zero command on those coordinates)
Target = tuple[Optional[np.ndarray], Optional[np.ndarray], Optional[np.ndarray]]

SAFE_Z = 0.35
CLOSED = 0.1


@dataclass
class Phase:
    name: str
    target_fn: Callable[[EnvState, SceneConfig], Target]
    done_fn: Callable[[EnvState, SceneConfig], bool]
    max_ticks: int = 90


def control_action(state: EnvState, target: Target, scene: SceneConfig) -> np.ndarray:
    """Clipped proportional step from the current pose toward the target."""
    pos_t, rpy_t, grip_t = target
    a = np.zeros(8)
    if pos_t is not None:
        a[0:3] = np.clip(pos_t - state.arm_pose[:3], -scene.max_delta_pos, scene.max_delta_pos)
    if rpy_t is not None:
        a[3:6] = np.clip(
            rpy_t - state.arm_pose[3:6], -scene.max_delta_orient, scene.max_delta_orient
        )
    if grip_t is not None:
        a[6:8] = np.clip(
            grip_t - state.gripper, -scene.max_delta_gripper, scene.max_delta_gripper
        )
    return a


def run_phases(phases: list[Phase]):
    """Stateful executor over a phase list; yields one action per tick."""
    return _PhaseRunner(phases)


class _PhaseRunner:
    def __init__(self, phases: list[Phase]):
        self.phases = phases
        self.index = 0
        self.ticks_in_phase = 0

    @property
    def finished(self) -> bool:
        return self.index >= len(self.phases)

    def act(self, state: EnvState, scene: SceneConfig) -> np.ndarray:
        while not self.finished:
            phase = self.phases[self.index]
            if phase.done_fn(state, scene) or self.ticks_in_phase >= phase.max_ticks:
                self.index += 1
                self.ticks_in_phase = 0
                continue
            self.ticks_in_phase += 1
            return control_action(state, phase.target_fn(state, scene), scene)
        return np.zeros(8)


def _pos_done(target_fn, tol):
    def done(state: EnvState, scene: SceneConfig) -> bool:
        pos_t, rpy_t, grip_t = target_fn(state, scene)
        ok = True
        if pos_t is not None:
            ok &= bool(np.max(np.abs(pos_t - state.arm_pose[:3])) <= tol)
        if rpy_t is not None:
            ok &= bool(np.max(np.abs(rpy_t - state.arm_pose[3:6])) <= 0.03)
        if grip_t is not None:
            ok &= bool(np.max(np.abs(grip_t - state.gripper)) <= 0.05)
        return ok

    return done


def goto(
    name: str,
    dest_fn: Callable[[EnvState, SceneConfig], np.ndarray],
    rpy: np.ndarray | None = None,
    grip: float | None = None,
    tol: float = 0.02,
    max_ticks: int = 90,
    done_fn=None,
) -> Phase:
    def target(state: EnvState, scene: SceneConfig) -> Target:
        g = None if grip is None else np.full(2, grip)
        return dest_fn(state, scene), rpy, g

    return Phase(name, target, done_fn or _pos_done(target, tol), max_ticks)


def travel(
    name: str,
    dest_fn: Callable[[EnvState, SceneConfig], np.ndarray],
    grip: float | None = None,
    xy_tol: float = 0.005,
    final_tol: float = 0.01,
    safe_z: float = SAFE_Z,
) -> list[Phase]:
    """Raise to a safe height, traverse in xy, then descend onto the target."""

    def raise_dest(state, scene):
        return np.array([state.arm_pose[0], state.arm_pose[1], safe_z])

    def traverse_dest(state, scene):
        d = dest_fn(state, scene)
        return np.array([d[0], d[1], safe_z])

    return [
        goto(f"{name}/raise", raise_dest, grip=grip, tol=0.02, max_ticks=40),
        goto(f"{name}/traverse", traverse_dest, grip=grip, tol=xy_tol, max_ticks=120),
        goto(f"{name}/descend", dest_fn, grip=grip, tol=final_tol, max_ticks=40),
    ]


# ---------------------------------------------------------------------------
# primitive builders


def _block_pos(state: EnvState, scene: SceneConfig) -> np.ndarray:
    return state.block_pose[:3].copy()


def _above_block(dz: float):
    def dest(state, scene):
        p = state.block_pose[:3].copy()
        p[2] += dz
        return p

    return dest


def grasp_phases(scene: SceneConfig) -> list[Phase]:
    """Hover above the block, close the fingers, descend until grasped."""
    phases = travel("grasp/approach", _above_block(0.12), grip=None)
    phases.append(
        goto(
            "grasp/close",
            _above_block(0.12),
            grip=CLOSED,
            tol=0.03,
            max_ticks=8,
        )
    )
    phases.append(
        goto(
            "grasp/descend",
            _block_pos,
            grip=CLOSED,
            max_ticks=30,
            done_fn=lambda s, sc: is_grasped(s, sc),
        )
    )
    return phases


def lift_phases(height: float = 0.23) -> list[Phase]:
    def dest(state, scene):
        return np.array([state.arm_pose[0], state.arm_pose[1], height])

    return [goto("lift", dest, grip=CLOSED, tol=0.015, max_ticks=30)]


def _open_done(state: EnvState, scene: SceneConfig) -> bool:
    return bool(np.min(state.gripper) >= scene.gripper_rest - 0.05)


def release_phases() -> list[Phase]:
    return [
        Phase(
            "release",
            lambda s, sc: (s.arm_pose[:3].copy(), None, np.full(2, sc.gripper_rest)),
            _open_done,
            max_ticks=8,
        )
    ]


def place_phases(point: np.ndarray) -> list[Phase]:
    dest = lambda s, sc: np.asarray(point, dtype=float)
    return travel("place", dest, grip=CLOSED, final_tol=0.015) + release_phases()


def rotate_phases(rpy_target: np.ndarray) -> list[Phase]:
    """Rotate the wrist to an absolute orientation while holding position."""

    def target(state: EnvState, scene: SceneConfig) -> Target:
        return state.arm_pose[:3].copy(), np.asarray(rpy_target, dtype=float), np.full(2, CLOSED)

    def done(state: EnvState, scene: SceneConfig) -> bool:
        return bool(np.max(np.abs(state.arm_pose[3:6] - rpy_target)) <= 0.03)

    return [Phase("rotate", target, done, max_ticks=40)]


def press_button_phases(idx: int) -> list[Phase]:
    def above(state, scene):
        c = scene.button_center(idx)
        return np.array([c[0], c[1], 0.15])

    def down(state, scene):
        c = scene.button_center(idx)
        return np.array([c[0], c[1], 0.0])

    def pressed(state, scene):
        return state.buttons[idx] >= scene.button_max - 1e-9

    name = ("press_red", "press_green", "press_blue")[idx]
    phases = travel(f"{name}/approach", above, xy_tol=0.02, final_tol=0.02)
    phases.append(goto(f"{name}/press", down, max_ticks=20, done_fn=pressed))
    phases.append(goto(f"{name}/retreat", above, tol=0.03, max_ticks=20))
    return phases


def drawer_phases(open_drawer: bool) -> list[Phase]:
    def handle(state, scene):
        return scene.drawer_handle(state.drawer)

    def above_handle(state, scene):
        h = scene.drawer_handle(state.drawer)
        return np.array([h[0], h[1], h[2] + 0.15])

    if open_drawer:
        def drag(state, scene):
            h = scene.drawer_handle(scene.drawer_max)
            return np.array([h[0], h[1] - 0.02, h[2]])

        def done(state, scene):
            return state.drawer >= 0.97 * scene.drawer_max

        name = "open_drawer"
    else:
        def drag(state, scene):
            h = scene.drawer_handle(0.0)
            return np.array([h[0], h[1] + 0.02, h[2]])

        def done(state, scene):
            return state.drawer <= 0.01 * scene.drawer_max

        name = "close_drawer"

    phases = travel(f"{name}/approach", above_handle, xy_tol=0.02, final_tol=0.02)
    phases.append(goto(f"{name}/engage", handle, tol=0.01, max_ticks=20))
    phases.append(goto(f"{name}/drag", drag, max_ticks=40, done_fn=done))
    return phases


def slider_phases(open_slider: bool) -> list[Phase]:
    def handle(state, scene):
        return scene.slider_handle(state.slider)

    def above_handle(state, scene):
        h = scene.slider_handle(state.slider)
        return np.array([h[0], h[1], h[2] + 0.15])

    if open_slider:
        def drag(state, scene):
            h = scene.slider_handle(scene.slider_max)
            return np.array([h[0] + 0.02, h[1], h[2]])

        def done(state, scene):
            return state.slider >= 0.97 * scene.slider_max

        name = "open_slider"
    else:
        def drag(state, scene):
            h = scene.slider_handle(0.0)
            return np.array([h[0] - 0.02, h[1], h[2]])

        def done(state, scene):
            return state.slider <= 0.01 * scene.slider_max

        name = "close_slider"

    phases = travel(f"{name}/approach", above_handle, xy_tol=0.02, final_tol=0.02)
    phases.append(goto(f"{name}/engage", handle, tol=0.01, max_ticks=20))
    phases.append(goto(f"{name}/drag", drag, max_ticks=40, done_fn=done))
    return phases


def sweep_phases(direction: str, stop_fn) -> list[Phase]:
    """Push the block with a closed fist along one axis until stop_fn holds."""
    offsets = {
        "left": np.array([0.13, 0.0, 0.0]),
        "right": np.array([-0.13, 0.0, 0.0]),
        "front": np.array([0.0, 0.13, 0.0]),
    }
    offset = offsets[direction]

    def stand(state, scene):
        return state.block_pose[:3] + offset

    def push(state, scene):
        p = state.block_pose[:3] - 4.0 * offset
        p[2] = state.block_pose[2]
        return p

    phases = travel(f"sweep_{direction}/approach", stand, grip=CLOSED, final_tol=0.015)
    phases.append(goto(f"sweep_{direction}/push", push, grip=CLOSED, max_ticks=60, done_fn=stop_fn))
    return phases
