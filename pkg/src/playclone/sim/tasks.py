"""The 18 benchmark manipulation tasks.

Each task owns an initial-state sampler, a goal-state sampler and a success
predicate over single observations; a trajectory succeeds if the predicate
holds at any tick. Predicates are pure functions of one state, so a sampled
goal always satisfies its own task's predicate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .scene import BLUE, GREEN, RED, EnvState, SceneConfig
from .simulator import is_grasped, sample_rest_state

TASK_IDS = (
    "grasp_lift",
    "grasp_upright",
    "grasp_flat",
    "drawer",
    "close_drawer",
    "open_sliding",
    "close_sliding",
    "knock_object",
    "sweep_object",
    "push_red_button",
    "push_green_button",
    "push_blue_button",
    "put_into_shelf",
    "pull_out_of_shelf",
    "rotate_left",
    "rotate_right",
    "sweep_left",
    "sweep_right",
)


class UnknownTaskError(ValueError):
    def __init__(self, task_id: str):
        super().__init__(
            f"unknown task {task_id!r}; valid tasks: {', '.join(TASK_IDS)}"
        )


@dataclass(frozen=True)
class TaskInstance:
    task_id: str
    initial: EnvState
    goal: EnvState
    budget: int


def _lifted_grasp(state: EnvState, sc: SceneConfig) -> bool:
    return is_grasped(state, sc) and state.block_pose[2] >= sc.lift_height


def _predicate(task_id: str, sc: SceneConfig) -> Callable[[EnvState], bool]:
    if task_id == "grasp_lift":
        return lambda s: _lifted_grasp(s, sc)
    if task_id == "grasp_upright":
        return lambda s: _lifted_grasp(s, sc) and abs(
            s.block_pose[4] - np.pi / 2
        ) <= sc.upright_tol
    if task_id == "grasp_flat":
        return lambda s: (
            _lifted_grasp(s, sc)
            and abs(s.block_pose[3]) <= sc.flat_tol
            and abs(s.block_pose[4]) <= sc.flat_tol
        )
    if task_id == "drawer":
        return lambda s: s.drawer >= sc.open_frac * sc.drawer_max
    if task_id == "close_drawer":
        return lambda s: s.drawer <= sc.close_frac * sc.drawer_max
    if task_id == "open_sliding":
        return lambda s: s.slider >= sc.open_frac * sc.slider_max
    if task_id == "close_sliding":
        return lambda s: s.slider <= sc.close_frac * sc.slider_max
    if task_id == "knock_object":
        return lambda s: abs(s.block_pose[3]) >= sc.knock_angle and s.block_pose[2] < sc.lift_height
    if task_id == "sweep_object":
        return lambda s: s.block_pose[1] <= sc.sweep_off_y
    if task_id == "push_red_button":
        return lambda s: s.buttons[RED] >= sc.press_threshold
    if task_id == "push_green_button":
        return lambda s: s.buttons[GREEN] >= sc.press_threshold
    if task_id == "push_blue_button":
        return lambda s: s.buttons[BLUE] >= sc.press_threshold
    if task_id == "put_into_shelf":
        return lambda s: sc.in_shelf(s.block_pose[:3])
    if task_id == "pull_out_of_shelf":
        return lambda s: (
            not sc.in_shelf(s.block_pose[:3])
            and s.block_pose[1] <= sc.shelf_min[1] - 0.1
            and s.block_pose[2] <= sc.lift_height
        )
    if task_id == "rotate_left":
        return lambda s: s.block_pose[5] >= sc.rotate_angle
    if task_id == "rotate_right":
        return lambda s: s.block_pose[5] <= -sc.rotate_angle
    if task_id == "sweep_left":
        return lambda s: s.block_pose[0] <= sc.sweep_left_x
    if task_id == "sweep_right":
        return lambda s: s.block_pose[0] >= sc.sweep_right_x
    raise UnknownTaskError(task_id)


def _initial_state(task_id: str, sc: SceneConfig, rng: np.random.Generator) -> EnvState:
    s = sample_rest_state(sc, rng)
    # neutral articulation state, then open/close per task precondition
    s.drawer = float(rng.uniform(0.0, sc.close_frac * sc.drawer_max))
    s.slider = float(rng.uniform(0.0, sc.close_frac * sc.slider_max))
    if task_id == "close_drawer":
        s.drawer = float(rng.uniform(sc.open_frac * sc.drawer_max, sc.drawer_max))
    if task_id == "close_sliding":
        s.slider = float(rng.uniform(sc.open_frac * sc.slider_max, sc.slider_max))
    if task_id in ("put_into_shelf",):
        s.slider = float(rng.uniform(sc.open_frac * sc.slider_max, sc.slider_max))
    if task_id == "pull_out_of_shelf":
        s.slider = float(rng.uniform(sc.open_frac * sc.slider_max, sc.slider_max))
        center = sc.shelf_center()
        s.block_pose[0] = center[0] + rng.uniform(-0.05, 0.05)
        s.block_pose[1] = center[1] + rng.uniform(-0.05, 0.05)
        s.block_pose[2] = sc.block_rest_z
    if task_id == "sweep_right":
        # leave room to the right of the block
        s.block_pose[0] = rng.uniform(-0.2, 0.0)
    if task_id == "sweep_left":
        s.block_pose[0] = rng.uniform(0.1, 0.3)
    if task_id == "sweep_object":
        s.block_pose[1] = rng.uniform(-0.2, 0.15)
    return s


def _goal_state(
    task_id: str, initial: EnvState, sc: SceneConfig, rng: np.random.Generator
) -> EnvState:
    g = initial.copy()

    def grasp_at_block():
        g.arm_pose[:3] = g.block_pose[:3]
        g.gripper[:] = sc.grasp_close_angle / 2.0

    if task_id in ("grasp_lift", "grasp_upright", "grasp_flat"):
        g.block_pose[2] = sc.lift_height + 0.05
        if task_id == "grasp_upright":
            g.block_pose[4] = np.pi / 2
            g.arm_pose[4] = np.pi / 2
        grasp_at_block()
        g.arm_pose[3:6] = g.block_pose[3:6] - initial.block_pose[3:6] + initial.arm_pose[3:6]
        if task_id == "grasp_upright":
            g.arm_pose[4] = np.pi / 2
    elif task_id == "drawer":
        g.drawer = sc.drawer_max
        g.arm_pose[:3] = sc.drawer_handle(g.drawer)
    elif task_id == "close_drawer":
        g.drawer = 0.0
        g.arm_pose[:3] = sc.drawer_handle(g.drawer)
    elif task_id == "open_sliding":
        g.slider = sc.slider_max
        g.arm_pose[:3] = sc.slider_handle(g.slider)
    elif task_id == "close_sliding":
        g.slider = 0.0
        g.arm_pose[:3] = sc.slider_handle(g.slider)
    elif task_id == "knock_object":
        g.block_pose[3] = sc.knock_angle + 0.2
        g.block_pose[2] = sc.block_rest_z
        g.arm_pose[:3] = g.block_pose[:3] + np.array([0.0, 0.0, 0.12])
    elif task_id == "sweep_object":
        g.block_pose[1] = sc.sweep_off_y - 0.05
        g.arm_pose[:3] = g.block_pose[:3] + np.array([0.0, 0.11, 0.0])
    elif task_id in ("push_red_button", "push_green_button", "push_blue_button"):
        idx = {"push_red_button": RED, "push_green_button": GREEN, "push_blue_button": BLUE}[
            task_id
        ]
        g.buttons = initial.buttons.copy()
        g.buttons[idx] = sc.button_max
        g.arm_pose[:3] = sc.button_center(idx)
    elif task_id == "put_into_shelf":
        center = sc.shelf_center()
        g.block_pose[:3] = [center[0], center[1], sc.block_rest_z]
        grasp_at_block()
    elif task_id == "pull_out_of_shelf":
        g.block_pose[:3] = [
            rng.uniform(-0.1, 0.2),
            rng.uniform(-0.2, 0.1),
            sc.block_rest_z,
        ]
        grasp_at_block()
    elif task_id == "rotate_left":
        g.block_pose[5] = sc.rotate_angle + 0.15
        grasp_at_block()
    elif task_id == "rotate_right":
        g.block_pose[5] = -(sc.rotate_angle + 0.15)
        grasp_at_block()
    elif task_id == "sweep_left":
        g.block_pose[0] = sc.sweep_left_x - 0.1
        g.arm_pose[:3] = g.block_pose[:3] + np.array([0.11, 0.0, 0.0])
    elif task_id == "sweep_right":
        g.block_pose[0] = sc.sweep_right_x + 0.1
        g.arm_pose[:3] = g.block_pose[:3] + np.array([-0.11, 0.0, 0.0])
    else:
        raise UnknownTaskError(task_id)
    return g


def make_task_instance(
    task_id: str, seed: int, scene: SceneConfig | None = None
) -> TaskInstance:
    """Deterministic (initial, goal, budget) for one benchmark trial."""
    if task_id not in TASK_IDS:
        raise UnknownTaskError(task_id)
    sc = scene or SceneConfig()
    rng = np.random.default_rng(
        np.random.SeedSequence(entropy=(TASK_IDS.index(task_id), seed))
    )
    initial = _initial_state(task_id, sc, rng)
    goal = _goal_state(task_id, initial, sc, rng)
    initial.validate(sc)
    goal.validate(sc)
    pred = _predicate(task_id, sc)
    assert pred(goal), f"goal sampler for {task_id} violated its own predicate"
    return TaskInstance(task_id, initial, goal, sc.task_budget_ticks)


def task_success(
    task_id: str, trajectory: Sequence[EnvState], scene: SceneConfig | None = None
) -> bool:
    """True iff the task predicate holds at some tick of the trajectory."""
    if task_id not in TASK_IDS:
        raise UnknownTaskError(task_id)
    if len(trajectory) == 0:
        raise ValueError("task_success requires a non-empty trajectory")
    pred = _predicate(task_id, scene or SceneConfig())
    return any(pred(s) for s in trajectory)
