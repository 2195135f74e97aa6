"""Per-task scripted experts, used to validate task predicates and as a
success upper bound in the benchmark harness."""

from __future__ import annotations

import numpy as np

from ..sim.scene import BLUE, GREEN, RED, EnvState, SceneConfig
from ..sim.tasks import TASK_IDS, UnknownTaskError
from . import primitives as prim
from .primitives import Phase, _PhaseRunner


def expert_phases(task_id: str, scene: SceneConfig) -> list[Phase]:
    if task_id == "grasp_lift" or task_id == "grasp_flat":
        return prim.grasp_phases(scene) + prim.lift_phases(scene.lift_height + 0.06)
    if task_id == "grasp_upright":
        return (
            prim.grasp_phases(scene)
            + prim.lift_phases(scene.lift_height + 0.1)
            + prim.rotate_phases(np.array([0.0, np.pi / 2, 0.0]))
        )
    if task_id == "drawer":
        return prim.drawer_phases(True)
    if task_id == "close_drawer":
        return prim.drawer_phases(False)
    if task_id == "open_sliding":
        return prim.slider_phases(True)
    if task_id == "close_sliding":
        return prim.slider_phases(False)
    if task_id == "knock_object":
        return prim.grasp_phases(scene) + prim.rotate_phases(
            np.array([scene.knock_angle + 0.25, 0.0, 0.0])
        )
    if task_id == "sweep_object":
        return prim.sweep_phases(
            "front", lambda s, sc: s.block_pose[1] <= sc.sweep_off_y - 0.02
        )
    if task_id in ("push_red_button", "push_green_button", "push_blue_button"):
        idx = {
            "push_red_button": RED,
            "push_green_button": GREEN,
            "push_blue_button": BLUE,
        }[task_id]
        return prim.press_button_phases(idx)
    if task_id == "put_into_shelf":
        center = scene.shelf_center()
        return (
            prim.grasp_phases(scene)
            + prim.lift_phases(0.35)
            + prim.place_phases(np.array([center[0], center[1], 0.15]))
        )
    if task_id == "pull_out_of_shelf":
        return (
            prim.grasp_phases(scene)
            + prim.lift_phases(0.35)
            + prim.place_phases(np.array([0.05, -0.1, 0.06]))
        )
    if task_id == "rotate_left":
        return prim.grasp_phases(scene) + prim.rotate_phases(
            np.array([0.0, 0.0, scene.rotate_angle + 0.2])
        )
    if task_id == "rotate_right":
        return prim.grasp_phases(scene) + prim.rotate_phases(
            np.array([0.0, 0.0, -(scene.rotate_angle + 0.2)])
        )
    if task_id == "sweep_left":
        return prim.sweep_phases(
            "left", lambda s, sc: s.block_pose[0] <= sc.sweep_left_x - 0.02
        )
    if task_id == "sweep_right":
        return prim.sweep_phases(
            "right", lambda s, sc: s.block_pose[0] >= sc.sweep_right_x + 0.02
        )
    raise UnknownTaskError(task_id)


class ExpertPolicy:
    """Policy-interface adapter around the scripted per-task controllers."""

    def __init__(self, scene: SceneConfig):
        self.scene = scene
        self.runner: _PhaseRunner | None = None

    def begin_episode(self, task_id: str, initial: EnvState, goal: EnvState, rng=None):
        self.runner = _PhaseRunner(expert_phases(task_id, self.scene))

    def act(self, state: EnvState) -> np.ndarray:
        assert self.runner is not None, "begin_episode before act"
        return self.runner.act(state, self.scene)
