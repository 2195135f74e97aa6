"""Scripted play oracle: a stand-in for a human teleoperator.

The oracle strings together manipulation primitives drawn at random from a
catalog covering every behavior in the 18-task benchmark, interleaved with
aimless "wander" motions. It is deterministic given its seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..sim.scene import BLUE, GREEN, RED, EnvState, SceneConfig
from . import primitives as prim
from .primitives import Phase, _PhaseRunner, goto, travel

PRIMITIVE_NAMES = (
    "reach",
    "grasp",
    "lift",
    "place",
    "upright",
    "tip",
    "open_drawer",
    "close_drawer",
    "open_slider",
    "close_slider",
    "press_red",
    "press_green",
    "press_blue",
    "sweep_left",
    "sweep_right",
    "sweep_front",
    "rotate_left",
    "rotate_right",
    "shelf_in",
    "shelf_out",
)

WANDER = "wander"


@dataclass
class OracleConfig:
    seed: int = 0
    wander_prob: float = 0.1
    catalog: tuple[str, ...] = PRIMITIVE_NAMES


def _rand_point(rng: np.random.Generator, scene: SceneConfig) -> np.ndarray:
    return np.array(
        [
            rng.uniform(-0.6, 0.6),
            rng.uniform(-0.6, 0.5),
            rng.uniform(0.05, 0.45),
        ]
    )


def _needs_block(phases_if_not_grasped: list[Phase], state, scene) -> list[Phase]:
    from ..sim.simulator import is_grasped

    if is_grasped(state, scene):
        return []
    return phases_if_not_grasped


def build_primitive(
    name: str, state: EnvState, scene: SceneConfig, rng: np.random.Generator
) -> list[Phase]:
    """Phase list for one primitive, adapted to the current state."""
    from ..sim.simulator import is_grasped

    grasped = is_grasped(state, scene)
    grasp_prefix = [] if grasped else prim.grasp_phases(scene)

    if name == "reach" or name == WANDER:
        point = _rand_point(rng, scene)
        return [goto(name, lambda s, sc: point, tol=0.02, max_ticks=60)]
    if name == "grasp":
        return prim.grasp_phases(scene)
    if name == "lift":
        return grasp_prefix + prim.lift_phases()
    if name == "place":
        point = _rand_point(rng, scene)
        point[2] = rng.uniform(0.05, 0.25)
        return grasp_prefix + prim.lift_phases(0.3) + prim.place_phases(point)
    if name == "upright":
        return (
            grasp_prefix
            + prim.lift_phases()
            + prim.rotate_phases(np.array([0.0, np.pi / 2, state.arm_pose[5]]))
        )
    if name == "tip":
        roll = rng.choice([-1.0, 1.0]) * (scene.knock_angle + 0.25)
        return grasp_prefix + prim.rotate_phases(
            np.array([roll, 0.0, state.arm_pose[5]])
        ) + prim.release_phases()
    if name == "open_drawer":
        return prim.drawer_phases(True)
    if name == "close_drawer":
        return prim.drawer_phases(False)
    if name == "open_slider":
        return prim.slider_phases(True)
    if name == "close_slider":
        return prim.slider_phases(False)
    if name in ("press_red", "press_green", "press_blue"):
        idx = {"press_red": RED, "press_green": GREEN, "press_blue": BLUE}[name]
        return prim.press_button_phases(idx)
    if name in ("sweep_left", "sweep_right", "sweep_front"):
        direction = name.split("_")[1]
        targets = {
            "left": lambda s, sc: s.block_pose[0] <= sc.sweep_left_x - 0.02,
            "right": lambda s, sc: s.block_pose[0] >= sc.sweep_right_x + 0.02,
            "front": lambda s, sc: s.block_pose[1] <= sc.sweep_off_y - 0.02,
        }
        return prim.sweep_phases(direction, targets[direction])
    if name == "rotate_left":
        return grasp_prefix + prim.rotate_phases(
            np.array([0.0, 0.0, scene.rotate_angle + 0.2])
        ) + prim.release_phases()
    if name == "rotate_right":
        return grasp_prefix + prim.rotate_phases(
            np.array([0.0, 0.0, -(scene.rotate_angle + 0.2)])
        ) + prim.release_phases()
    if name == "shelf_in":
        center = scene.shelf_center()
        point = np.array([center[0], center[1], 0.15])
        return grasp_prefix + prim.lift_phases(0.35) + prim.place_phases(point)
    if name == "shelf_out":
        point = np.array([rng.uniform(-0.1, 0.2), rng.uniform(-0.2, 0.1), 0.05])
        return grasp_prefix + prim.lift_phases(0.35) + prim.place_phases(point)
    raise ValueError(f"unknown primitive {name!r}")


@dataclass
class PrimitiveSwitch:
    tick: int
    name: str


class PlayOracle:
    """Stateful play generator; call act() once per simulator tick."""

    def __init__(self, scene: SceneConfig, config: OracleConfig | None = None):
        self.scene = scene
        self.config = config or OracleConfig()
        self.rng = np.random.default_rng(np.random.SeedSequence(self.config.seed))
        self.runner: _PhaseRunner | None = None
        self.current: str | None = None
        self.tick = 0
        self.switch_log: list[PrimitiveSwitch] = []

    def _draw_primitive(self, state: EnvState) -> None:
        if self.rng.uniform() < self.config.wander_prob:
            name = WANDER
        else:
            name = str(self.rng.choice(self.config.catalog))
        self.current = name
        self.runner = _PhaseRunner(build_primitive(name, state, self.scene, self.rng))
        self.switch_log.append(PrimitiveSwitch(self.tick, name))

    def act(self, state: EnvState) -> np.ndarray:
        if self.runner is None or self.runner.finished:
            self._draw_primitive(state)
        action = self.runner.act(state, self.scene)
        if self.runner.finished:
            # primitive completed this tick; emit its (near-zero) final action
            pass
        self.tick += 1
        return action
