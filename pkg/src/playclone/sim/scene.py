"""Scene geometry, observation and action types for the playroom simulator.

The observation is a flat vector of 19 coordinates: 8 robot coordinates
(end-effector pose + two gripper finger angles) followed by 11 environment
coordinates (block pose, drawer, slider, three buttons). Actions are 8
per-tick deltas for the same robot coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

import numpy as np

OBS_DIM = 19
ACT_DIM = 8

RED, GREEN, BLUE = 0, 1, 2


class InvalidStateError(ValueError):
    """An EnvState coordinate is outside its configured range."""

    def __init__(self, index: int, value: float, low: float, high: float):
        self.index = index
        super().__init__(
            f"state coordinate {index} = {value:.6g} outside [{low:.6g}, {high:.6g}]"
        )


@dataclass
class SceneConfig:
    """Fixed geometry and limits of the playroom. All lengths in meters."""

    # workspace box for the end effector (and the block)
    workspace_min: tuple[float, float, float] = (-1.0, -1.0, 0.0)
    workspace_max: tuple[float, float, float] = (1.0, 1.0, 1.0)
    orient_min: float = -math.pi
    orient_max: float = math.pi

    # gripper finger angles (rad); both fingers share the range
    gripper_min: float = 0.0
    gripper_max: float = 1.0
    gripper_rest: float = 0.8
    grasp_close_angle: float = 0.25  # both fingers at or below -> closed

    # block
    block_rest_z: float = 0.03
    block_contact_radius: float = 0.10  # pushing contact distance
    grasp_radius: float = 0.05
    lift_height: float = 0.15
    block_fall_rate: float = 0.05  # per-tick settle toward rest height

    # drawer: slides out toward -y; handle tracked at the drawer front
    drawer_max: float = 0.25
    drawer_handle_base: tuple[float, float, float] = (0.5, -0.45, 0.05)

    # sliding door: slides toward +x along the back wall
    slider_max: float = 0.25
    slider_handle_base: tuple[float, float, float] = (-0.45, 0.8, 0.10)

    handle_engage_radius: float = 0.08

    # buttons: momentary, depression measured in meters
    button_max: float = 0.02
    button_radius: float = 0.06
    button_relax_rate: float = 0.01
    press_threshold: float = 0.01
    button_centers: tuple[tuple[float, float], ...] = (
        (-0.5, 0.55),
        (-0.28, 0.55),
        (-0.06, 0.55),
    )

    # shelf region behind the sliding door
    shelf_min: tuple[float, float, float] = (-0.85, 0.65, 0.0)
    shelf_max: tuple[float, float, float] = (-0.55, 0.95, 0.30)

    # per-tick action bounds (position, orientation, gripper)
    max_delta_pos: float = 0.05
    max_delta_orient: float = 0.15
    max_delta_gripper: float = 0.3

    # task thresholds
    rotate_angle: float = 0.5
    knock_angle: float = 0.4
    upright_tol: float = 0.3
    flat_tol: float = 0.3
    open_frac: float = 0.9
    close_frac: float = 0.1
    sweep_left_x: float = -0.5
    sweep_right_x: float = 0.5
    sweep_off_y: float = -0.75

    hz: int = 30
    task_budget_ticks: int = 450

    def __post_init__(self):
        for lo, hi in zip(self.workspace_min, self.workspace_max):
            if not hi > lo:
                raise ValueError("degenerate workspace range")
        for name in ("drawer_max", "slider_max", "button_max"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.hz <= 0:
            raise ValueError("hz must be positive")

    def action_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        hi = np.array(
            [self.max_delta_pos] * 3
            + [self.max_delta_orient] * 3
            + [self.max_delta_gripper] * 2
        )
        return -hi, hi

    def coordinate_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Closed per-coordinate ranges of the flattened 19-dim state."""
        lo = np.empty(OBS_DIM)
        hi = np.empty(OBS_DIM)
        lo[0:3], hi[0:3] = self.workspace_min, self.workspace_max
        lo[3:6], hi[3:6] = self.orient_min, self.orient_max
        lo[6:8], hi[6:8] = self.gripper_min, self.gripper_max
        lo[8:11], hi[8:11] = self.workspace_min, self.workspace_max
        lo[10] = self.block_rest_z  # block never below the table plane
        lo[11:14], hi[11:14] = self.orient_min, self.orient_max
        lo[14], hi[14] = 0.0, self.drawer_max
        lo[15], hi[15] = 0.0, self.slider_max
        lo[16:19], hi[16:19] = 0.0, self.button_max
        return lo, hi

    def button_center(self, idx: int) -> np.ndarray:
        cx, cy = self.button_centers[idx]
        return np.array([cx, cy, 0.0])

    def drawer_handle(self, extension: float) -> np.ndarray:
        x, y, z = self.drawer_handle_base
        return np.array([x, y - extension, z])

    def slider_handle(self, position: float) -> np.ndarray:
        x, y, z = self.slider_handle_base
        return np.array([x + position, y, z])

    def shelf_center(self) -> np.ndarray:
        return (np.array(self.shelf_min) + np.array(self.shelf_max)) / 2.0

    def in_shelf(self, point: np.ndarray) -> bool:
        lo = np.array(self.shelf_min)
        hi = np.array(self.shelf_max)
        return bool(np.all(point >= lo) and np.all(point <= hi))

    def to_flat_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = v
        return out


@dataclass
class EnvState:
    """One 19-dim observation: 8 robot coordinates then 11 environment ones."""

    arm_pose: np.ndarray  # (6,) x, y, z, roll, pitch, yaw
    gripper: np.ndarray  # (2,) finger angles
    block_pose: np.ndarray  # (6,) x, y, z, roll, pitch, yaw
    drawer: float
    slider: float
    buttons: np.ndarray  # (3,) depression depths, red/green/blue

    def to_vector(self) -> np.ndarray:
        return np.concatenate(
            [
                np.asarray(self.arm_pose, dtype=float),
                np.asarray(self.gripper, dtype=float),
                np.asarray(self.block_pose, dtype=float),
                [float(self.drawer), float(self.slider)],
                np.asarray(self.buttons, dtype=float),
            ]
        )

    @staticmethod
    def from_vector(v: np.ndarray) -> "EnvState":
        v = np.asarray(v, dtype=float)
        if v.shape != (OBS_DIM,):
            raise ValueError(f"expected state vector of length {OBS_DIM}, got {v.shape}")
        return EnvState(
            arm_pose=v[0:6].copy(),
            gripper=v[6:8].copy(),
            block_pose=v[8:14].copy(),
            drawer=float(v[14]),
            slider=float(v[15]),
            buttons=v[16:19].copy(),
        )

    def copy(self) -> "EnvState":
        return EnvState.from_vector(self.to_vector())

    def validate(self, scene: SceneConfig) -> None:
        """Raise InvalidStateError naming the first out-of-range coordinate."""
        v = self.to_vector()
        lo, hi = scene.coordinate_bounds()
        for i in range(OBS_DIM):
            if not (lo[i] <= v[i] <= hi[i]):
                raise InvalidStateError(i, v[i], lo[i], hi[i])


def rotation_matrix(rpy: np.ndarray) -> np.ndarray:
    """World-frame rotation R = Rz(yaw) @ Ry(pitch) @ Rx(roll)."""
    r, p, y = rpy
    cr, sr = math.cos(r), math.sin(r)
    cp, sp = math.cos(p), math.sin(p)
    cy, sy = math.cos(y), math.sin(y)
    rx = np.array([[1, 0, 0], [0, cr, -sr], [0, sr, cr]])
    ry = np.array([[cp, 0, sp], [0, 1, 0], [-sp, 0, cp]])
    rz = np.array([[cy, -sy, 0], [sy, cy, 0], [0, 0, 1]])
    return rz @ ry @ rx
