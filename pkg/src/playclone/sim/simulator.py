"""Deterministic kinematic playroom simulator.

Contact handling is recomputed from the current observation every tick, so
the full simulator state *is* the 19-dim observation: serializing it,
resetting a fresh simulator from it and replaying the same actions
reproduces the original trajectory bit for bit.
"""

from __future__ import annotations

import numpy as np

from .scene import ACT_DIM, EnvState, SceneConfig, rotation_matrix


class UninitializedEnvError(RuntimeError):
    pass


def is_grasped(state: EnvState, scene: SceneConfig) -> bool:
    """Both fingers closed beyond the grasp angle and effector at the block."""
    closed = bool(np.all(state.gripper <= scene.grasp_close_angle))
    dist = float(np.linalg.norm(state.arm_pose[:3] - state.block_pose[:3]))
    return closed and dist <= scene.grasp_radius


def sample_rest_state(scene: SceneConfig, rng: np.random.Generator) -> EnvState:
    """A valid randomized rest configuration used by seeded resets."""
    arm = np.zeros(6)
    arm[0] = rng.uniform(-0.6, 0.6)
    arm[1] = rng.uniform(-0.6, 0.4)
    arm[2] = rng.uniform(0.1, 0.5)
    block = np.zeros(6)
    block[0] = rng.uniform(-0.2, 0.3)
    block[1] = rng.uniform(-0.3, 0.15)
    block[2] = scene.block_rest_z
    block[5] = rng.uniform(-0.1, 0.1)
    return EnvState(
        arm_pose=arm,
        gripper=np.full(2, scene.gripper_rest),
        block_pose=block,
        drawer=float(rng.uniform(0.0, scene.drawer_max)),
        slider=float(rng.uniform(0.0, scene.slider_max)),
        buttons=np.zeros(3),
    )


class Simulator:
    """Single-owner playroom instance. No global state; seed everything."""

    def __init__(self, scene: SceneConfig | None = None):
        self.scene = scene or SceneConfig()
        self._state: EnvState | None = None

    def reset(self, initial: EnvState | None = None, seed: int | None = None) -> EnvState:
        if initial is not None:
            initial.validate(self.scene)
            self._state = initial.copy()
        else:
            if seed is None:
                raise ValueError("reset requires an EnvState or a seed")
            rng = np.random.default_rng(np.random.SeedSequence(seed))
            self._state = sample_rest_state(self.scene, rng)
        return self.observe()

    def observe(self) -> EnvState:
        if self._state is None:
            raise UninitializedEnvError("uninitialized environment: call reset first")
        return self._state.copy()

    def grasped(self) -> bool:
        return is_grasped(self.observe(), self.scene)

    def step(self, action: np.ndarray) -> EnvState:
        if self._state is None:
            raise UninitializedEnvError("uninitialized environment: call reset first")
        sc = self.scene
        a = np.asarray(action, dtype=float).reshape(ACT_DIM)
        lo_a, hi_a = sc.action_bounds()
        a = np.clip(a, lo_a, hi_a)

        s = self._state
        old_pos = s.arm_pose[:3].copy()
        old_rpy = s.arm_pose[3:6].copy()
        grasped = is_grasped(s, sc)

        # integrate the effector, then clamp to the workspace box
        new_pos = np.clip(
            old_pos + a[0:3], np.array(sc.workspace_min), np.array(sc.workspace_max)
        )
        new_rpy = np.clip(old_rpy + a[3:6], sc.orient_min, sc.orient_max)
        new_grip = np.clip(s.gripper + a[6:8], sc.gripper_min, sc.gripper_max)

        block = s.block_pose.copy()
        if grasped:
            # rigid follow: offset constant in the effector frame
            rel = block[:3] - old_pos
            delta_r = rotation_matrix(new_rpy) @ rotation_matrix(old_rpy).T
            block[:3] = new_pos + delta_r @ rel
            block[3:6] = np.clip(
                block[3:6] + (new_rpy - old_rpy), sc.orient_min, sc.orient_max
            )
        else:
            # pushing: resolve penetration along the dominant separation axis,
            # moving the block at most as far as the effector itself moved
            diff = block[:3] - new_pos
            dist = float(np.linalg.norm(diff))
            if dist < sc.block_contact_radius:
                axis = int(np.argmax(np.abs(diff)))
                sign = 1.0 if diff[axis] > 0 else -1.0
                target = new_pos[axis] + sign * sc.block_contact_radius
                needed = abs(target - block[axis])
                moved = float(np.linalg.norm(new_pos - old_pos))
                block[axis] += sign * min(needed, moved)
            elif block[2] > sc.block_rest_z:
                # unsupported block settles back toward the table
                block[2] = max(sc.block_rest_z, block[2] - sc.block_fall_rate)
        block[:3] = np.clip(
            block[:3], np.array(sc.workspace_min), np.array(sc.workspace_max)
        )
        block[2] = max(block[2], sc.block_rest_z)

        # drawer / slider move only while the effector engages their handle
        drawer = s.drawer
        if np.linalg.norm(old_pos - sc.drawer_handle(s.drawer)) <= sc.handle_engage_radius:
            drawer = float(np.clip(s.drawer - (new_pos[1] - old_pos[1]), 0.0, sc.drawer_max))
        slider = s.slider
        if np.linalg.norm(old_pos - sc.slider_handle(s.slider)) <= sc.handle_engage_radius:
            slider = float(np.clip(s.slider + (new_pos[0] - old_pos[0]), 0.0, sc.slider_max))

        # buttons: depression equals effector penetration, else relax toward 0
        buttons = s.buttons.copy()
        for i in range(3):
            center = sc.button_center(i)
            over = np.linalg.norm(new_pos[:2] - center[:2]) <= sc.button_radius
            if over:
                buttons[i] = float(np.clip(sc.button_max - new_pos[2], 0.0, sc.button_max))
            else:
                buttons[i] = max(0.0, buttons[i] - sc.button_relax_rate)

        self._state = EnvState(
            arm_pose=np.concatenate([new_pos, new_rpy]),
            gripper=new_grip,
            block_pose=block,
            drawer=drawer,
            slider=slider,
            buttons=buttons,
        )
        return self.observe()
