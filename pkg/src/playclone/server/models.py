"""Pydantic schemas for the teleop bridge REST and WebSocket surfaces."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from ..sim.scene import SceneConfig

ACT_DIM = 8
OBS_DIM = 19


class HealthResponse(BaseModel):
    status: Literal["ok"] = "ok"
    session_active: bool
    recording: bool


class SceneResponse(BaseModel):
    hz: float
    workspace_min: tuple[float, float, float]
    workspace_max: tuple[float, float, float]
    drawer_max: float
    slider_max: float
    button_max: float
    button_radius: float
    grasp_radius: float
    block_rest_z: float
    block_contact_radius: float
    gripper_min: float
    gripper_max: float
    button_centers: list[tuple[float, float]]
    drawer_handle_base: tuple[float, float, float]
    slider_handle_base: tuple[float, float, float]
    shelf_min: tuple[float, float, float]
    shelf_max: tuple[float, float, float]
    max_delta_pos: float
    max_delta_orient: float
    max_delta_gripper: float

    @staticmethod
    def from_scene(scene: SceneConfig) -> "SceneResponse":
        return SceneResponse(
            hz=scene.hz,
            workspace_min=tuple(scene.workspace_min),
            workspace_max=tuple(scene.workspace_max),
            drawer_max=scene.drawer_max,
            slider_max=scene.slider_max,
            button_max=scene.button_max,
            button_radius=scene.button_radius,
            grasp_radius=scene.grasp_radius,
            block_rest_z=scene.block_rest_z,
            block_contact_radius=scene.block_contact_radius,
            gripper_min=scene.gripper_min,
            gripper_max=scene.gripper_max,
            button_centers=[tuple(b) for b in scene.button_centers],
            drawer_handle_base=tuple(scene.drawer_handle_base),
            slider_handle_base=tuple(scene.slider_handle_base),
            shelf_min=tuple(scene.shelf_min),
            shelf_max=tuple(scene.shelf_max),
            max_delta_pos=scene.max_delta_pos,
            max_delta_orient=scene.max_delta_orient,
            max_delta_gripper=scene.max_delta_gripper,
        )


class EpisodeInfo(BaseModel):
    path: str
    frames: int
    source: str
    duration_s: float


class EpisodeListResponse(BaseModel):
    root: str
    episodes: list[EpisodeInfo]


class ValidateRequest(BaseModel):
    path: str


class ValidateResponse(BaseModel):
    ok: bool
    frames_by_source: dict[str, int] = Field(default_factory=dict)
    error: Optional[str] = None


# WebSocket frames: one JSON object per text frame, discriminated by "type".


class HelloFrame(BaseModel):
    type: Literal["hello"] = "hello"
    scene: SceneResponse
    hz: float


class StateFrame(BaseModel):
    type: Literal["state"] = "state"
    tick: int
    obs: list[float]
    recording: bool


class ActionFrame(BaseModel):
    type: Literal["action"] = "action"
    act: list[float]


class ResetFrame(BaseModel):
    type: Literal["reset"] = "reset"
    seed: Optional[int] = None


class RecordStartFrame(BaseModel):
    type: Literal["record_start"] = "record_start"


class RecordStopFrame(BaseModel):
    type: Literal["record_stop"] = "record_stop"


class RecordStoppedFrame(BaseModel):
    type: Literal["record_stopped"] = "record_stopped"
    episode_path: str
    frames: int


class ErrorFrame(BaseModel):
    type: Literal["error"] = "error"
    message: str
