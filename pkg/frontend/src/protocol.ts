/** Wire protocol of the teleop bridge: JSON text frames over a WebSocket.
 *
 * Server -> client: hello, state, record_stopped, error.
 * Client -> server: action, reset, record_start, record_stop.
 */

export const OBS_DIM = 19;
export const ACT_DIM = 8;

export interface SceneInfo {
  hz: number;
  workspace_min: [number, number, number];
  workspace_max: [number, number, number];
  drawer_max: number;
  slider_max: number;
  button_max: number;
  button_radius: number;
  grasp_radius: number;
  block_rest_z: number;
  block_contact_radius: number;
  gripper_min: number;
  gripper_max: number;
  button_centers: [number, number][];
  drawer_handle_base: [number, number, number];
  slider_handle_base: [number, number, number];
  shelf_min: [number, number, number];
  shelf_max: [number, number, number];
  max_delta_pos: number;
  max_delta_orient: number;
  max_delta_gripper: number;
}

export interface HelloFrame {
  type: "hello";
  scene: SceneInfo;
  hz: number;
}

export interface StateFrame {
  type: "state";
  tick: number;
  obs: number[]; // length 19
  recording: boolean;
}

export interface RecordStoppedFrame {
  type: "record_stopped";
  episode_path: string;
  frames: number;
}

export interface ErrorFrame {
  type: "error";
  message: string;
}

export type ServerFrame = HelloFrame | StateFrame | RecordStoppedFrame | ErrorFrame;

export interface ActionFrame {
  type: "action";
  act: number[]; // length 8
}

export interface ResetFrame {
  type: "reset";
  seed?: number;
}

export interface RecordStartFrame {
  type: "record_start";
}

export interface RecordStopFrame {
  type: "record_stop";
}

export type ClientFrame = ActionFrame | ResetFrame | RecordStartFrame | RecordStopFrame;

export class ProtocolError extends Error {}

function isFiniteVector(x: unknown, n: number): x is number[] {
  return (
    Array.isArray(x) &&
    x.length === n &&
    x.every((v) => typeof v === "number" && Number.isFinite(v))
  );
}

function requireNumber(obj: Record<string, unknown>, key: string): number {
  const v = obj[key];
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new ProtocolError(`field ${key} must be a finite number`);
  }
  return v;
}

function validateScene(raw: unknown): SceneInfo {
  if (typeof raw !== "object" || raw === null) {
    throw new ProtocolError("scene must be an object");
  }
  const s = raw as Record<string, unknown>;
  for (const key of [
    "hz",
    "drawer_max",
    "slider_max",
    "button_max",
    "button_radius",
    "gripper_min",
    "gripper_max",
    "max_delta_pos",
    "max_delta_orient",
    "max_delta_gripper",
  ]) {
    requireNumber(s, key);
  }
  for (const key of ["workspace_min", "workspace_max", "drawer_handle_base", "slider_handle_base", "shelf_min", "shelf_max"]) {
    if (!isFiniteVector(s[key], 3)) {
      throw new ProtocolError(`field ${key} must be a 3-vector`);
    }
  }
  if (!Array.isArray(s.button_centers) || !s.button_centers.every((b) => isFiniteVector(b, 2))) {
    throw new ProtocolError("button_centers must be a list of 2-vectors");
  }
  return s as unknown as SceneInfo;
}

/** Strictly validate one inbound text frame; throws ProtocolError otherwise. */
export function parseServerFrame(text: string): ServerFrame {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    throw new ProtocolError("frame is not valid JSON");
  }
  if (typeof raw !== "object" || raw === null) {
    throw new ProtocolError("frame must be a JSON object");
  }
  const msg = raw as Record<string, unknown>;
  switch (msg.type) {
    case "hello": {
      const scene = validateScene(msg.scene);
      return { type: "hello", scene, hz: requireNumber(msg, "hz") };
    }
    case "state": {
      if (!isFiniteVector(msg.obs, OBS_DIM)) {
        throw new ProtocolError(`state obs must be a finite ${OBS_DIM}-vector`);
      }
      if (typeof msg.recording !== "boolean") {
        throw new ProtocolError("state recording must be a boolean");
      }
      return {
        type: "state",
        tick: requireNumber(msg, "tick"),
        obs: msg.obs,
        recording: msg.recording,
      };
    }
    case "record_stopped": {
      if (typeof msg.episode_path !== "string") {
        throw new ProtocolError("record_stopped episode_path must be a string");
      }
      return {
        type: "record_stopped",
        episode_path: msg.episode_path,
        frames: requireNumber(msg, "frames"),
      };
    }
    case "error": {
      if (typeof msg.message !== "string") {
        throw new ProtocolError("error message must be a string");
      }
      return { type: "error", message: msg.message };
    }
    default:
      throw new ProtocolError(`unknown server frame type ${JSON.stringify(msg.type)}`);
  }
}

/** Serialize an outbound frame, refusing malformed actions at the source. */
export function serializeClientFrame(frame: ClientFrame): string {
  if (frame.type === "action" && !isFiniteVector(frame.act, ACT_DIM)) {
    throw new ProtocolError(`action must be a finite ${ACT_DIM}-vector`);
  }
  if (frame.type === "reset" && frame.seed !== undefined && !Number.isInteger(frame.seed)) {
    throw new ProtocolError("reset seed must be an integer");
  }
  return JSON.stringify(frame);
}
