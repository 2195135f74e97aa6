import { describe, expect, it } from "vitest";

import {
  parseServerFrame,
  ProtocolError,
  serializeClientFrame,
} from "../src/protocol.js";

const scene = {
  hz: 30,
  workspace_min: [-1, -1, 0],
  workspace_max: [1, 1, 1],
  drawer_max: 0.4,
  slider_max: 0.6,
  button_max: 0.05,
  button_radius: 0.08,
  grasp_radius: 0.1,
  block_rest_z: 0.03,
  block_contact_radius: 0.06,
  gripper_min: 0,
  gripper_max: 0.1,
  button_centers: [
    [0.5, 0.5],
    [0.6, 0.5],
    [0.7, 0.5],
  ],
  drawer_handle_base: [0.2, -0.8, 0.1],
  slider_handle_base: [-0.2, 0.8, 0.1],
  shelf_min: [-0.9, 0.5, 0],
  shelf_max: [-0.5, 0.9, 0.4],
  max_delta_pos: 0.05,
  max_delta_orient: 0.15,
  max_delta_gripper: 0.3,
};

describe("parseServerFrame", () => {
  it("accepts a hello frame", () => {
    const frame = parseServerFrame(JSON.stringify({ type: "hello", scene, hz: 30 }));
    expect(frame.type).toBe("hello");
    if (frame.type === "hello") expect(frame.scene.drawer_max).toBe(0.4);
  });

  it("accepts a state frame", () => {
    const obs = new Array(19).fill(0.25);
    const frame = parseServerFrame(
      JSON.stringify({ type: "state", tick: 7, obs, recording: true }),
    );
    expect(frame).toEqual({ type: "state", tick: 7, obs, recording: true });
  });

  it("accepts record_stopped and error frames", () => {
    expect(
      parseServerFrame(
        JSON.stringify({ type: "record_stopped", episode_path: "a.play", frames: 90 }),
      ),
    ).toEqual({ type: "record_stopped", episode_path: "a.play", frames: 90 });
    expect(parseServerFrame(JSON.stringify({ type: "error", message: "busy" }))).toEqual(
      { type: "error", message: "busy" },
    );
  });

  it("rejects malformed frames", () => {
    expect(() => parseServerFrame("not json")).toThrow(ProtocolError);
    expect(() => parseServerFrame("42")).toThrow(ProtocolError);
    expect(() => parseServerFrame(JSON.stringify({ type: "warp" }))).toThrow(ProtocolError);
    expect(() =>
      parseServerFrame(
        JSON.stringify({ type: "state", tick: 1, obs: [1, 2, 3], recording: false }),
      ),
    ).toThrow(ProtocolError);
    const obs = new Array(19).fill(0);
    obs[4] = Number.NaN;
    expect(() =>
      parseServerFrame(JSON.stringify({ type: "state", tick: 1, obs, recording: false })),
    ).toThrow(ProtocolError);
    expect(() =>
      parseServerFrame(JSON.stringify({ type: "hello", scene: { hz: 30 }, hz: 30 })),
    ).toThrow(ProtocolError);
  });
});

describe("serializeClientFrame", () => {
  it("round-trips well-formed frames", () => {
    const act = new Array(8).fill(0.01);
    expect(JSON.parse(serializeClientFrame({ type: "action", act }))).toEqual({
      type: "action",
      act,
    });
    expect(JSON.parse(serializeClientFrame({ type: "reset", seed: 3 }))).toEqual({
      type: "reset",
      seed: 3,
    });
    expect(JSON.parse(serializeClientFrame({ type: "record_start" }))).toEqual({
      type: "record_start",
    });
    expect(JSON.parse(serializeClientFrame({ type: "record_stop" }))).toEqual({
      type: "record_stop",
    });
  });

  it("refuses malformed actions at the source", () => {
    expect(() => serializeClientFrame({ type: "action", act: [1, 2] })).toThrow(
      ProtocolError,
    );
    const bad = new Array(8).fill(0);
    bad[0] = Number.POSITIVE_INFINITY;
    expect(() => serializeClientFrame({ type: "action", act: bad })).toThrow(ProtocolError);
    expect(() => serializeClientFrame({ type: "reset", seed: 1.5 })).toThrow(ProtocolError);
  });
});
