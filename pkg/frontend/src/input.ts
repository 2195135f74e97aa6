/** Keyboard-to-action mapping.
 *
 * Position mode: W/S (or up/down arrows) move x, A/D (left/right) move y,
 * R/F move z. Orientation mode re-uses the same six keys for roll, pitch
 * and yaw. Z and X close/open the gripper symmetrically in either mode.
 * All deltas are scaled by the gains and clamped to the action bounds.
 */

import { ACT_DIM } from "./protocol.js";

export type InputMode = "position" | "orientation";

export interface Gains {
  pos: number;
  orient: number;
  gripper: number;
}

export interface ActionLimits {
  maxDeltaPos: number;
  maxDeltaOrient: number;
  maxDeltaGripper: number;
}

export const DEFAULT_GAINS: Gains = { pos: 0.03, orient: 0.1, gripper: 0.2 };

/** Keys the mapper consumes (KeyboardEvent.key, lowercased). */
export const AXIS_KEYS = ["w", "s", "a", "d", "r", "f", "arrowup", "arrowdown", "arrowleft", "arrowright"] as const;
export const GRIPPER_KEYS = ["z", "x"] as const;
export const MODE_TOGGLE_KEY = "m";

function axis(pressed: ReadonlySet<string>, plus: string[], minus: string[]): number {
  const p = plus.some((k) => pressed.has(k)) ? 1 : 0;
  const m = minus.some((k) => pressed.has(k)) ? 1 : 0;
  return p - m;
}

const clamp = (v: number, lim: number): number => Math.min(lim, Math.max(-lim, v));

/**
 * Pure mapping from the currently pressed key set to one 8-dim action.
 * No input yields the zero action.
 */
export function actionFromKeys(
  pressed: ReadonlySet<string>,
  mode: InputMode,
  gains: Gains,
  limits: ActionLimits,
): number[] {
  const act = new Array<number>(ACT_DIM).fill(0);
  const a1 = axis(pressed, ["w", "arrowup"], ["s", "arrowdown"]);
  const a2 = axis(pressed, ["d", "arrowright"], ["a", "arrowleft"]);
  const a3 = axis(pressed, ["r"], ["f"]);
  if (mode === "position") {
    act[0] = clamp(a1 * gains.pos, limits.maxDeltaPos);
    act[1] = clamp(a2 * gains.pos, limits.maxDeltaPos);
    act[2] = clamp(a3 * gains.pos, limits.maxDeltaPos);
  } else {
    act[3] = clamp(a1 * gains.orient, limits.maxDeltaOrient);
    act[4] = clamp(a2 * gains.orient, limits.maxDeltaOrient);
    act[5] = clamp(a3 * gains.orient, limits.maxDeltaOrient);
  }
  const g = axis(pressed, ["x"], ["z"]); // x opens, z closes
  const dg = clamp(g * gains.gripper, limits.maxDeltaGripper);
  act[6] = dg; // both fingers move symmetrically
  act[7] = dg;
  return act;
}

/** Tracks held keys and the input mode from keyboard events. */
export class KeyTracker {
  readonly pressed = new Set<string>();
  mode: InputMode = "position";

  keyDown(key: string): void {
    const k = key.toLowerCase();
    if (k === MODE_TOGGLE_KEY) {
      this.mode = this.mode === "position" ? "orientation" : "position";
      return;
    }
    this.pressed.add(k);
  }

  keyUp(key: string): void {
    this.pressed.delete(key.toLowerCase());
  }

  /** E.g. on window blur: release everything so no key sticks. */
  clear(): void {
    this.pressed.clear();
  }
}
