/** Orthographic two-view scene renderer.
 *
 * A pure function of (scene geometry, latest state): no client-side
 * simulation, no retained state. The drawing surface is the small subset of
 * CanvasRenderingContext2D below, so tests can record commands instead of
 * rasterizing.
 */

import { SceneInfo } from "./protocol.js";

export interface Draw2D {
  fillStyle: string;
  strokeStyle: string;
  lineWidth: number;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  fill(): void;
  stroke(): void;
  fillText(text: string, x: number, y: number): void;
  clearRect(x: number, y: number, w: number, h: number): void;
}

export interface RenderOptions {
  width: number; // canvas width in px; the two views split it horizontally
  height: number;
  recording: boolean;
}

// state vector layout
const ARM = 0; // x, y, z at 0..2
const RPY = 3; // roll, pitch, yaw at 3..5
const GRIP = 6; // two fingers at 6..7
const BLOCK = 8; // x, y, z at 8..10
const BLOCK_YAW = 13;
const DRAWER = 14;
const SLIDER = 15;
const BUTTONS = 16; // three depressions at 16..18

export const BUTTON_COLORS = ["#d04040", "#40a040", "#4060d0"] as const;

interface View {
  x0: number;
  y0: number;
  w: number;
  h: number;
  // which state coordinates this view projects
  hAxis: 0 | 1;
  vAxis: 1 | 2;
  vFlip: boolean;
}

function project(
  view: View,
  scene: SceneInfo,
  h: number,
  v: number,
): [number, number] {
  const lo = scene.workspace_min;
  const hi = scene.workspace_max;
  const fx = (h - lo[view.hAxis]) / (hi[view.hAxis] - lo[view.hAxis]);
  const fy = (v - lo[view.vAxis]) / (hi[view.vAxis] - lo[view.vAxis]);
  const px = view.x0 + fx * view.w;
  const py = view.vFlip ? view.y0 + (1 - fy) * view.h : view.y0 + fy * view.h;
  return [px, py];
}

function drawArm(ctx: Draw2D, view: View, scene: SceneInfo, obs: number[]): void {
  const [px, py] = project(view, scene, obs[ARM + view.hAxis], obs[ARM + view.vAxis]);
  const aperture = (obs[GRIP] + obs[GRIP + 1]) / 2;
  const apertureFrac =
    (aperture - scene.gripper_min) / (scene.gripper_max - scene.gripper_min);
  ctx.strokeStyle = "#222222";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.arc(px, py, 6 + 6 * apertureFrac, 0, 2 * Math.PI);
  ctx.stroke();
  // orientation glyph: yaw needle in the top view, pitch needle in the side
  const angle = view.vAxis === 1 ? obs[RPY + 2] : obs[RPY + 1];
  ctx.beginPath();
  ctx.moveTo(px, py);
  ctx.lineTo(px + 14 * Math.cos(angle), py - 14 * Math.sin(angle));
  ctx.stroke();
}

function drawBlock(ctx: Draw2D, view: View, scene: SceneInfo, obs: number[]): void {
  const [px, py] = project(view, scene, obs[BLOCK + view.hAxis], obs[BLOCK + view.vAxis]);
  const s = 10;
  ctx.fillStyle = "#c08030";
  ctx.fillRect(px - s / 2, py - s / 2, s, s);
  const yaw = obs[BLOCK_YAW];
  ctx.strokeStyle = "#5a3a10";
  ctx.beginPath();
  ctx.moveTo(px, py);
  ctx.lineTo(px + s * Math.cos(yaw), py - s * Math.sin(yaw));
  ctx.stroke();
}

function drawFixtures(ctx: Draw2D, view: View, scene: SceneInfo, obs: number[]): void {
  // drawer and slider as extent bars with a filled handle position
  const bars: Array<[string, [number, number, number], number, number]> = [
    ["drawer", scene.drawer_handle_base, obs[DRAWER] / scene.drawer_max, scene.drawer_max],
    ["slider", scene.slider_handle_base, obs[SLIDER] / scene.slider_max, scene.slider_max],
  ];
  for (const [, base, frac, travel] of bars) {
    const [px, py] = project(view, scene, base[view.hAxis], base[view.vAxis]);
    const span = scene.workspace_max[view.hAxis] - scene.workspace_min[view.hAxis];
    const len = (travel / span) * view.w;
    ctx.strokeStyle = "#888888";
    ctx.strokeRect(px, py - 3, len, 6);
    ctx.fillStyle = "#4060d0";
    ctx.fillRect(px, py - 3, len * Math.max(0, Math.min(1, frac)), 6);
  }
  // buttons: circles filled proportional to depression (top view only)
  if (view.vAxis === 1) {
    scene.button_centers.forEach((center, i) => {
      const [px, py] = project(view, scene, center[0], center[1]);
      const frac = Math.max(0, Math.min(1, obs[BUTTONS + i] / scene.button_max));
      const r =
        (scene.button_radius /
          (scene.workspace_max[view.hAxis] - scene.workspace_min[view.hAxis])) *
        view.w;
      ctx.strokeStyle = BUTTON_COLORS[i];
      ctx.beginPath();
      ctx.arc(px, py, r, 0, 2 * Math.PI);
      ctx.stroke();
      if (frac > 0) {
        ctx.fillStyle = BUTTON_COLORS[i];
        ctx.beginPath();
        ctx.arc(px, py, r * frac, 0, 2 * Math.PI);
        ctx.fill();
      }
    });
  }
  // shelf footprint
  const [sx0, sy0] = project(view, scene, scene.shelf_min[view.hAxis], scene.shelf_min[view.vAxis]);
  const [sx1, sy1] = project(view, scene, scene.shelf_max[view.hAxis], scene.shelf_max[view.vAxis]);
  ctx.strokeStyle = "#666666";
  ctx.strokeRect(Math.min(sx0, sx1), Math.min(sy0, sy1), Math.abs(sx1 - sx0), Math.abs(sy1 - sy0));
}

/** Draw the full frame: top-down view on the left, side view on the right. */
export function renderScene(
  ctx: Draw2D,
  scene: SceneInfo,
  obs: number[],
  opts: RenderOptions,
): void {
  ctx.clearRect(0, 0, opts.width, opts.height);
  const margin = 10;
  const viewW = opts.width / 2 - 2 * margin;
  const viewH = opts.height - 2 * margin;
  const top: View = { x0: margin, y0: margin, w: viewW, h: viewH, hAxis: 0, vAxis: 1, vFlip: false };
  const side: View = {
    x0: opts.width / 2 + margin,
    y0: margin,
    w: viewW,
    h: viewH,
    hAxis: 0,
    vAxis: 2,
    vFlip: true,
  };
  for (const view of [top, side]) {
    ctx.strokeStyle = "#bbbbbb";
    ctx.lineWidth = 1;
    ctx.strokeRect(view.x0, view.y0, view.w, view.h);
    drawFixtures(ctx, view, scene, obs);
    drawBlock(ctx, view, scene, obs);
    drawArm(ctx, view, scene, obs);
  }
  ctx.fillStyle = "#222222";
  ctx.fillText("top (x, y)", top.x0 + 4, top.y0 + 14);
  ctx.fillText("side (x, z)", side.x0 + 4, side.y0 + 14);
  if (opts.recording) {
    ctx.fillStyle = "#d04040";
    ctx.beginPath();
    ctx.arc(opts.width - 18, 18, 7, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillText("REC", opts.width - 52, 22);
  }
}
