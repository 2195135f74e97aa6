/** Browser entry point: wires keyboard, canvas, session controls and the
 * replay file picker together. All logic lives in the imported modules;
 * this file only binds them to the DOM. */

import { TeleopClient, SocketLike } from "./client.js";
import { actionFromKeys, DEFAULT_GAINS, KeyTracker } from "./input.js";
import { parseEpisode } from "./episode.js";
import { Draw2D, renderScene } from "./render.js";
import { ReplayTransport } from "./replay.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

export function start(): void {
  const canvas = el<HTMLCanvasElement>("scene");
  const ctx = canvas.getContext("2d");
  if (ctx === null) throw new Error("2d context unavailable");
  const status = el<HTMLSpanElement>("status");
  const episodeList = el<HTMLUListElement>("episodes");

  const keys = new KeyTracker();
  window.addEventListener("keydown", (e) => keys.keyDown(e.key));
  window.addEventListener("keyup", (e) => keys.keyUp(e.key));
  window.addEventListener("blur", () => keys.clear());

  const wsUrl = `ws://${location.host}/teleop`;
  const client: TeleopClient = new TeleopClient(
    () => new WebSocket(wsUrl) as unknown as SocketLike,
    () => {
      const scene = client.vm.scene;
      const limits = scene
        ? {
            maxDeltaPos: scene.max_delta_pos,
            maxDeltaOrient: scene.max_delta_orient,
            maxDeltaGripper: scene.max_delta_gripper,
          }
        : { maxDeltaPos: 0.05, maxDeltaOrient: 0.15, maxDeltaGripper: 0.3 };
      return actionFromKeys(keys.pressed, keys.mode, DEFAULT_GAINS, limits);
    },
    { setInterval: (fn, ms) => window.setInterval(fn, ms), clearInterval: (id) => window.clearInterval(id) },
  );

  let replay: ReplayTransport | null = null;

  el<HTMLButtonElement>("connect").onclick = () => client.connect();
  el<HTMLButtonElement>("reset").onclick = () => client.reset();
  el<HTMLButtonElement>("record").onclick = () => client.recordStart();
  el<HTMLButtonElement>("stop").onclick = () => client.recordStop();
  el<HTMLInputElement>("replay-file").onchange = async (ev) => {
    const input = ev.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    replay = new ReplayTransport(await parseEpisode(await file.text()));
    replay.play();
  };
  el<HTMLButtonElement>("replay-toggle").onclick = () => {
    if (replay) (replay.playing ? replay.pause() : replay.play());
  };

  const draw = () => {
    const vm = client.vm;
    const obs = replay?.playing || (replay && !vm.obs) ? replay.tick() : vm.obs;
    if (vm.scene && obs) {
      renderScene(ctx as unknown as Draw2D, vm.scene, obs, {
        width: canvas.width,
        height: canvas.height,
        recording: vm.recording,
      });
    }
    status.textContent =
      `${vm.connection} | tick ${vm.tick} | mode ${keys.mode}` +
      (vm.warningCount ? ` | ${vm.warningCount} dropped frames` : "") +
      (vm.lastError ? ` | ${vm.lastError}` : "");
    episodeList.innerHTML = vm.episodes
      .map((e) => `<li>${e.path} — ${e.frames} frames (${e.durationS.toFixed(1)} s)</li>`)
      .join("");
    requestAnimationFrame(draw);
  };
  requestAnimationFrame(draw);
}
