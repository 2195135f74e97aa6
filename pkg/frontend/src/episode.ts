/** Reader for .play episode files (offline replay).
 *
 * Format: "#play v1" magic, key=value header up to frames=N, N frame lines
 * of "tick obs[19] act[8]", then "checksum=<sha256 of the frame lines>".
 */

import { ACT_DIM, OBS_DIM } from "./protocol.js";

export const PLAY_MAGIC = "#play";
export const PLAY_VERSION = 1;

export interface EpisodeData {
  hz: number;
  source: string;
  seed: number;
  truncated: boolean;
  obs: number[][]; // frames x 19
  act: number[][]; // frames x 8
}

export class EpisodeFormatError extends Error {}

async function sha256Hex(text: string): Promise<string> {
  const data = new TextEncoder().encode(text);
  const digest = await crypto.subtle.digest("SHA-256", data);
  return Array.from(new Uint8Array(digest))
    .map((b) => b.toString(16).padStart(2, "0"))
    .join("");
}

function parseFloatStrict(s: string, context: string): number {
  const v = Number(s);
  if (s === "" || !Number.isFinite(v)) {
    throw new EpisodeFormatError(`${context}: not a finite number: ${JSON.stringify(s)}`);
  }
  return v;
}

/** Parse and checksum-verify one .play file's text content. */
export async function parseEpisode(text: string): Promise<EpisodeData> {
  const lines = text.split("\n");
  if (lines.length > 0 && lines[lines.length - 1] === "") {
    lines.pop(); // trailing newline
  }
  if (lines.length === 0 || !lines[0].startsWith(PLAY_MAGIC)) {
    throw new EpisodeFormatError("not a .play file");
  }
  const version = lines[0].split("v").pop();
  if (version !== String(PLAY_VERSION)) {
    throw new EpisodeFormatError(`format version ${version}, expected ${PLAY_VERSION}`);
  }

  const header = new Map<string, string>();
  let i = 1;
  while (i < lines.length && lines[i].includes("=") && !/^\d/.test(lines[i])) {
    const eq = lines[i].indexOf("=");
    const key = lines[i].slice(0, eq);
    header.set(key, lines[i].slice(eq + 1));
    i += 1;
    if (key === "frames") break;
  }
  const framesStr = header.get("frames");
  if (framesStr === undefined) {
    throw new EpisodeFormatError("missing frames header field");
  }
  const n = Number(framesStr);
  const obsDim = Number(header.get("obs_dim") ?? OBS_DIM);
  const actDim = Number(header.get("act_dim") ?? ACT_DIM);
  if (obsDim !== OBS_DIM || actDim !== ACT_DIM) {
    throw new EpisodeFormatError(`unexpected dims ${obsDim}/${actDim}`);
  }

  const frameLines = lines.slice(i, i + n);
  if (frameLines.length !== n) {
    throw new EpisodeFormatError(`expected ${n} frames, found ${frameLines.length}`);
  }
  const tail = lines[i + n];
  if (tail === undefined || !tail.startsWith("checksum=")) {
    throw new EpisodeFormatError("missing checksum line");
  }
  const digest = await sha256Hex(frameLines.join("\n"));
  if (tail.slice("checksum=".length) !== digest) {
    throw new EpisodeFormatError("checksum mismatch");
  }

  const obs: number[][] = [];
  const act: number[][] = [];
  for (let t = 0; t < n; t++) {
    const parts = frameLines[t].split(" ");
    if (parts.length !== 1 + OBS_DIM + ACT_DIM) {
      throw new EpisodeFormatError(`malformed frame line ${t}`);
    }
    if (Number(parts[0]) !== t) {
      throw new EpisodeFormatError(`non-consecutive tick at line ${t}`);
    }
    obs.push(parts.slice(1, 1 + OBS_DIM).map((s) => parseFloatStrict(s, `frame ${t}`)));
    act.push(parts.slice(1 + OBS_DIM).map((s) => parseFloatStrict(s, `frame ${t}`)));
  }

  return {
    hz: Number(header.get("hz") ?? "30"),
    source: header.get("source") ?? "oracle",
    seed: Number(header.get("seed") ?? "0"),
    truncated: header.get("truncated") === "1",
    obs,
    act,
  };
}
