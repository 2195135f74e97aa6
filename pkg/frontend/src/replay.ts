/** Offline episode replay with simple transport controls.
 *
 * Streams a parsed .play file through the same renderer as the live
 * session; no server connection involved.
 */

import { EpisodeData } from "./episode.js";

export class ReplayTransport {
  private frame = 0;
  playing = false;

  constructor(readonly episode: EpisodeData) {
    if (episode.obs.length === 0) {
      throw new Error("episode has no frames");
    }
  }

  get length(): number {
    return this.episode.obs.length;
  }

  get position(): number {
    return this.frame;
  }

  get currentObs(): number[] {
    return this.episode.obs[this.frame];
  }

  play(): void {
    this.playing = true;
  }

  pause(): void {
    this.playing = false;
  }

  seek(frame: number): void {
    if (!Number.isInteger(frame) || frame < 0 || frame >= this.length) {
      throw new RangeError(`frame ${frame} out of [0, ${this.length})`);
    }
    this.frame = frame;
  }

  /** Advance one frame if playing; pauses at the end. Returns the obs. */
  tick(): number[] {
    if (this.playing) {
      if (this.frame + 1 < this.length) {
        this.frame += 1;
      } else {
        this.playing = false;
      }
    }
    return this.currentObs;
  }
}
