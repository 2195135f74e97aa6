/** Client-side session state: the single mutable object behind the UI.
 *
 * The rendered state is always the most recently received state frame; the
 * client never extrapolates physics. Malformed frames are dropped and
 * surface only as a warning badge.
 */

import {
  parseServerFrame,
  ProtocolError,
  SceneInfo,
  ServerFrame,
} from "./protocol.js";
import { InputMode } from "./input.js";

export type ConnectionStatus = "disconnected" | "connecting" | "connected";

export interface RecordedEpisode {
  path: string;
  frames: number;
  durationS: number;
}

export class ViewModel {
  connection: ConnectionStatus = "disconnected";
  scene: SceneInfo | null = null;
  hz = 30;
  tick = 0;
  obs: number[] | null = null;
  recording = false;
  mode: InputMode = "position";
  lastError: string | null = null;
  warningCount = 0;
  episodes: RecordedEpisode[] = [];

  /** Apply one inbound text frame; malformed frames only bump the badge. */
  handleMessage(text: string): ServerFrame | null {
    let frame: ServerFrame;
    try {
      frame = parseServerFrame(text);
    } catch (e) {
      if (e instanceof ProtocolError) {
        this.warningCount += 1;
        return null;
      }
      throw e;
    }
    switch (frame.type) {
      case "hello":
        this.scene = frame.scene;
        this.hz = frame.hz;
        this.connection = "connected";
        break;
      case "state":
        this.tick = frame.tick;
        this.obs = frame.obs;
        this.recording = frame.recording;
        break;
      case "record_stopped":
        this.episodes.push({
          path: frame.episode_path,
          frames: frame.frames,
          durationS: frame.frames / this.hz,
        });
        this.recording = false;
        break;
      case "error":
        this.lastError = frame.message;
        break;
    }
    return frame;
  }
}
