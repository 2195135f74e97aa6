/** Teleop session controller: one socket, one 30 Hz action timer.
 *
 * The client ticks on its own timer rather than per received state frame,
 * so the action cadence stays stable under jittery delivery. The socket and
 * the timer are injected, which keeps the controller testable without a
 * browser.
 */

import { serializeClientFrame } from "./protocol.js";
import { ViewModel } from "./viewmodel.js";

/** Minimal socket surface (subset of WebSocket). */
export interface SocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((ev: { data: string }) => void) | null;
  onclose: (() => void) | null;
  onopen: (() => void) | null;
}

export interface Scheduler {
  setInterval(fn: () => void, ms: number): number;
  clearInterval(id: number): void;
}

export class TeleopClient {
  readonly vm: ViewModel;
  private socket: SocketLike | null = null;
  private timer: number | null = null;

  constructor(
    private readonly makeSocket: () => SocketLike,
    private readonly sampleAction: () => number[],
    private readonly scheduler: Scheduler,
  ) {
    this.vm = new ViewModel();
  }

  connect(): void {
    if (this.socket !== null) return;
    this.vm.connection = "connecting";
    const socket = this.makeSocket();
    this.socket = socket;
    socket.onopen = () => {
      // the action loop starts with the connection; the latest sampled
      // input is sent every tick (zero action when nothing is pressed)
      this.timer = this.scheduler.setInterval(
        () => this.sendAction(),
        1000 / this.vm.hz,
      );
    };
    socket.onmessage = (ev) => {
      this.vm.handleMessage(ev.data);
    };
    socket.onclose = () => {
      this.stop();
      this.vm.connection = "disconnected";
    };
  }

  private sendAction(): void {
    if (this.socket === null) return;
    this.socket.send(
      serializeClientFrame({ type: "action", act: this.sampleAction() }),
    );
  }

  reset(seed?: number): void {
    this.socket?.send(serializeClientFrame({ type: "reset", seed }));
  }

  recordStart(): void {
    this.socket?.send(serializeClientFrame({ type: "record_start" }));
  }

  /** No-op unless a recording is active (control stays disabled otherwise). */
  recordStop(): void {
    if (!this.vm.recording) return;
    this.socket?.send(serializeClientFrame({ type: "record_stop" }));
  }

  disconnect(): void {
    this.socket?.close();
    this.stop();
    this.socket = null;
    this.vm.connection = "disconnected";
  }

  private stop(): void {
    if (this.timer !== null) {
      this.scheduler.clearInterval(this.timer);
      this.timer = null;
    }
  }
}
