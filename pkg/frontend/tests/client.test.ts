import { describe, expect, it } from "vitest";

import { Scheduler, SocketLike, TeleopClient } from "../src/client.js";

class FakeSocket implements SocketLike {
  sent: string[] = [];
  closed = false;
  onmessage: ((ev: { data: string }) => void) | null = null;
  onclose: (() => void) | null = null;
  onopen: (() => void) | null = null;

  send(data: string): void {
    this.sent.push(data);
  }
  close(): void {
    this.closed = true;
    this.onclose?.();
  }
}

class ManualScheduler implements Scheduler {
  private fns = new Map<number, () => void>();
  private next = 1;
  intervalMs: number | null = null;

  setInterval(fn: () => void, ms: number): number {
    this.intervalMs = ms;
    const id = this.next++;
    this.fns.set(id, fn);
    return id;
  }
  clearInterval(id: number): void {
    this.fns.delete(id);
  }
  tick(): void {
    for (const fn of this.fns.values()) fn();
  }
  get active(): number {
    return this.fns.size;
  }
}

function makeClient(action: () => number[] = () => new Array(8).fill(0)) {
  const socket = new FakeSocket();
  const scheduler = new ManualScheduler();
  const client = new TeleopClient(() => socket, action, scheduler);
  return { client, socket, scheduler };
}

describe("TeleopClient", () => {
  it("sends one action frame per tick once connected", () => {
    const { client, socket, scheduler } = makeClient();
    client.connect();
    socket.onopen?.();
    expect(scheduler.intervalMs).toBeCloseTo(1000 / 30);
    scheduler.tick();
    scheduler.tick();
    expect(socket.sent).toHaveLength(2);
    expect(JSON.parse(socket.sent[0])).toEqual({
      type: "action",
      act: [0, 0, 0, 0, 0, 0, 0, 0],
    });
  });

  it("latest input is sent on the very next tick (one-tick hold at most)", () => {
    let current = new Array(8).fill(0);
    const { client, socket, scheduler } = makeClient(() => current);
    client.connect();
    socket.onopen?.();
    scheduler.tick();
    current = [0.01, 0, 0, 0, 0, 0, 0, 0]; // key pressed between ticks
    scheduler.tick();
    expect(JSON.parse(socket.sent[1]).act[0]).toBe(0.01);
  });

  it("session controls send the protocol frames", () => {
    const { client, socket } = makeClient();
    client.connect();
    socket.onopen?.();
    client.reset(7);
    client.recordStart();
    const kinds = socket.sent.map((s) => JSON.parse(s).type);
    expect(kinds).toContain("reset");
    expect(kinds).toContain("record_start");
  });

  it("record_stop is a no-op unless a recording is active", () => {
    const { client, socket } = makeClient();
    client.connect();
    socket.onopen?.();
    client.recordStop();
    expect(socket.sent.map((s) => JSON.parse(s).type)).not.toContain("record_stop");
    socket.onmessage?.({
      data: JSON.stringify({
        type: "state",
        tick: 1,
        obs: new Array(19).fill(0),
        recording: true,
      }),
    });
    client.recordStop();
    expect(socket.sent.map((s) => JSON.parse(s).type)).toContain("record_stop");
  });

  it("stops the action loop on close", () => {
    const { client, socket, scheduler } = makeClient();
    client.connect();
    socket.onopen?.();
    expect(scheduler.active).toBe(1);
    socket.close();
    expect(scheduler.active).toBe(0);
    expect(client.vm.connection).toBe("disconnected");
  });
});
