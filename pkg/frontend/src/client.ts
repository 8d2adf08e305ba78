// Socket-facing client: keeps the latest snapshot, tracks staleness, and
// coalesces pointer input so at most one proxy command leaves per
// animation frame. The socket is injected, so tests drive it directly.

import {
  Command,
  ErrorReply,
  StateMessage,
  encodeCommand,
  isState,
  parseServerMessage,
} from "./protocol.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((event: { data: string }) => void) | null;
  onopen: (() => void) | null;
  onclose: (() => void) | null;
}

export class SimClient {
  latest: StateMessage | null = null;
  lastStateAt = -Infinity;
  connected = false;
  onState: ((snapshot: StateMessage) => void) | null = null;
  onError: ((reply: ErrorReply) => void) | null = null;

  private pendingProxy: number | null = null;

  constructor(
    private socket: SocketLike,
    private now: () => number = () => performance.now(),
  ) {
    socket.onopen = () => {
      this.connected = true;
    };
    socket.onclose = () => {
      this.connected = false;
    };
    socket.onmessage = (event) => this.receive(event.data);
  }

  private receive(raw: string): void {
    const msg = parseServerMessage(raw);
    if (msg === null) return;
    if (isState(msg)) {
      this.latest = msg;
      this.lastStateAt = this.now();
      this.onState?.(msg);
    } else {
      this.onError?.(msg);
    }
  }

  staleMs(): number {
    return this.now() - this.lastStateAt;
  }

  send(cmd: Command): void {
    this.socket.send(encodeCommand(cmd));
  }

  // Pointer drags arrive per mouse event; only the last one in a frame is
  // worth sending. Call flushProxy() once per animation frame.
  queueProxy(deviceCoord: number): void {
    this.pendingProxy = deviceCoord;
  }

  flushProxy(): void {
    if (this.pendingProxy === null) return;
    this.send({ kind: "proxy", device_coord: this.pendingProxy });
    this.pendingProxy = null;
  }

  setParam(key: string, value: number): void {
    this.send({ kind: "set_param", key, value });
  }

  reset(): void {
    this.send({ kind: "reset" });
  }

  record(on: boolean): void {
    this.send({ kind: "record", on });
  }

  setScenario(scenario: "incline" | "pulley"): void {
    this.send({ kind: "set_scenario", scenario });
  }

  close(): void {
    this.socket.close();
  }
}
