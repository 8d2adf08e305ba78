// Wire types for the simulation service protocol. Numbers are JSON
// doubles, angles travel in degrees; the UI never derives physics from
// anything but these messages.

export interface ForceSet {
  gravity_total: number;
  gravity_tangential: number;
  normal: number;
  applied: number;
  friction: number;
  net: number;
}

export interface CouplingEcho {
  stiffness_n_per_m: number;
  damping: number;
  max_force_n: number;
  block_half_length_m: number;
}

export interface ParamsEcho {
  scenario: "incline" | "pulley";
  mass_kg: number;
  angle_deg: number;
  mu_static: number;
  mu_kinetic: number;
  gravity: number;
  bounds: { min_m: number; max_m: number };
  dt_s: number;
  coupling: CouplingEcho;
  pulley: { m1_kg: number; m2_kg: number };
}

export interface PulleyReadout {
  regime: "equilibrium" | "slides_up_incline" | "slides_down_incline";
  acceleration: number;
  tension: number;
  friction: number;
}

export interface StateMessage {
  type: "state";
  seq: number;
  t: number;
  s: number;
  v: number;
  mode: "static" | "kinetic";
  forces: ForceSet;
  proxy_s: number | null;
  contact: boolean;
  recording: boolean;
  warnings: string[];
  params: ParamsEcho;
  pulley?: PulleyReadout;
}

export interface ErrorReply {
  error: string;
  field?: string;
}

export type ServerMessage = StateMessage | ErrorReply;

export type Command =
  | { kind: "set_param"; key: string; value: number }
  | { kind: "proxy"; device_coord: number }
  | { kind: "reset" }
  | { kind: "record"; on: boolean }
  | { kind: "set_scenario"; scenario: "incline" | "pulley" };

export function parseServerMessage(raw: string): ServerMessage | null {
  let msg: unknown;
  try {
    msg = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof msg !== "object" || msg === null) return null;
  const obj = msg as Record<string, unknown>;
  if (obj.type === "state") return obj as unknown as StateMessage;
  if (typeof obj.error === "string") return obj as unknown as ErrorReply;
  return null;
}

export function isState(msg: ServerMessage): msg is StateMessage {
  return (msg as StateMessage).type === "state";
}

export function encodeCommand(cmd: Command): string {
  return JSON.stringify({ type: "cmd", cmd });
}
