// Pure scene construction: snapshot numbers in, drawable geometry out.
// Everything here is a projection of server state; no physics happens
// client-side, so the painter and the tests share one code path.

import type { StateMessage, PulleyReadout } from "./protocol.js";

export interface ViewState {
  rotationDeg: number; // on-screen disk, [0, 360)
  pixelsPerMeter: number;
  arrowScalePxPerN: number;
}

export const CONTACT_COLOR = "#e4572e";
export const IDLE_COLOR = "#4f9d69";
export const STALE_AFTER_MS = 1000;

const ARROW_COLORS: Record<string, string> = {
  gravity: "#6c757d",
  normal: "#2d7dd2",
  applied: "#e4572e",
  friction: "#8338ec",
};

export interface Arrow {
  name: string;
  lengthPx: number;
  angleDeg: number; // scene space: 0 = +x, counter-clockwise
  color: string;
  label: string;
}

export interface ReadoutRow {
  name: string;
  newtons: number;
  label: string;
}

export interface SceneDrawing {
  inclineAngleDeg: number; // includes view rotation
  block: { x: number; y: number; halfLengthPx: number; halfHeightPx: number };
  pointer: { x: number; y: number; color: string } | null;
  arrows: Arrow[];
  readout: ReadoutRow[];
  modeIndicator: "static" | "kinetic" | "offline";
  recording: boolean;
  warningBadge: boolean;
  banner: string | null;
  pulley: PulleyReadout | null;
}

function formatNewtons(value: number): string {
  return `${Math.abs(value).toFixed(2)} N`;
}

function rotate(x: number, y: number, deg: number): { x: number; y: number } {
  const rad = (deg * Math.PI) / 180;
  const c = Math.cos(rad);
  const s = Math.sin(rad);
  return { x: x * c - y * s, y: x * s + y * c };
}

export function buildScene(
  snapshot: StateMessage | null,
  view: ViewState,
  staleMs: number,
): SceneDrawing {
  if (snapshot === null || staleMs > STALE_AFTER_MS) {
    return {
      inclineAngleDeg: view.rotationDeg,
      block: { x: 0, y: 0, halfLengthPx: 0, halfHeightPx: 0 },
      pointer: null,
      arrows: [],
      readout: [],
      modeIndicator: "offline",
      recording: false,
      warningBadge: false,
      banner: "disconnected",
      pulley: null,
    };
  }

  const params = snapshot.params;
  const theta = params.angle_deg;
  const ppm = view.pixelsPerMeter;
  const mid = (params.bounds.min_m + params.bounds.max_m) / 2;
  const along = (s: number) => (s - mid) * ppm;

  // scene space keeps the slope along +x; the whole picture is rotated by
  // (incline angle + disk rotation), so world-down is -90 - theta in the
  // slope frame and gravity ends up following the disk on screen
  const sceneRotation = theta + view.rotationDeg;

  const forces = snapshot.forces;
  const arrowSpecs: Array<{ name: string; value: number; angleDeg: number }> = [
    { name: "gravity", value: forces.gravity_total, angleDeg: -90 - theta },
    { name: "normal", value: forces.normal, angleDeg: 90 },
    { name: "applied", value: forces.applied, angleDeg: forces.applied >= 0 ? 0 : 180 },
    {
      name: "friction",
      value: forces.friction,
      angleDeg: forces.friction >= 0 ? 0 : 180,
    },
  ];
  const arrows: Arrow[] = [];
  for (const spec of arrowSpecs) {
    const magnitude = Math.abs(spec.value);
    if (magnitude === 0) continue;
    arrows.push({
      name: spec.name,
      lengthPx: magnitude * view.arrowScalePxPerN,
      angleDeg: spec.angleDeg + sceneRotation,
      color: ARROW_COLORS[spec.name],
      label: formatNewtons(spec.value),
    });
  }

  const readout: ReadoutRow[] = (
    ["gravity_total", "normal", "applied", "friction", "net"] as const
  ).map((key) => ({
    name: key,
    newtons: forces[key],
    label: formatNewtons(forces[key]),
  }));

  let pointer: SceneDrawing["pointer"] = null;
  if (snapshot.proxy_s !== null) {
    const p = rotate(along(snapshot.proxy_s), 0, sceneRotation);
    pointer = {
      x: p.x,
      y: p.y,
      color: snapshot.contact ? CONTACT_COLOR : IDLE_COLOR,
    };
  }

  const blockRot = rotate(along(snapshot.s), 0, sceneRotation);
  return {
    inclineAngleDeg: sceneRotation,
    block: {
      x: blockRot.x,
      y: blockRot.y,
      halfLengthPx: params.coupling.block_half_length_m * ppm,
      halfHeightPx: params.coupling.block_half_length_m * ppm * 0.8,
    },
    pointer,
    arrows,
    readout,
    modeIndicator: snapshot.mode,
    recording: snapshot.recording,
    warningBadge: snapshot.warnings.includes("mu_kinetic_exceeds_mu_static"),
    banner: null,
    pulley: snapshot.pulley ?? null,
  };
}

// Inverse of the view transform plus the device workspace map: screen
// coordinates (scene space, y up, origin at canvas center) back to a
// device coordinate in [-1, 1].
export function screenToDevice(
  xPx: number,
  yPx: number,
  view: ViewState,
  snapshot: StateMessage,
): number {
  const sceneRotation = snapshot.params.angle_deg + view.rotationDeg;
  const local = rotate(xPx, yPx, -sceneRotation);
  const { min_m, max_m } = snapshot.params.bounds;
  const mid = (min_m + max_m) / 2;
  const s = local.x / view.pixelsPerMeter + mid;
  const coord = (2 * (s - min_m)) / (max_m - min_m) - 1;
  return Math.max(-1, Math.min(1, coord));
}
