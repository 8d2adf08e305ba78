// Parameter panel state machine. Slider moves are optimistic: the panel
// shows the dragged value and emits a set_param, then re-syncs to
// whatever the server echoes. A rejection snaps the slider back to the
// last confirmed value.

import type { ErrorReply, StateMessage } from "./protocol.js";

export interface SliderSpec {
  key: "mass_kg" | "mu_static" | "mu_kinetic" | "angle_deg";
  label: string;
  min: number;
  max: number;
  step: number;
}

export const SLIDERS: SliderSpec[] = [
  { key: "mass_kg", label: "mass [kg]", min: 0.1, max: 10, step: 0.1 },
  { key: "mu_static", label: "mu static", min: 0, max: 1.5, step: 0.01 },
  { key: "mu_kinetic", label: "mu kinetic", min: 0, max: 1.5, step: 0.01 },
  { key: "angle_deg", label: "angle [deg]", min: 0, max: 60, step: 0.5 },
];

type SliderKey = SliderSpec["key"];

export class ParameterPanel {
  /** Values currently shown on the sliders. */
  values: Record<SliderKey, number> = {
    mass_kg: NaN,
    mu_static: NaN,
    mu_kinetic: NaN,
    angle_deg: NaN,
  };
  warningBadge = false;
  private confirmed: Record<SliderKey, number> = { ...this.values };
  private pending = new Set<SliderKey>();

  constructor(private sendParam: (key: string, value: number) => void) {}

  userChange(key: SliderKey, value: number): void {
    this.values[key] = value;
    this.pending.add(key);
    this.sendParam(key, value);
  }

  /** Server echo wins: re-sync sliders and clear satisfied pendings. */
  onSnapshot(snapshot: StateMessage): void {
    const echo = snapshot.params;
    for (const spec of SLIDERS) {
      const echoed = echo[spec.key];
      if (this.pending.has(spec.key) && echoed !== this.values[spec.key]) {
        continue; // command still in flight; keep the optimistic value
      }
      this.pending.delete(spec.key);
      this.values[spec.key] = echoed;
      this.confirmed[spec.key] = echoed;
    }
    this.warningBadge = snapshot.warnings.includes(
      "mu_kinetic_exceeds_mu_static",
    );
  }

  /** Rejection: snap the slider back to the last confirmed echo. */
  onError(reply: ErrorReply): void {
    if (reply.error !== "validation" || !reply.field) return;
    const key = reply.field as SliderKey;
    if (key in this.values && this.pending.has(key)) {
      this.pending.delete(key);
      this.values[key] = this.confirmed[key];
    }
  }
}
