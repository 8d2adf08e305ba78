// Application bootstrap: connect to the service, wire controls, and run
// the animation loop. All displayed numbers come from server snapshots.

import { paint } from "./canvas.js";
import { SimClient } from "./client.js";
import { ParameterPanel, SLIDERS } from "./panel.js";
import { buildScene, screenToDevice, ViewState } from "./scene.js";

const SERVICE_URL =
  new URLSearchParams(location.search).get("ws") ?? "ws://127.0.0.1:8787";

const canvas = document.getElementById("scene") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const readoutEl = document.getElementById("readout")!;
const modeEl = document.getElementById("mode")!;
const pulleyEl = document.getElementById("pulley")!;
const warningEl = document.getElementById("warning")!;
const recordBtn = document.getElementById("record") as HTMLButtonElement;
const resetBtn = document.getElementById("reset") as HTMLButtonElement;
const scenarioBtn = document.getElementById("scenario") as HTMLButtonElement;
const diskEl = document.getElementById("disk") as HTMLInputElement;
const slidersEl = document.getElementById("sliders")!;

const view: ViewState = {
  rotationDeg: 0,
  pixelsPerMeter: 420,
  arrowScalePxPerN: 9,
};

const client = new SimClient(new WebSocket(SERVICE_URL) as never);
const panel = new ParameterPanel((key, value) => client.setParam(key, value));

const sliderInputs = new Map<string, HTMLInputElement>();
for (const spec of SLIDERS) {
  const row = document.createElement("label");
  row.className = "slider-row";
  const input = document.createElement("input");
  input.type = "range";
  input.min = String(spec.min);
  input.max = String(spec.max);
  input.step = String(spec.step);
  input.addEventListener("input", () => {
    panel.userChange(spec.key, Number(input.value));
  });
  const caption = document.createElement("span");
  caption.textContent = spec.label;
  row.append(caption, input);
  slidersEl.append(row);
  sliderInputs.set(spec.key, input);
}

client.onState = (snapshot) => {
  panel.onSnapshot(snapshot);
  for (const spec of SLIDERS) {
    const input = sliderInputs.get(spec.key)!;
    if (document.activeElement !== input) {
      input.value = String(panel.values[spec.key]);
    }
  }
  recordBtn.textContent = snapshot.recording ? "stop recording" : "record";
  scenarioBtn.textContent =
    snapshot.params.scenario === "incline" ? "pulley view" : "incline view";
};
client.onError = (reply) => {
  panel.onError(reply);
  console.warn("server rejected:", reply);
};

diskEl.addEventListener("input", () => {
  view.rotationDeg = Number(diskEl.value) % 360;
});
resetBtn.addEventListener("click", () => client.reset());
recordBtn.addEventListener("click", () => {
  client.record(!(client.latest?.recording ?? false));
});
scenarioBtn.addEventListener("click", () => {
  const current = client.latest?.params.scenario ?? "incline";
  client.setScenario(current === "incline" ? "pulley" : "incline");
});

let dragging = false;
function pointerToDevice(event: PointerEvent): void {
  if (client.latest === null) return;
  const rect = canvas.getBoundingClientRect();
  const x = event.clientX - rect.left - canvas.width / 2;
  const y = canvas.height / 2 - (event.clientY - rect.top);
  client.queueProxy(screenToDevice(x, y, view, client.latest));
}
canvas.addEventListener("pointerdown", (event) => {
  dragging = true;
  canvas.setPointerCapture(event.pointerId);
  pointerToDevice(event);
});
canvas.addEventListener("pointermove", (event) => {
  if (dragging) pointerToDevice(event);
});
canvas.addEventListener("pointerup", () => {
  dragging = false;
});

function frame(): void {
  client.flushProxy();
  const scene = buildScene(client.latest, view, client.staleMs());
  paint(ctx, scene);

  modeEl.textContent = scene.modeIndicator;
  modeEl.className = `mode ${scene.modeIndicator}`;
  warningEl.hidden = !scene.warningBadge;
  readoutEl.innerHTML = scene.readout
    .map((row) => `<div><span>${row.name}</span><b>${row.label}</b></div>`)
    .join("");
  if (scene.pulley !== null) {
    pulleyEl.hidden = false;
    pulleyEl.innerHTML =
      `<b>${scene.pulley.regime.replace(/_/g, " ")}</b>` +
      `<div>a = ${scene.pulley.acceleration.toFixed(3)} m/s²</div>` +
      `<div>T = ${scene.pulley.tension.toFixed(3)} N</div>`;
  } else {
    pulleyEl.hidden = true;
  }
  requestAnimationFrame(frame);
}
requestAnimationFrame(frame);
