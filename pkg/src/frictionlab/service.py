"""Realtime bridge between the simulation loop and interactive clients.

One process owns one simulation. The loop advances the physics at its fixed
tick rate while wall-clock pacing emits JSON state snapshots at 60 Hz over
websockets. Clients steer the run with JSON commands (parameter changes,
proxy input, reset, recording, scenario switches) that are validated up
front and applied between physics ticks, so every command is tick-atomic.

Wire protocol (all numbers JSON doubles, angles in degrees):

* server -> client, one per broadcast frame::

      {"type": "state", "seq": n, "t": s, "s": m, "v": m/s,
       "mode": "static"|"kinetic",
       "forces": {"gravity_total", "gravity_tangential", "normal",
                  "applied", "friction", "net"},
       "proxy_s": m | null, "contact": bool, "recording": bool,
       "warnings": [...], "params": {...scenario echo...},
       "pulley": {"regime", "acceleration", "tension", "friction"}  # pulley mode
      }

* client -> server::

      {"type": "cmd", "cmd": {"kind": "set_param", "key": k, "value": v}}
      {"type": "cmd", "cmd": {"kind": "proxy", "device_coord": c}}
      {"type": "cmd", "cmd": {"kind": "reset"}}
      {"type": "cmd", "cmd": {"kind": "record", "on": bool}}
      {"type": "cmd", "cmd": {"kind": "set_scenario", "scenario": k}}
      {"type": "cmd", "cmd": {"kind": "load_scenario", "document": {...}}}

  Rejected commands get ``{"error": "validation", "field": name}``;
  unparseable messages get ``{"error": "malformed"}``. Either way the
  connection stays open.
"""

from __future__ import annotations

import asyncio
import json
import math
import warnings
from collections import deque
from dataclasses import replace
from pathlib import Path

from websockets.asyncio.server import serve as ws_serve

from .haptics import ProxyState, coupling_force, map_workspace, penetration
from .physics import ForceBreakdown, SceneParams, force_probe, step
from .pulley import PulleyProblem, solve
from .session import (
    Scenario,
    TrajectorySample,
    ValidationError,
    scenario_from_dict,
    to_csv,
)

BROADCAST_HZ = 60

_SCENE_KEYS = {
    "mass_kg": "mass",
    "mu_static": "mu_static",
    "mu_kinetic": "mu_kinetic",
    "gravity": "gravity",
}
_COUPLING_KEYS = {
    "stiffness_n_per_m": "stiffness",
    "damping": "damping",
    "max_force_n": "max_force",
    "block_half_length_m": "block_half_length",
}


class FrictionService:
    """Simulation state plus the synchronous command/tick core.

    The networking shell below is a thin wrapper; everything observable
    (command application, ticking, snapshots) lives here so it can be
    driven directly in tests.
    """

    def __init__(self, scenario: Scenario, record_dir: str | Path | None = None):
        self.scenario = scenario
        self.scene = scenario.scene
        self.coupling = scenario.coupling
        self.kind = scenario.kind
        if scenario.pulley is not None:
            self.pulley_masses = (scenario.pulley.m1, scenario.pulley.m2)
        else:
            self.pulley_masses = (scenario.scene.mass, 1.0)
        self.state = scenario.initial
        self.tick_index = 0
        self.seq = 0
        self.device_coord: float | None = None
        self.recording = False
        self.record_dir = Path(record_dir) if record_dir else Path.cwd()
        self._record_rows: list[TrajectorySample] = []
        self._record_count = 0
        self._commands: deque[dict] = deque()
        self._clients: set[asyncio.Queue] = set()
        self._refresh_probe()

    # ------------------------------------------------------------- core

    def _refresh_probe(self) -> None:
        applied, proxy_s, contact = self._applied_force()
        mode, bd = force_probe(self.state, self.scene, applied)
        self.last_mode = mode
        self.last_bd = bd
        self.last_proxy = proxy_s
        self.last_contact = contact

    def _applied_force(self) -> tuple[float, float | None, bool]:
        if self.device_coord is None:
            return 0.0, None, False
        proxy_s = map_workspace(self.device_coord, self.scene.bounds)
        proxy = ProxyState(proxy_s, 0.0)
        applied, _ = coupling_force(proxy, self.state, self.coupling)
        contact = (
            penetration(proxy_s, self.state.s, self.coupling.block_half_length)[0]
            > 0.0
        )
        return applied, proxy_s, contact

    def validate_command(self, cmd: object) -> dict | None:
        """Structural and value validation; an error reply dict or None."""
        if not isinstance(cmd, dict) or not isinstance(cmd.get("kind"), str):
            return {"error": "malformed"}
        kind = cmd["kind"]
        if kind == "set_param":
            key = cmd.get("key")
            if not isinstance(key, str):
                return {"error": "validation", "field": "key"}
            value = cmd.get("value")
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                return {"error": "validation", "field": key}
            if not math.isfinite(float(value)):
                return {"error": "validation", "field": key}
            try:
                self._build_params(key, float(value))
            except (ValueError, ValidationError):
                return {"error": "validation", "field": key}
            return None
        if kind == "proxy":
            coord = cmd.get("device_coord")
            if isinstance(coord, bool) or not isinstance(coord, (int, float)):
                return {"error": "validation", "field": "device_coord"}
            if not math.isfinite(float(coord)):
                return {"error": "validation", "field": "device_coord"}
            return None
        if kind == "reset":
            return None
        if kind == "record":
            if not isinstance(cmd.get("on"), bool):
                return {"error": "validation", "field": "on"}
            return None
        if kind == "set_scenario":
            if cmd.get("scenario") not in ("incline", "pulley"):
                return {"error": "validation", "field": "scenario"}
            return None
        if kind == "load_scenario":
            doc = cmd.get("document")
            if not isinstance(doc, dict):
                return {"error": "validation", "field": "document"}
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    scenario_from_dict(doc)
            except ValidationError as exc:
                return {"error": "validation", "field": exc.field}
            except ValueError:
                return {"error": "malformed"}
            return None
        return {"error": "validation", "field": "kind"}

    def _build_params(
        self, key: str, value: float
    ) -> tuple[SceneParams | None, object | None, tuple[float, float] | None]:
        """New parameter objects for a set_param, raising on bad values."""
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            if key == "angle_deg":
                return replace(self.scene, angle=math.radians(value)), None, None
            if key in _SCENE_KEYS:
                return replace(self.scene, **{_SCENE_KEYS[key]: value}), None, None
            if key in _COUPLING_KEYS:
                return (
                    None,
                    replace(self.coupling, **{_COUPLING_KEYS[key]: value}),
                    None,
                )
            if key == "m1_kg":
                masses = (value, self.pulley_masses[1])
            elif key == "m2_kg":
                masses = (self.pulley_masses[0], value)
            else:
                raise ValidationError(key, "unknown parameter")
            self._pulley_problem(masses)  # validation only
            return None, None, masses

    def _pulley_problem(self, masses: tuple[float, float]) -> PulleyProblem:
        return PulleyProblem(
            m1=masses[0],
            m2=masses[1],
            angle=self.scene.angle,
            mu_static=self.scene.mu_static,
            mu_kinetic=self.scene.mu_kinetic,
            gravity=self.scene.gravity,
        )

    def submit(self, cmd: dict) -> None:
        """Queue a pre-validated command for the next tick."""
        self._commands.append(cmd)

    def apply_command(self, cmd: dict) -> None:
        kind = cmd["kind"]
        if kind == "set_param":
            scene, coupling, masses = self._build_params(
                cmd["key"], float(cmd["value"])
            )
            if scene is not None:
                self.scene = scene
            if coupling is not None:
                self.coupling = coupling
            if masses is not None:
                self.pulley_masses = masses
        elif kind == "proxy":
            self.device_coord = float(cmd["device_coord"])
        elif kind == "reset":
            self.state = self.scenario.initial
            self.tick_index = 0
            self.device_coord = None
            self._refresh_probe()
        elif kind == "record":
            self._set_recording(cmd["on"])
        elif kind == "set_scenario":
            self.kind = cmd["scenario"]
        elif kind == "load_scenario":
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                scenario = scenario_from_dict(cmd["document"])
            self.scenario = scenario
            self.scene = scenario.scene
            self.coupling = scenario.coupling
            self.kind = scenario.kind
            if scenario.pulley is not None:
                self.pulley_masses = (scenario.pulley.m1, scenario.pulley.m2)
            self.state = scenario.initial
            self.tick_index = 0
            self.device_coord = None
            self._refresh_probe()

    def _set_recording(self, on: bool) -> None:
        if on and not self.recording:
            self.recording = True
            self._record_rows = []
        elif not on and self.recording:
            self.recording = False
            self._flush_recording()

    def _flush_recording(self) -> Path | None:
        if not self._record_rows:
            return None
        self.record_dir.mkdir(parents=True, exist_ok=True)
        self._record_count += 1
        path = self.record_dir / f"recording-{self._record_count:03d}.csv"
        path.write_text(to_csv(self._record_rows), encoding="utf-8")
        self._record_rows = []
        return path

    def drain_commands(self) -> None:
        while self._commands:
            self.apply_command(self._commands.popleft())

    def tick(self) -> None:
        """One physics step: drain commands, apply input, advance, record."""
        self.drain_commands()
        applied, proxy_s, contact = self._applied_force()
        self.state, bd = step(self.state, self.scene, applied)
        self.tick_index += 1
        self.last_mode = self.state.mode
        self.last_bd = bd
        self.last_proxy = proxy_s
        self.last_contact = contact
        if self.recording:
            t = self.tick_index * self.scene.dt
            self._record_rows.append(TrajectorySample(
                t, self.state.s, self.state.v, self.state.mode, bd.applied,
                bd.friction, bd.normal, bd.gravity_tangential, bd.net,
                proxy_s if proxy_s is not None else math.nan, contact,
            ))

    def snapshot(self) -> dict:
        """Immutable view of the last completed tick, JSON-ready."""
        self.seq += 1
        bd: ForceBreakdown = self.last_bd
        scene = self.scene
        snap = {
            "type": "state",
            "seq": self.seq,
            "t": self.tick_index * scene.dt,
            "s": self.state.s,
            "v": self.state.v,
            "mode": self.last_mode.value,
            "forces": {
                "gravity_total": bd.gravity_total,
                "gravity_tangential": bd.gravity_tangential,
                "normal": bd.normal,
                "applied": bd.applied,
                "friction": bd.friction,
                "net": bd.net,
            },
            "proxy_s": self.last_proxy,
            "contact": self.last_contact,
            "recording": self.recording,
            "warnings": (
                ["mu_kinetic_exceeds_mu_static"]
                if scene.mu_kinetic > scene.mu_static
                else []
            ),
            "params": {
                "scenario": self.kind,
                "mass_kg": scene.mass,
                "angle_deg": math.degrees(scene.angle),
                "mu_static": scene.mu_static,
                "mu_kinetic": scene.mu_kinetic,
                "gravity": scene.gravity,
                "bounds": {"min_m": scene.bounds[0], "max_m": scene.bounds[1]},
                "dt_s": scene.dt,
                "coupling": {
                    "stiffness_n_per_m": self.coupling.stiffness,
                    "damping": self.coupling.damping,
                    "max_force_n": self.coupling.max_force,
                    "block_half_length_m": self.coupling.block_half_length,
                },
                "pulley": {
                    "m1_kg": self.pulley_masses[0],
                    "m2_kg": self.pulley_masses[1],
                },
            },
        }
        if self.kind == "pulley":
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                solution = solve(self._pulley_problem(self.pulley_masses))
            snap["pulley"] = {
                "regime": solution.regime.value,
                "acceleration": solution.acceleration,
                "tension": solution.tension,
                "friction": solution.friction,
            }
        return snap

    # ------------------------------------------------------ networking

    def handle_message(self, raw: str | bytes) -> dict | None:
        """Parse, validate and enqueue one client message."""
        try:
            msg = json.loads(raw)
        except (json.JSONDecodeError, UnicodeDecodeError):
            return {"error": "malformed"}
        if not isinstance(msg, dict) or msg.get("type") != "cmd":
            return {"error": "malformed"}
        cmd = msg.get("cmd")
        reply = self.validate_command(cmd)
        if reply is not None:
            return reply
        self.submit(cmd)
        return None

    def _broadcast(self) -> None:
        payload = json.dumps(self.snapshot())
        for queue in self._clients:
            if queue.full():
                try:
                    queue.get_nowait()
                except asyncio.QueueEmpty:
                    pass
            queue.put_nowait(payload)

    async def _sender(self, ws, queue: asyncio.Queue) -> None:
        while True:
            await ws.send(await queue.get())

    async def handler(self, ws) -> None:
        queue: asyncio.Queue = asyncio.Queue(maxsize=1)
        self._clients.add(queue)
        sender = asyncio.create_task(self._sender(ws, queue))
        try:
            async for raw in ws:
                reply = self.handle_message(raw)
                if reply is not None:
                    await ws.send(json.dumps(reply))
        finally:
            self._clients.discard(queue)
            sender.cancel()

    async def sim_loop(self) -> None:
        """Wall-clock paced loop: fixed-rate physics, 60 Hz snapshots."""
        tick_hz = max(1, round(1.0 / self.scene.dt))
        period = 1.0 / BROADCAST_HZ
        loop = asyncio.get_running_loop()
        deadline = loop.time() + period
        acc = 0
        while True:
            delay = deadline - loop.time()
            if delay > 0:
                await asyncio.sleep(delay)
            deadline += period
            now = loop.time()
            if deadline < now - 0.25:
                deadline = now + period  # resync after a stall
            acc += tick_hz
            ticks = acc // BROADCAST_HZ
            acc -= ticks * BROADCAST_HZ
            for _ in range(ticks):
                self.tick()
            self._broadcast()


class ServiceHandle:
    """A running service: bound address plus orderly shutdown."""

    def __init__(self, service: FrictionService, server, task: asyncio.Task):
        self.service = service
        self.server = server
        self.task = task

    @property
    def address(self) -> tuple[str, int]:
        sock = next(iter(self.server.sockets))
        return sock.getsockname()[:2]

    async def close(self) -> None:
        self.task.cancel()
        try:
            await self.task
        except asyncio.CancelledError:
            pass
        self.server.close()
        await self.server.wait_closed()


async def serve(
    scenario: Scenario,
    host: str = "127.0.0.1",
    port: int = 8787,
    record_dir: str | Path | None = None,
) -> ServiceHandle:
    """Bind the websocket server and start the simulation loop."""
    service = FrictionService(scenario, record_dir)
    server = await ws_serve(service.handler, host, port)
    task = asyncio.create_task(service.sim_loop())
    return ServiceHandle(service, server, task)
