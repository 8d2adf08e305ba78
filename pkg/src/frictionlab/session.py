"""Scenario configuration, the fixed-tick simulation loop, and replay.

A scenario bundles scene, coupling and (optionally) pulley configuration
plus the initial block state. ``run`` advances the physics at the fixed
timestep, pulling input from either a device source (proxy + coupling) or
a direct force schedule, and records one sample per tick. Trajectories are
bit-deterministic: identical scenario and input reproduce identical logs,
and ``replay`` re-executes a log to verify it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable

from .haptics import CouplingParams, ProxyState, coupling_force, map_workspace, penetration
from .physics import BlockState, ForceBreakdown, Mode, SceneParams, force_probe, step
from .pulley import PulleyProblem


class ParseError(ValueError):
    """Raised for syntactically invalid scenario documents."""


class ValidationError(ValueError):
    """Raised for well-formed documents that violate an invariant."""

    def __init__(self, field: str, message: str | None = None):
        self.field = field
        super().__init__(message or f"invalid value for {field!r}")


class MismatchAt(AssertionError):
    """Replay divergence, reporting the first tick whose sample differs."""

    def __init__(self, t: float, field: str):
        self.t = t
        self.field = field
        super().__init__(f"replay mismatch at t={t!r} in field {field!r}")


SCENARIO_KINDS = ("incline", "pulley")

DEFAULTS = {
    "scenario": "incline",
    "mass_kg": 1.0,
    "angle_deg": 20.0,
    "mu_static": 0.5,
    "mu_kinetic": 0.3,
    "gravity": 9.80665,
    "bounds": {"min_m": 0.0, "max_m": 1.0},
    "dt_s": 0.001,
    "stick_velocity_epsilon": 1e-6,
    "coupling": {
        "stiffness_n_per_m": 500.0,
        "damping": 5.0,
        "max_force_n": 9.0,
        "block_half_length_m": 0.05,
    },
}


@dataclass(frozen=True, slots=True)
class Scenario:
    kind: str  # "incline" | "pulley"
    scene: SceneParams
    coupling: CouplingParams
    initial: BlockState
    pulley: PulleyProblem | None = None
    duration: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in SCENARIO_KINDS:
            raise ValidationError("scenario", f"unknown scenario kind {self.kind!r}")
        if self.kind == "pulley" and self.pulley is None:
            raise ValidationError("pulley", "pulley scenario requires pulley masses")
        s_min, s_max = self.scene.bounds
        if not (s_min <= self.initial.s <= s_max):
            raise ValidationError("initial", "initial position outside bounds")
        if self.duration is not None and self.duration < 0.0:
            raise ValidationError("duration_s", "duration must be >= 0")


@dataclass(frozen=True, slots=True)
class TrajectorySample:
    """One recorded tick: time, state, force diagram and proxy echo."""

    t: float
    s: float
    v: float
    mode: Mode
    applied: float
    friction: float
    normal: float
    gravity_t: float
    net: float
    proxy_s: float  # nan when the run is force-driven (no proxy)
    contact: bool


CSV_HEADER = "t,s,v,mode,applied,friction,normal,gravity_t,net,proxy_s,contact"


def _require_number(raw: object, field: str) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ValidationError(field, f"{field} must be a number")
    value = float(raw)
    if not math.isfinite(value):
        raise ValidationError(field, f"{field} must be finite")
    return value


def _section(doc: dict, key: str, allowed: Iterable[str]) -> dict:
    raw = doc.get(key, {})
    if not isinstance(raw, dict):
        raise ValidationError(key, f"{key} must be an object")
    for sub in raw:
        if sub not in allowed:
            raise ValidationError(f"{key}.{sub}", f"unknown key {key}.{sub}")
    return raw


def scenario_from_dict(doc: dict) -> Scenario:
    """Build a validated Scenario from a plain dict, applying defaults.

    Angles are degrees in documents and radians internally. Validation
    errors name the offending field.
    """
    allowed = {
        "scenario", "mass_kg", "angle_deg", "mu_static", "mu_kinetic",
        "gravity", "bounds", "dt_s", "stick_velocity_epsilon", "coupling",
        "pulley", "duration_s", "initial",
    }
    for key in doc:
        if key not in allowed:
            raise ValidationError(key, f"unknown key {key!r}")

    kind = doc.get("scenario", DEFAULTS["scenario"])
    if kind not in SCENARIO_KINDS:
        raise ValidationError("scenario", f"scenario must be one of {SCENARIO_KINDS}")

    def num(key: str) -> float:
        return _require_number(doc.get(key, DEFAULTS[key]), key)

    bounds_doc = _section(doc, "bounds", ("min_m", "max_m"))
    s_min = _require_number(
        bounds_doc.get("min_m", DEFAULTS["bounds"]["min_m"]), "bounds.min_m"
    )
    s_max = _require_number(
        bounds_doc.get("max_m", DEFAULTS["bounds"]["max_m"]), "bounds.max_m"
    )

    try:
        scene = SceneParams(
            mass=num("mass_kg"),
            angle=math.radians(num("angle_deg")),
            mu_static=num("mu_static"),
            mu_kinetic=num("mu_kinetic"),
            gravity=num("gravity"),
            bounds=(s_min, s_max),
            dt=num("dt_s"),
            stick_velocity_epsilon=num("stick_velocity_epsilon"),
        )
    except ValueError as exc:
        raise _scene_error(str(exc)) from exc

    coupling_doc = _section(
        doc, "coupling",
        ("stiffness_n_per_m", "damping", "max_force_n", "block_half_length_m"),
    )
    cd = DEFAULTS["coupling"]
    try:
        coupling = CouplingParams(
            stiffness=_require_number(
                coupling_doc.get("stiffness_n_per_m", cd["stiffness_n_per_m"]),
                "coupling.stiffness_n_per_m",
            ),
            damping=_require_number(
                coupling_doc.get("damping", cd["damping"]), "coupling.damping"
            ),
            max_force=_require_number(
                coupling_doc.get("max_force_n", cd["max_force_n"]),
                "coupling.max_force_n",
            ),
            block_half_length=_require_number(
                coupling_doc.get("block_half_length_m", cd["block_half_length_m"]),
                "coupling.block_half_length_m",
            ),
            workspace_scale=(s_max - s_min) * 0.5,
        )
    except ValueError as exc:
        raise ValidationError("coupling", str(exc)) from exc

    pulley_doc = _section(doc, "pulley", ("m1_kg", "m2_kg"))
    pulley = None
    if kind == "pulley" or pulley_doc:
        try:
            pulley = PulleyProblem(
                m1=_require_number(
                    pulley_doc.get("m1_kg", scene.mass), "pulley.m1_kg"
                ),
                m2=_require_number(pulley_doc.get("m2_kg", 1.0), "pulley.m2_kg"),
                angle=scene.angle,
                mu_static=scene.mu_static,
                mu_kinetic=scene.mu_kinetic,
                gravity=scene.gravity,
            )
        except ValueError as exc:
            raise ValidationError("pulley", str(exc)) from exc

    initial_doc = _section(doc, "initial", ("s_m", "v_mps"))
    s0 = _require_number(
        initial_doc.get("s_m", 0.5 * (s_min + s_max)), "initial.s_m"
    )
    v0 = _require_number(initial_doc.get("v_mps", 0.0), "initial.v_mps")
    initial = BlockState(s0, v0, Mode.STATIC if v0 == 0.0 else Mode.KINETIC)

    duration = None
    if doc.get("duration_s") is not None:
        duration = _require_number(doc["duration_s"], "duration_s")

    return Scenario(kind, scene, coupling, initial, pulley, duration)


def _scene_error(message: str) -> ValidationError:
    for field, needle in (
        ("mass_kg", "mass"),
        ("gravity", "gravity"),
        ("dt_s", "dt "),
        ("angle_deg", "angle"),
        ("mu_static", "mu_static"),
        ("mu_kinetic", "mu_kinetic"),
        ("bounds", "bounds"),
        ("stick_velocity_epsilon", "stick_velocity_epsilon"),
    ):
        if needle in message:
            return ValidationError(field, message)
    return ValidationError("scene", message)


def load_scenario(text: str) -> Scenario:
    """Parse a JSON scenario document. Empty input means all defaults."""
    if not text.strip():
        return scenario_from_dict({})
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed scenario document: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("scenario document must be a JSON object")
    return scenario_from_dict(doc)


def _tick_count(duration: float, dt: float) -> int:
    return int(math.floor(duration / dt + 1e-9))


def run(scenario: Scenario, source) -> list[TrajectorySample]:
    """Advance the scenario for its duration, one sample per tick.

    ``source`` is either a device source (``coord(t)`` in device units,
    routed through the workspace map and coupling spring) or a force
    schedule (``force(t)`` in newtons applied directly to the block).
    The returned log starts with the instantaneous t=0 diagram and is
    bit-deterministic for identical inputs.
    """
    if scenario.duration is None:
        raise ValidationError("duration_s", "run() requires a finite duration")
    params = scenario.scene
    coupling = scenario.coupling
    dt = params.dt
    ticks = _tick_count(scenario.duration, dt)

    device_driven = hasattr(source, "coord")
    state = scenario.initial
    samples: list[TrajectorySample] = []

    def record(t: float, st: BlockState, mode: Mode, bd: ForceBreakdown,
               proxy_s: float, contact: bool) -> None:
        samples.append(TrajectorySample(
            t, st.s, st.v, mode, bd.applied, bd.friction, bd.normal,
            bd.gravity_tangential, bd.net, proxy_s, contact,
        ))

    if device_driven:
        proxy_s = map_workspace(source.coord(0.0), params.bounds)
        proxy = ProxyState(proxy_s, 0.0)
        applied, _ = coupling_force(proxy, state, coupling)
        contact = penetration(proxy_s, state.s, coupling.block_half_length)[0] > 0.0
    else:
        proxy_s = math.nan
        applied = source.force(0.0)
        contact = False
    mode0, probe = force_probe(state, params, applied)
    record(0.0, state, mode0, probe, proxy_s, contact)

    prev_proxy = proxy_s
    for i in range(1, ticks + 1):
        t = i * dt
        if device_driven:
            proxy_s = map_workspace(source.coord(t), params.bounds)
            proxy = ProxyState(proxy_s, (proxy_s - prev_proxy) / dt)
            prev_proxy = proxy_s
            applied, _ = coupling_force(proxy, state, coupling)
            contact = penetration(proxy_s, state.s, coupling.block_half_length)[0] > 0.0
        else:
            applied = source.force(t)
        state, bd = step(state, params, applied)
        record(t, state, state.mode, bd, proxy_s, contact)

    return samples


def replay(trajectory: list[TrajectorySample], scenario: Scenario) -> bool:
    """Re-execute a recorded log and compare every sample bit-exactly.

    The recorded applied-force column drives the re-execution, so the check
    is independent of whatever device produced the original forces. Returns
    True when identical; raises :class:`MismatchAt` at the first divergence.
    """
    if not trajectory:
        raise ValidationError("trajectory", "empty trajectory")
    params = scenario.scene
    dt = params.dt
    state = scenario.initial

    def compare(i: int, t: float, st: BlockState, mode: Mode,
                bd: ForceBreakdown) -> None:
        got = trajectory[i]
        expect = {
            "t": t, "s": st.s, "v": st.v, "applied": bd.applied,
            "friction": bd.friction, "normal": bd.normal,
            "gravity_t": bd.gravity_tangential, "net": bd.net,
        }
        for field, value in expect.items():
            if getattr(got, field) != value:
                raise MismatchAt(got.t, field)
        if got.mode is not mode:
            raise MismatchAt(got.t, "mode")

    mode0, probe = force_probe(state, params, trajectory[0].applied)
    compare(0, 0.0, state, mode0, probe)
    for i in range(1, len(trajectory)):
        state, bd = step(state, params, trajectory[i].applied)
        compare(i, i * dt, state, state.mode, bd)
    return True


def _fmt(x: float) -> str:
    return format(x, ".9g")


def to_csv(trajectory: list[TrajectorySample]) -> str:
    """Render a trajectory as delimited text, 9 significant digits."""
    lines = [CSV_HEADER]
    for r in trajectory:
        lines.append(",".join((
            _fmt(r.t), _fmt(r.s), _fmt(r.v), r.mode.value, _fmt(r.applied),
            _fmt(r.friction), _fmt(r.normal), _fmt(r.gravity_t), _fmt(r.net),
            _fmt(r.proxy_s), "true" if r.contact else "false",
        )))
    return "\n".join(lines) + "\n"


def breakaway_tick(trajectory: list[TrajectorySample]) -> TrajectorySample | None:
    """First sample where the block left static mode, if any."""
    prev_static = trajectory[0].mode is Mode.STATIC
    if not prev_static:
        return trajectory[0]
    for sample in trajectory[1:]:
        if sample.mode is Mode.KINETIC and prev_static:
            return sample
        prev_static = sample.mode is Mode.STATIC
    return None
