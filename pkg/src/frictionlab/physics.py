"""Stick-slip Coulomb friction dynamics for a block on an inclined plane.

The block is constrained to a single axis running up the slope (+s points
up-slope). Contact alternates between two modes:

* ``STATIC``  -- the block is at rest and static friction exactly balances
  the driving force as long as that force stays inside the friction cone
  ``|F| <= mu_static * N``.
* ``KINETIC`` -- the block slides and experiences a constant-magnitude
  friction force ``mu_kinetic * N`` opposing its velocity.

Everything in this module is a pure function over value types, advanced at
a fixed timestep with semi-implicit Euler, so identical inputs always
produce bit-identical trajectories.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

STANDARD_GRAVITY = 9.80665  # m/s^2


class Mode(enum.Enum):
    """Contact mode of the block."""

    STATIC = "static"
    KINETIC = "kinetic"


class StaticConeViolation(ValueError):
    """Raised when a static-friction balance is requested outside the cone."""


@dataclass(frozen=True, slots=True)
class SceneParams:
    """Physical configuration of the incline scenario.

    Angles are radians, everything else SI. ``bounds`` is the admissible
    range of along-incline positions; ``stick_velocity_epsilon`` is the
    speed below which a decelerating block is considered for re-sticking.
    """

    mass: float = 1.0
    angle: float = math.radians(20.0)
    mu_static: float = 0.5
    mu_kinetic: float = 0.3
    gravity: float = STANDARD_GRAVITY
    bounds: tuple[float, float] = (0.0, 1.0)
    dt: float = 1e-3
    stick_velocity_epsilon: float = 1e-6

    def __post_init__(self) -> None:
        if not (self.mass > 0.0):
            raise ValueError("mass must be > 0")
        if not (self.gravity > 0.0):
            raise ValueError("gravity must be > 0")
        if not (self.dt > 0.0):
            raise ValueError("dt must be > 0")
        if not (0.0 <= self.angle < math.pi / 2):
            raise ValueError("angle must lie in [0, pi/2)")
        if self.mu_static < 0.0:
            raise ValueError("mu_static must be >= 0")
        if self.mu_kinetic < 0.0:
            raise ValueError("mu_kinetic must be >= 0")
        if not (self.bounds[0] < self.bounds[1]):
            raise ValueError("bounds must satisfy s_min < s_max")
        if not (self.stick_velocity_epsilon > 0.0):
            raise ValueError("stick_velocity_epsilon must be > 0")
        if self.mu_kinetic > self.mu_static:
            # Well-defined but physically odd; keep going with a warning.
            warnings.warn(
                "mu_kinetic exceeds mu_static; dynamics remain defined but are "
                "physically unusual",
                stacklevel=2,
            )


@dataclass(frozen=True, slots=True)
class BlockState:
    """Dynamic state of the block along the incline axis."""

    s: float
    v: float = 0.0
    mode: Mode = Mode.STATIC

    def __post_init__(self) -> None:
        if self.mode is Mode.STATIC and self.v != 0.0:
            raise ValueError("static mode requires v == 0 exactly")


@dataclass(frozen=True, slots=True)
class ForceBreakdown:
    """Signed force magnitudes acting on the block during one tick.

    ``gravity_tangential``, ``applied``, ``friction`` and ``net`` are signed
    along +s; ``gravity_total`` and ``normal`` are magnitudes.
    """

    gravity_total: float
    gravity_tangential: float
    normal: float
    applied: float
    friction: float
    net: float


def normal_force(params: SceneParams) -> float:
    """Contact force perpendicular to the plane, ``m*g*cos(angle)``."""
    return params.mass * params.gravity * math.cos(params.angle)


def max_static_friction(params: SceneParams) -> float:
    """Saturation value of static friction, ``mu_static * N``."""
    return params.mu_static * normal_force(params)


def will_slip(params: SceneParams, applied: float) -> bool:
    """Whether a resting block breaks away under ``applied``.

    True iff the tangential driving force (applied minus the gravity
    component along the slope) exceeds the static friction cone.
    """
    driving = applied - params.mass * params.gravity * math.sin(params.angle)
    return abs(driving) > max_static_friction(params)


def static_friction(params: SceneParams, applied: float) -> float:
    """Exact balancing friction force for a block that stays at rest."""
    if will_slip(params, applied):
        raise StaticConeViolation(
            "driving force exceeds the static cone; transition to kinetic instead"
        )
    driving = applied - params.mass * params.gravity * math.sin(params.angle)
    return -driving


def kinetic_friction(params: SceneParams, v: float, driving: float) -> float:
    """Sliding friction force, opposing velocity (or the drive when v == 0)."""
    magnitude = params.mu_kinetic * normal_force(params)
    if v > 0.0:
        return -magnitude
    if v < 0.0:
        return magnitude
    if driving > 0.0:
        return -magnitude
    if driving < 0.0:
        return magnitude
    return 0.0


def enforce_bounds(
    state: BlockState, params: SceneParams, outward_push: bool = False
) -> BlockState:
    """Keep the block inside the admissible position range.

    A block sitting exactly at a bound while the net force points outward is
    held as-is (the caller sends it a zero net force for that tick). A block
    that overshot a bound during integration is mirrored about the bound and
    its momentum inverted with restitution 1.
    """
    s_min, s_max = params.bounds
    if state.s > s_max:
        s = 2.0 * s_max - state.s
        v = -state.v
    elif state.s < s_min:
        s = 2.0 * s_min - state.s
        v = -state.v
    else:
        # In bounds. Covers the at-the-wall hold (outward_push true): the
        # state is returned unchanged, position and velocity held.
        return state
    mode = Mode.KINETIC if v != 0.0 else state.mode
    return BlockState(s, v, mode)


def _held_at_wall(
    s: float, v: float, net: float, bounds: tuple[float, float]
) -> bool:
    # A block resting exactly at a movement limit with the net force
    # pointing outward receives a zero net force and stays put.
    if v != 0.0:
        return False
    return (s == bounds[1] and net > 0.0) or (s == bounds[0] and net < 0.0)


def force_probe(
    state: BlockState, params: SceneParams, applied: float
) -> tuple[Mode, ForceBreakdown]:
    """Instantaneous force diagram without advancing time.

    Resolves the same static/kinetic/wall-hold decision as :func:`step`
    and reports the effective mode plus the forces that would act.
    """
    m = params.mass
    weight = m * params.gravity
    cone = max_static_friction(params)
    n = normal_force(params)
    g_tan = -weight * math.sin(params.angle)
    driving = applied + g_tan

    if state.mode is Mode.STATIC and abs(driving) <= cone:
        return Mode.STATIC, ForceBreakdown(weight, g_tan, n, applied, -driving, 0.0)

    friction = kinetic_friction(params, state.v, driving)
    net = driving + friction
    if _held_at_wall(state.s, state.v, net, params.bounds):
        held = -math.copysign(min(abs(driving), cone), driving)
        return state.mode, ForceBreakdown(weight, g_tan, n, applied, held, 0.0)
    return Mode.KINETIC, ForceBreakdown(weight, g_tan, n, applied, friction, net)


def step(
    state: BlockState, params: SceneParams, applied: float
) -> tuple[BlockState, ForceBreakdown]:
    """Advance the block by one fixed timestep under ``applied`` force.

    Implements the stick-slip state machine:

    1. While static, friction balances the driving force exactly until the
       drive leaves the cone, at which point the mode flips to kinetic.
    2. While kinetic, Coulomb friction opposes the velocity and the state is
       integrated with semi-implicit Euler. A velocity zero crossing clamps
       v to exactly 0; if the drive is back inside the cone the block
       re-sticks (likewise when |v| falls below the stick threshold).
    3. Boundary handling: a block resting at a limit under an outward net
       force is held with zero net force; one that overshoots a limit is
       mirrored about it with its momentum inverted.

    Returns the new state and the forces actually in effect this tick.
    """
    m = params.mass
    weight = m * params.gravity
    cone = max_static_friction(params)
    n = normal_force(params)
    g_tan = -weight * math.sin(params.angle)
    driving = applied + g_tan

    mode = state.mode
    if mode is Mode.STATIC:
        if abs(driving) <= cone:
            return state, ForceBreakdown(weight, g_tan, n, applied, -driving, 0.0)
        mode = Mode.KINETIC

    friction = kinetic_friction(params, state.v, driving)
    net = driving + friction

    if _held_at_wall(state.s, state.v, net, params.bounds):
        held = -math.copysign(min(abs(driving), cone), driving)
        return state, ForceBreakdown(weight, g_tan, n, applied, held, 0.0)

    v_new = state.v + (net / m) * params.dt
    crossed = state.v != 0.0 and v_new * state.v < 0.0
    if crossed:
        v_new = 0.0
    if (crossed or abs(v_new) < params.stick_velocity_epsilon) and abs(driving) <= cone:
        restuck = BlockState(state.s, 0.0, Mode.STATIC)
        return restuck, ForceBreakdown(weight, g_tan, n, applied, -driving, 0.0)

    s_new = state.s + v_new * params.dt
    s_min, s_max = params.bounds
    outward = (net > 0.0 and s_new >= s_max) or (net < 0.0 and s_new <= s_min)
    new_state = enforce_bounds(BlockState(s_new, v_new, mode), params, outward)
    return new_state, ForceBreakdown(weight, g_tan, n, applied, friction, net)


def advance(
    state: BlockState, params: SceneParams, applied: float, ticks: int
) -> tuple[BlockState, bool]:
    """Run ``ticks`` steps under a constant applied force, without logging.

    Scalar fast path for long headless runs (parameter sweeps, the stiction
    and performance suites); bit-identical to repeated :func:`step` calls.
    Returns the final state and whether the block ever left static mode.
    """
    m = params.mass
    dt = params.dt
    eps = params.stick_velocity_epsilon
    s_min, s_max = params.bounds
    cone = max_static_friction(params)
    fk = params.mu_kinetic * normal_force(params)
    g_tan = -m * params.gravity * math.sin(params.angle)
    driving = applied + g_tan
    inside_cone = abs(driving) <= cone

    s = state.s
    v = state.v
    static = state.mode is Mode.STATIC
    slipped = not static

    for _ in range(ticks):
        if static and inside_cone:
            continue
        if v > 0.0:
            friction = -fk
        elif v < 0.0:
            friction = fk
        elif driving > 0.0:
            friction = -fk
        elif driving < 0.0:
            friction = fk
        else:
            friction = 0.0
        net = driving + friction
        if v == 0.0 and ((s == s_max and net > 0.0) or (s == s_min and net < 0.0)):
            continue  # held at the wall; mode deliberately unchanged
        if static:
            static = False
            slipped = True
        v_new = v + (net / m) * dt
        crossed = v != 0.0 and v_new * v < 0.0
        if crossed:
            v_new = 0.0
        if (crossed or abs(v_new) < eps) and inside_cone:
            v = 0.0
            static = True
            continue
        v = v_new
        s = s + v * dt
        if s > s_max:
            s = 2.0 * s_max - s
            v = -v
        elif s < s_min:
            s = 2.0 * s_min - s
            v = -v

    mode = Mode.STATIC if static else Mode.KINETIC
    return BlockState(s, v if not static else 0.0, mode), slipped
