"""Closed-form solver for the block-and-hanging-mass pulley problem.

A block of mass ``m1`` rests on an incline and is tied over an ideal pulley
to a hanging mass ``m2``. Released from rest, the pair either stays in
equilibrium or slides as a unit one way or the other; this module classifies
the outcome and reports acceleration, string tension and the friction force
on the incline block.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass


class Regime(enum.Enum):
    EQUILIBRIUM = "equilibrium"
    SLIDES_UP_INCLINE = "slides_up_incline"
    SLIDES_DOWN_INCLINE = "slides_down_incline"


@dataclass(frozen=True, slots=True)
class PulleyProblem:
    m1: float  # block on the incline, kg
    m2: float  # hanging mass, kg
    angle: float  # incline angle, radians
    mu_static: float
    mu_kinetic: float
    gravity: float = 9.80665

    def __post_init__(self) -> None:
        if not (self.m1 > 0.0):
            raise ValueError("m1 must be > 0")
        if not (self.m2 > 0.0):
            raise ValueError("m2 must be > 0")
        if not (0.0 <= self.angle < math.pi / 2):
            raise ValueError("angle must lie in [0, pi/2)")
        if self.mu_static < 0.0:
            raise ValueError("mu_static must be >= 0")
        if self.mu_kinetic < 0.0:
            raise ValueError("mu_kinetic must be >= 0")
        if not (self.gravity > 0.0):
            raise ValueError("gravity must be > 0")


@dataclass(frozen=True, slots=True)
class PulleySolution:
    regime: Regime
    acceleration: float  # magnitude, m/s^2
    tension: float  # N
    friction: float  # signed along +s (up-slope positive), acting on m1


def solve(problem: PulleyProblem) -> PulleySolution:
    """Classify the released-from-rest outcome and its dynamics.

    The driving force ``D = m2*g - m1*g*sin(angle)`` (positive pulls the
    block up-slope). Inside the static cone the system stays put with the
    string carrying the hanging weight; outside it, the pair accelerates
    against kinetic friction on the incline block.
    """
    g = problem.gravity
    normal = problem.m1 * g * math.cos(problem.angle)
    driving = problem.m2 * g - problem.m1 * g * math.sin(problem.angle)
    cone = problem.mu_static * normal

    if abs(driving) <= cone:
        return PulleySolution(Regime.EQUILIBRIUM, 0.0, problem.m2 * g, -driving)

    total = problem.m1 + problem.m2
    accel = (abs(driving) - problem.mu_kinetic * normal) / total
    if accel < 0.0:
        # Only reachable with mu_kinetic > mu_static: kinetic friction would
        # overpower the drive immediately past breakaway. Treat as stuck.
        warnings.warn(
            "kinetic friction exceeds the breakaway drive; reporting equilibrium",
            stacklevel=2,
        )
        return PulleySolution(Regime.EQUILIBRIUM, 0.0, problem.m2 * g, -driving)

    friction = -math.copysign(problem.mu_kinetic * normal, driving)
    if driving > 0.0:
        # m2 descends and drags the block up the incline.
        return PulleySolution(
            Regime.SLIDES_UP_INCLINE, accel, problem.m2 * (g - accel), friction
        )
    return PulleySolution(
        Regime.SLIDES_DOWN_INCLINE, accel, problem.m2 * (g + accel), friction
    )
