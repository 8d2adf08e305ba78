"""Deterministic visuo-haptic friction simulation toolkit.

Modules:

- physics:  stick-slip Coulomb dynamics on an inclined plane
- pulley:   closed-form solver for the incline-and-hanging-mass problem
- haptics:  device abstraction and proxy spring-damper coupling
- session:  scenario config, the fixed-tick run loop, trajectories, replay
- stats:    normalized learning gain and Welch's t-test
- service:  websocket state streaming with live commands
- report:   figure rendering for CLI report paths
- cli:      headless entry point (``frictionlab ...``)
"""

from .haptics import (
    ConstantForce,
    CouplingParams,
    NonMonotonicScript,
    ProxyState,
    RampForce,
    ScriptedDevice,
    coupling_force,
    map_workspace,
    scripted_device,
)
from .physics import (
    STANDARD_GRAVITY,
    BlockState,
    ForceBreakdown,
    Mode,
    SceneParams,
    StaticConeViolation,
    advance,
    enforce_bounds,
    force_probe,
    kinetic_friction,
    max_static_friction,
    normal_force,
    static_friction,
    step,
    will_slip,
)
from .pulley import PulleyProblem, PulleySolution, Regime, solve
from .session import (
    MismatchAt,
    ParseError,
    Scenario,
    TrajectorySample,
    ValidationError,
    breakaway_tick,
    load_scenario,
    replay,
    run,
    scenario_from_dict,
    to_csv,
)
from .stats import (
    DenominatorZero,
    InsufficientData,
    ScorePair,
    TTestResult,
    ZeroVariance,
    normalized_gain,
    regularized_incomplete_beta,
    student_t_cdf,
    two_tailed_p,
    welch_t,
)

__version__ = "0.1.0"

__all__ = [
    "STANDARD_GRAVITY",
    "BlockState",
    "ConstantForce",
    "CouplingParams",
    "DenominatorZero",
    "ForceBreakdown",
    "InsufficientData",
    "MismatchAt",
    "Mode",
    "NonMonotonicScript",
    "ParseError",
    "ProxyState",
    "PulleyProblem",
    "PulleySolution",
    "RampForce",
    "Regime",
    "Scenario",
    "SceneParams",
    "ScorePair",
    "ScriptedDevice",
    "StaticConeViolation",
    "TTestResult",
    "TrajectorySample",
    "ValidationError",
    "ZeroVariance",
    "advance",
    "breakaway_tick",
    "coupling_force",
    "enforce_bounds",
    "force_probe",
    "kinetic_friction",
    "load_scenario",
    "map_workspace",
    "max_static_friction",
    "normal_force",
    "normalized_gain",
    "regularized_incomplete_beta",
    "replay",
    "run",
    "scenario_from_dict",
    "scripted_device",
    "solve",
    "static_friction",
    "step",
    "student_t_cdf",
    "to_csv",
    "two_tailed_p",
    "welch_t",
    "will_slip",
]
