"""Device abstraction and spring-damper coupling between pointer and block.

A device (scripted for headless runs, live for interactive ones) produces a
dimensionless coordinate in [-1, 1] that maps affinely onto the incline
axis. The mapped proxy point pushes the block through a one-sided
spring-damper on whichever block face it penetrates; the equal-and-opposite
reaction is what a force-feedback device would render.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

from .physics import BlockState


class NonMonotonicScript(ValueError):
    """Raised when script keyframe times are not strictly increasing."""


@dataclass(frozen=True, slots=True)
class ProxyState:
    """Pointer position and velocity mapped onto the incline axis."""

    s_proxy: float
    v_proxy: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.s_proxy) and math.isfinite(self.v_proxy)):
            raise ValueError("proxy state must be finite")


@dataclass(frozen=True, slots=True)
class CouplingParams:
    """Spring-damper constants tying the proxy point to the block."""

    stiffness: float = 500.0  # N/m
    damping: float = 5.0  # N*s/m, acts only while closing
    max_force: float = 9.0  # N, near the physical limit of a desktop device
    block_half_length: float = 0.05  # m
    workspace_scale: float = 0.5  # m of axis per device unit

    def __post_init__(self) -> None:
        if not (self.stiffness > 0.0):
            raise ValueError("stiffness must be > 0")
        if self.damping < 0.0:
            raise ValueError("damping must be >= 0")
        if not (self.max_force > 0.0):
            raise ValueError("max_force must be > 0")
        if not (self.block_half_length > 0.0):
            raise ValueError("block_half_length must be > 0")
        if not (self.workspace_scale > 0.0):
            raise ValueError("workspace_scale must be > 0")


def map_workspace(device_coord: float, bounds: tuple[float, float]) -> float:
    """Affine map of the device axis [-1, 1] onto [s_min, s_max].

    Out-of-range coordinates are mapped linearly without clamping.
    """
    s_min, s_max = bounds
    return s_min + (device_coord + 1.0) * 0.5 * (s_max - s_min)


def penetration(
    proxy_s: float, block_s: float, half_length: float
) -> tuple[float, float]:
    """Depth of the proxy point inside the nearer block face.

    Returns ``(depth, direction)`` where direction is +1 when the proxy
    presses on the down-slope face (pushing the block up) and -1 on the
    up-slope face. Depth <= 0 means no contact.
    """
    if proxy_s < block_s:
        return proxy_s - (block_s - half_length), 1.0
    return (block_s + half_length) - proxy_s, -1.0


def coupling_force(
    proxy: ProxyState, block: BlockState, params: CouplingParams
) -> tuple[float, float]:
    """Force applied to the block and the reaction rendered to the device.

    Zero outside contact; inside, a spring proportional to penetration plus
    a damper acting only on the closing speed, clamped to ``max_force``.
    The rendered force is the exact negative of the applied force.
    """
    depth, direction = penetration(proxy.s_proxy, block.s, params.block_half_length)
    if depth <= 0.0:
        return 0.0, 0.0
    closing = direction * (proxy.v_proxy - block.v)
    magnitude = params.stiffness * depth + params.damping * max(0.0, closing)
    if magnitude > params.max_force:
        magnitude = params.max_force
    applied = direction * magnitude
    return applied, -applied


class ScriptedDevice:
    """Device source replaying keyframed coordinates, linearly interpolated.

    Holds the first value before the first keyframe and the last value after
    the final one; an empty script is a constant rest pose at coordinate 0.
    """

    def __init__(self, script: list[tuple[float, float]]):
        times = [t for t, _ in script]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise NonMonotonicScript("script times must be strictly increasing")
        self._times = times
        self._coords = [c for _, c in script]

    def coord(self, t: float) -> float:
        if not self._times:
            return 0.0
        i = bisect.bisect_right(self._times, t)
        if i == 0:
            return self._coords[0]
        if i == len(self._times):
            return self._coords[-1]
        t0, t1 = self._times[i - 1], self._times[i]
        c0, c1 = self._coords[i - 1], self._coords[i]
        return c0 + (c1 - c0) * (t - t0) / (t1 - t0)


def scripted_device(script: list[tuple[float, float]]) -> ScriptedDevice:
    return ScriptedDevice(script)


class ConstantForce:
    """Force source applying a fixed tangential force, bypassing the proxy."""

    def __init__(self, newtons: float):
        self._f = float(newtons)

    def force(self, t: float) -> float:
        return self._f


class RampForce:
    """Force source increasing linearly from zero at ``rate`` N/s."""

    def __init__(self, rate: float):
        self._rate = float(rate)

    def force(self, t: float) -> float:
        return self._rate * t
