"""Workspace mapping, coupling spring-damper and scripted device sources."""

import math

import pytest

from frictionlab.haptics import (
    ConstantForce,
    CouplingParams,
    NonMonotonicScript,
    ProxyState,
    RampForce,
    coupling_force,
    map_workspace,
    penetration,
    scripted_device,
)
from frictionlab.physics import BlockState, Mode


def coupling(**kwargs) -> CouplingParams:
    base = dict(stiffness=500.0, damping=0.0, max_force=9.0, block_half_length=0.05)
    base.update(kwargs)
    return CouplingParams(**base)


def test_map_workspace():
    assert map_workspace(0.0, (0.0, 1.0)) == 0.5
    assert map_workspace(1.0, (0.0, 1.0)) == 1.0
    assert map_workspace(-1.0, (0.0, 1.0)) == 0.0
    assert map_workspace(0.5, (0.0, 2.0)) == 1.5
    # out-of-range coordinates extrapolate linearly
    assert map_workspace(3.0, (0.0, 1.0)) == 2.0


def test_coupling_params_validation():
    with pytest.raises(ValueError):
        coupling(stiffness=0.0)
    with pytest.raises(ValueError):
        coupling(damping=-1.0)
    with pytest.raises(ValueError):
        coupling(max_force=0.0)
    with pytest.raises(ValueError):
        coupling(block_half_length=0.0)
    with pytest.raises(ValueError):
        CouplingParams(workspace_scale=0.0)


def test_proxy_state_must_be_finite():
    with pytest.raises(ValueError):
        ProxyState(math.nan)
    with pytest.raises(ValueError):
        ProxyState(0.0, math.inf)


def test_no_contact_means_no_force():
    block = BlockState(0.5)
    applied, rendered = coupling_force(ProxyState(0.2), block, coupling())
    assert applied == 0.0 and rendered == 0.0
    # exactly at the face: zero depth, zero force (continuity at onset)
    applied, rendered = coupling_force(ProxyState(0.45), block, coupling())
    assert applied == 0.0 and rendered == 0.0


def test_spring_force_and_reaction():
    block = BlockState(0.5)
    proxy = ProxyState(0.45 + 0.002)  # 2 mm into the down-slope face
    applied, rendered = coupling_force(proxy, block, coupling())
    assert applied == pytest.approx(1.0, rel=1e-12)
    assert rendered == -applied


def test_push_down_slope_from_above():
    block = BlockState(0.5)
    proxy = ProxyState(0.55 - 0.002)
    applied, rendered = coupling_force(proxy, block, coupling())
    assert applied == pytest.approx(-1.0, rel=1e-12)
    assert rendered == pytest.approx(1.0, rel=1e-12)


def test_force_clamp():
    block = BlockState(0.5)
    proxy = ProxyState(0.5 - 0.001)  # deep penetration, k*d = 24.5 N
    applied, rendered = coupling_force(proxy, block, coupling())
    assert applied == 9.0
    assert rendered == -9.0


def test_damping_acts_only_while_closing():
    block = BlockState(0.5, 0.0, Mode.STATIC)
    params = coupling(damping=10.0)
    depth_pos = ProxyState(0.455, 0.3)  # lower face, approaching
    applied_closing, _ = coupling_force(depth_pos, block, params)
    depth_neg = ProxyState(0.455, -0.3)  # lower face, retreating
    applied_opening, _ = coupling_force(depth_neg, block, params)
    spring_only = 500.0 * 0.005
    assert applied_closing == pytest.approx(spring_only + 10.0 * 0.3, rel=1e-12)
    assert applied_opening == pytest.approx(spring_only, rel=1e-12)


def test_action_reaction_everywhere():
    block = BlockState(0.5, 0.1, Mode.KINETIC)
    params = coupling(damping=5.0)
    for s in (0.2, 0.451, 0.47, 0.5, 0.53, 0.549, 0.9):
        for v in (-1.0, 0.0, 1.0):
            applied, rendered = coupling_force(ProxyState(s, v), block, params)
            assert rendered == -applied
            assert abs(rendered) <= params.max_force


def test_damping_dissipates_over_a_cycle():
    # oscillating proxy against a static block: the damper must only ever
    # extract energy from the hand driving the proxy
    block = BlockState(0.5)
    params = coupling(damping=8.0)
    dt = 1e-3
    amplitude = 0.004
    omega = 2.0 * math.pi * 2.0
    center = 0.45  # at the down-slope face
    work_by_damper_on_proxy = 0.0
    for i in range(1000):  # two full cycles
        t = i * dt
        s_p = center + amplitude * math.sin(omega * t)
        v_p = amplitude * omega * math.cos(omega * t)
        proxy = ProxyState(s_p, v_p)
        applied, rendered = coupling_force(proxy, block, params)
        depth, direction = penetration(s_p, block.s, params.block_half_length)
        spring = direction * params.stiffness * max(0.0, depth)
        damper_rendered = rendered - (-spring) if depth > 0.0 else 0.0
        work_by_damper_on_proxy += damper_rendered * v_p * dt
    assert work_by_damper_on_proxy <= 1e-12


def test_scripted_device_interpolation():
    dev = scripted_device([(0.0, -1.0), (1.0, 1.0)])
    assert dev.coord(0.5) == pytest.approx(0.0, abs=1e-15)
    dev2 = scripted_device([(0.0, 0.0), (2.0, 1.0)])
    assert dev2.coord(0.5) == pytest.approx(0.25, rel=1e-12)
    # holds endpoints outside the keyframe range
    assert dev2.coord(-1.0) == 0.0
    assert dev2.coord(99.0) == 1.0


def test_scripted_device_empty_is_rest_pose():
    dev = scripted_device([])
    assert dev.coord(0.0) == 0.0
    assert dev.coord(123.4) == 0.0


def test_scripted_device_rejects_non_monotonic():
    with pytest.raises(NonMonotonicScript):
        scripted_device([(0.0, 0.0), (1.0, 0.5), (1.0, 0.7)])
    with pytest.raises(NonMonotonicScript):
        scripted_device([(2.0, 0.0), (1.0, 0.5)])


def test_force_sources():
    assert ConstantForce(3.5).force(10.0) == 3.5
    ramp = RampForce(2.0)
    assert ramp.force(0.0) == 0.0
    assert ramp.force(1.5) == 3.0
