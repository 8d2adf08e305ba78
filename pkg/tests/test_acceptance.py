"""Acceptance suite: one test per release criterion, at pinned tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS line per
criterion. Classroom-scale learning outcomes need human subjects and stay
out of scope; everything here rests on analytic oracles, property checks
and formula-level fixtures.
"""

import asyncio
import json
import math
import random
import time

import pytest
from websockets.asyncio.client import connect

from frictionlab.haptics import scripted_device
from frictionlab.physics import (
    BlockState,
    Mode,
    SceneParams,
    advance,
    enforce_bounds,
    max_static_friction,
    step,
    will_slip,
)
from frictionlab.pulley import PulleyProblem, Regime, solve
from frictionlab.service import serve
from frictionlab.session import (
    MismatchAt,
    replay,
    run,
    scenario_from_dict,
    to_csv,
)
from frictionlab.stats import ScorePair, normalized_gain, welch_t

from test_pulley import oracle as pulley_oracle
from test_stats import oracle_two_tailed_p


def ok(line: str) -> None:
    print(f"[PASS] {line}")


def test_stiction_suite():
    # 200 randomized configurations, constant sub-threshold drive,
    # 10 simulated seconds each: displacement exactly zero, never kinetic
    rng = random.Random(20110415)
    started = time.perf_counter()
    for _ in range(200):
        m = rng.uniform(0.2, 8.0)
        theta = rng.uniform(0.0, math.radians(44.0))
        mu_s = math.tan(theta) + rng.uniform(0.02, 1.0)
        p = SceneParams(
            mass=m, angle=theta, mu_static=mu_s, mu_kinetic=mu_s * 0.8,
            gravity=9.8, bounds=(0.0, 1.0),
        )
        cone = max_static_friction(p)
        pull = m * p.gravity * math.sin(theta)
        applied = pull + rng.uniform(-0.98, 0.98) * cone
        final, slipped = advance(BlockState(0.5), p, applied, 10_000)
        assert not slipped, "mode left Static under sub-threshold drive"
        assert final.s == 0.5, "displacement must be exactly zero"
        assert final.v == 0.0
        assert final.mode is Mode.STATIC
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0, f"stiction suite took {elapsed:.1f} s"
    ok(f"stiction: 200 configs x 10 s, zero displacement ({elapsed:.2f} s)")


def test_breakaway_accuracy():
    rng = random.Random(7321)
    worst = 0.0
    for _ in range(20):
        m = rng.uniform(0.2, 6.0)
        theta = rng.uniform(0.0, math.radians(40.0))
        mu_s = math.tan(theta) + rng.uniform(0.05, 1.0)
        p = SceneParams(
            mass=m, angle=theta, mu_static=mu_s, mu_kinetic=mu_s * 0.7,
            gravity=9.8, bounds=(-1e6, 1e6),
        )
        analytic = m * p.gravity * (math.sin(theta) + mu_s * math.cos(theta))
        rate = analytic / 4.0
        state = BlockState(0.0)
        measured = None
        for i in range(1, 8000):
            applied = rate * (i * p.dt)
            state, _ = step(state, p, applied)
            if state.mode is Mode.KINETIC:
                measured = applied
                break
        assert measured is not None, "ramp never reached breakaway"
        rel = abs(measured - analytic) / analytic
        worst = max(worst, rel)
        assert rel < 0.01, f"breakaway off by {rel:.3%}"
    ok(f"breakaway: 20 ramps within 1% of m g (sin + mu_s cos) (worst {worst:.2e})")


def test_angle_of_repose():
    step_rad = math.radians(0.1)
    for i in range(10):
        mu_s = 0.1 + 0.12 * i
        repose = math.atan(mu_s)
        # half-step offset keeps every grid point clear of the exact
        # boundary, where the slip test is float-sensitive by design
        thetas = [repose + (k + 0.5) * step_rad for k in range(-20, 20)]
        slip_flags = []
        for theta in thetas:
            p = SceneParams(
                mass=1.0, angle=theta, mu_static=mu_s, mu_kinetic=mu_s,
                gravity=9.8, bounds=(0.0, 1.0),
            )
            analytic_slips = math.tan(theta) > mu_s
            assert will_slip(p, 0.0) == analytic_slips
            _, slipped = advance(BlockState(0.5), p, 0.0, 500)
            assert slipped == analytic_slips
            slip_flags.append(slipped)
        # a single transition, localized at the analytic boundary
        transitions = [
            k for k in range(1, len(slip_flags)) if slip_flags[k] != slip_flags[k - 1]
        ]
        assert len(transitions) == 1
        boundary_theta = thetas[transitions[0]]
        assert abs(boundary_theta - repose) <= step_rad + 1e-12
    ok("angle of repose: self-slip iff tan(theta) > mu_s, boundary within one step")


def test_stopping_distance():
    expected = 2.0**2 / (2.0 * 0.3 * 9.8)  # 0.680272108... m
    p = SceneParams(
        mass=1.0, angle=0.0, mu_static=0.5, mu_kinetic=0.3, gravity=9.8,
        bounds=(-10.0, 10.0), dt=1e-3,
    )
    final, _ = advance(BlockState(0.0, 2.0, Mode.KINETIC), p, 0.0, 2000)
    assert final.v == 0.0
    rel = abs(final.s - expected) / expected
    assert rel < 0.005, f"stopping distance off by {rel:.3%}"
    # and the error shrinks with dt
    p_fine = SceneParams(
        mass=1.0, angle=0.0, mu_static=0.5, mu_kinetic=0.3, gravity=9.8,
        bounds=(-10.0, 10.0), dt=1e-4,
    )
    fine, _ = advance(BlockState(0.0, 2.0, Mode.KINETIC), p_fine, 0.0, 20000)
    assert abs(fine.s - expected) < abs(final.s - expected)
    ok(f"stopping distance: {final.s:.6f} m vs {expected:.6f} m ({rel:.2e} rel)")


def test_pulley_oracle_agreement():
    rng = random.Random(886)
    checked = 0
    attempts = 0
    while checked < 500:
        attempts += 1
        assert attempts < 5000
        mu_s = rng.uniform(0.0, 1.2)
        p = PulleyProblem(
            m1=rng.uniform(0.1, 5.0), m2=rng.uniform(0.1, 5.0),
            angle=rng.uniform(0.0, math.radians(60.0)),
            mu_static=mu_s,
            mu_kinetic=rng.uniform(0.0, mu_s) if mu_s > 0.0 else 0.0,
            gravity=9.8,
        )
        drive = p.m2 * p.gravity - p.m1 * p.gravity * math.sin(p.angle)
        cone = p.mu_static * p.m1 * p.gravity * math.cos(p.angle)
        if abs(abs(drive) - cone) < 1e-6:
            continue
        sol = solve(p)
        regime, accel = pulley_oracle(p, dt=1e-4)
        assert regime is sol.regime, "regime disagreement with time-stepped oracle"
        if sol.regime is not Regime.EQUILIBRIUM:
            assert accel == pytest.approx(sol.acceleration, rel=0.01)
        checked += 1

    # the two worked instances, to 6 significant digits
    up = solve(PulleyProblem(1.0, 2.0, math.radians(30.0), 0.2, 0.15, 9.8))
    assert up.regime is Regime.SLIDES_UP_INCLINE
    assert up.acceleration == pytest.approx(4.4756475521456265, rel=1e-6)
    assert up.tension == pytest.approx(10.648704895708748, rel=1e-6)
    down = solve(PulleyProblem(2.0, 0.1, math.radians(45.0), 0.2, 0.15, 9.8))
    assert down.regime is Regime.SLIDES_DOWN_INCLINE
    assert down.acceleration == pytest.approx(5.143047130746609, rel=1e-6)
    assert down.tension == pytest.approx(1.4943047130746612, rel=1e-6)
    ok("pulley: 500 random problems match the dt=1e-4 oracle; worked cases to 6 digits")


def test_boundary_behavior():
    # (a) hard scripted pushes into each bound stay contained
    for target in (1.0, -1.0):
        sc = scenario_from_dict({
            "angle_deg": 0.0, "mu_static": 0.05, "mu_kinetic": 0.02,
            "duration_s": 3.0, "coupling": {"damping": 2.0},
        })
        dev = scripted_device([(0.0, 0.0), (0.5, target), (3.0, target)])
        samples = run(sc, dev)
        s_min, s_max = sc.scene.bounds
        assert all(s_min <= r.s <= s_max for r in samples)

    # (b) momentum inversion preserves speed to 1e-12 relative
    p = SceneParams(mass=1.0, angle=0.0, mu_static=0.3, mu_kinetic=0.2,
                    gravity=9.8, bounds=(0.0, 1.0))
    rng = random.Random(4)
    for _ in range(500):
        v = rng.uniform(1e-3, 8.0)
        overshoot = BlockState(1.0 + rng.uniform(1e-12, 5e-3), v, Mode.KINETIC)
        reflected = enforce_bounds(overshoot, p)
        assert 0.0 <= reflected.s <= 1.0
        assert abs(abs(reflected.v) - v) <= 1e-12 * v

    # (c) zero-net-force hold: sustained outward push at the wall
    state = BlockState(1.0, 0.0, Mode.STATIC)
    push = 5.0 * max_static_friction(p)
    for _ in range(2000):
        state, bd = step(state, p, push)
        assert state.s == 1.0
        assert state.v == 0.0
        assert bd.net == 0.0
    ok("boundary: containment, 1e-12 reflection, zero-net-force wall hold")


def test_determinism_and_replay():
    doc = {
        "angle_deg": 12.0, "mu_static": 0.4, "mu_kinetic": 0.25,
        "duration_s": 2.0, "coupling": {"damping": 1.0},
    }
    script = [(0.0, -0.8), (0.4, -0.11), (1.2, 0.3), (2.0, -0.5)]
    sc_a = scenario_from_dict(doc)
    sc_b = scenario_from_dict(doc)
    csv_a = to_csv(run(sc_a, scripted_device(script)))
    csv_b = to_csv(run(sc_b, scripted_device(script)))
    assert csv_a == csv_b, "reruns must be byte-identical"

    samples = run(sc_a, scripted_device(script))
    assert replay(samples, sc_a) is True

    k = len(samples) // 3
    tampered = list(samples)
    r = samples[k]
    tampered[k] = type(r)(
        r.t, r.s, math.nextafter(r.v, math.inf), r.mode, r.applied,
        r.friction, r.normal, r.gravity_t, r.net, r.proxy_s, r.contact,
    )
    with pytest.raises(MismatchAt):
        replay(tampered, sc_a)
    ok("determinism: byte-identical CSV, replay closure, 1-bit tamper detected")


def test_performance_million_ticks():
    # sliding regime with wall bounces: the loop never short-circuits
    p = SceneParams(mass=1.0, angle=0.0, mu_static=0.2, mu_kinetic=0.1,
                    gravity=9.8, bounds=(0.0, 1.0))
    state = BlockState(0.5)
    started = time.perf_counter()
    state, slipped = advance(state, p, 3.0, 1_000_000)
    elapsed = time.perf_counter() - started
    assert slipped and state.mode is Mode.KINETIC  # it really ran kinetic ticks
    assert elapsed < 1.0, f"1e6 ticks took {elapsed:.2f} s"
    ok(f"performance: 1e6 ticks in {elapsed:.2f} s "
       f"({1e6 / elapsed / 1000.0:.0f}x the 1 kHz loop)")


def test_assessment_formulas():
    for x in (0.0, 37.5, 99.0):
        assert normalized_gain(ScorePair(x, x)) == 0.0
        assert normalized_gain(ScorePair(x, 100.0)) == 1.0
    assert normalized_gain(ScorePair(50.0, 59.1)) == pytest.approx(0.182, abs=1e-12)

    result = welch_t([1.0, 2.0, 3.0], [2.0, 3.0, 4.0])
    assert result.t == pytest.approx(-1.224745, abs=5e-7)
    assert result.df == pytest.approx(4.0, rel=1e-12)
    assert result.p_two_tailed == pytest.approx(
        oracle_two_tailed_p(result.t, result.df), abs=1e-4
    )
    ok("assessment: gain identities, (50, 59.1) -> 0.182, Welch fixture and p oracle")


def test_service_protocol_golden_session(tmp_path):
    state_keys = {
        "type", "seq", "t", "s", "v", "mode", "forces", "proxy_s",
        "contact", "recording", "warnings", "params",
    }
    force_keys = {
        "gravity_total", "gravity_tangential", "normal", "applied",
        "friction", "net",
    }

    async def session() -> None:
        sc = scenario_from_dict({"angle_deg": 20.0, "coupling": {"damping": 0.0}})
        handle = await serve(sc, "127.0.0.1", 0, record_dir=tmp_path)
        host, port = handle.address
        cone_tol = 1e-12

        def check_state(msg: dict) -> None:
            assert state_keys <= set(msg)
            assert force_keys == set(msg["forces"])
            mu_s = msg["params"]["mu_static"]
            m = msg["params"]["mass_kg"]
            g = msg["params"]["gravity"]
            cone = mu_s * m * g * math.cos(math.radians(msg["params"]["angle_deg"]))
            assert abs(msg["forces"]["friction"]) <= cone + cone_tol
            if msg["mode"] == "static":
                assert msg["forces"]["net"] == 0.0

        async def next_state(ws, predicate) -> dict:
            for _ in range(400):
                msg = json.loads(await ws.recv())
                if "error" in msg:
                    continue
                check_state(msg)
                if predicate(msg):
                    return msg
            raise AssertionError("expected state never arrived")

        try:
            async with connect(f"ws://{host}:{port}") as ws:
                # phase 1: connect, measure the broadcast rate
                first = json.loads(await ws.recv())
                check_state(first)
                started = time.perf_counter()
                count = 0
                while time.perf_counter() - started < 1.0:
                    check_state(json.loads(await ws.recv()))
                    count += 1
                rate = count / (time.perf_counter() - started)
                assert 55.0 <= rate <= 65.0, f"snapshot rate {rate:.1f} Hz"

                # phase 2: SetParam echo
                await ws.send(json.dumps({
                    "type": "cmd",
                    "cmd": {"kind": "set_param", "key": "angle_deg", "value": 10.0},
                }))
                echoed = await next_state(
                    ws, lambda s: abs(s["params"]["angle_deg"] - 10.0) < 1e-9
                )
                want = echoed["params"]["mass_kg"] * echoed["params"]["gravity"] \
                    * math.cos(math.radians(10.0))
                assert echoed["forces"]["normal"] == pytest.approx(want, rel=1e-9)

                # phase 3: proxy push sequence, recorded
                await ws.send(json.dumps({
                    "type": "cmd", "cmd": {"kind": "record", "on": True},
                }))
                for coord in (-0.6, -0.3, -0.15, -0.094):
                    await ws.send(json.dumps({
                        "type": "cmd",
                        "cmd": {"kind": "proxy", "device_coord": coord},
                    }))
                    await asyncio.sleep(0.06)
                await next_state(
                    ws, lambda s: s["contact"] and s["forces"]["applied"] > 0.0
                )

                # phase 4: stop recording, file spans the on-interval
                await ws.send(json.dumps({
                    "type": "cmd", "cmd": {"kind": "record", "on": False},
                }))
                await next_state(ws, lambda s: not s["recording"])
                files = list(tmp_path.glob("recording-*.csv"))
                assert len(files) == 1
                lines = files[0].read_text().strip().split("\n")
                assert lines[0].startswith("t,s,v,mode")
                ts = [float(line.split(",")[0]) for line in lines[1:]]
                assert len(ts) > 100
                assert all(b > a for a, b in zip(ts, ts[1:]))

                # phase 5: reset restores the initial state
                await ws.send(json.dumps({
                    "type": "cmd", "cmd": {"kind": "reset"},
                }))
                snap = await next_state(ws, lambda s: s["t"] < 0.5)
                assert snap["s"] == sc.initial.s
                assert snap["v"] == 0.0
        finally:
            await handle.close()

    asyncio.run(session())
    ok("service: golden scripted session, 60 +- 5 Hz, cone holds on every snapshot")
