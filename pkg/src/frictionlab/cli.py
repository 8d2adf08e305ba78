"""Headless command line: run scenarios, sweep breakaway forces, solve
pulley problems, compute score statistics, launch the streaming service.

Every subcommand is a thin shell over the library modules; no physics
lives here. Exit codes: 0 success, 1 runtime error, 2 usage/parse error.
"""

from __future__ import annotations

import argparse
import asyncio
import csv
import json
import math
import sys
from pathlib import Path

from . import session
from .haptics import ConstantForce, RampForce, scripted_device
from .physics import BlockState, Mode, SceneParams, advance, max_static_friction
from .pulley import PulleyProblem, solve
from .stats import ScorePair, normalized_gain, welch_t

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _read_file(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise CliError(f"file not found: {path}")
    return p.read_text(encoding="utf-8")


def _load_scenario_arg(path: str | None) -> session.Scenario:
    try:
        if path is None:
            return session.load_scenario("")
        return session.load_scenario(_read_file(path))
    except (session.ParseError, session.ValidationError) as exc:
        raise CliError(f"scenario error: {exc}") from exc


def _load_script(path: str) -> list[tuple[float, float]]:
    try:
        doc = json.loads(_read_file(path))
    except json.JSONDecodeError as exc:
        raise CliError(f"script error: {path}: {exc}") from exc
    if not isinstance(doc, list) or not all(
        isinstance(p, list) and len(p) == 2 for p in doc
    ):
        raise CliError(f"script error: {path}: expected a JSON array of [t, coord]")
    return [(float(t), float(c)) for t, c in doc]


def cmd_simulate(args: argparse.Namespace) -> int:
    scenario = _load_scenario_arg(args.scenario)
    duration = args.duration if args.duration is not None else scenario.duration
    if duration is None:
        duration = 10.0
    scenario = session.Scenario(
        scenario.kind, scenario.scene, scenario.coupling, scenario.initial,
        scenario.pulley, duration,
    )
    if args.script is not None:
        source = scripted_device(_load_script(args.script))
    else:
        source = ConstantForce(args.force)
    samples = session.run(scenario, source)

    if args.out:
        Path(args.out).write_text(session.to_csv(samples), encoding="utf-8")
    if args.plot:
        from . import report
        target = Path(args.out).with_suffix(".png") if args.out else Path("trajectory.png")
        report.trajectory_figure(samples, scenario.scene, target)

    final = samples[-1]
    summary = (
        f"final: s={final.s:.6g} m v={final.v:.6g} m/s mode={final.mode.value}"
    )
    slip = session.breakaway_tick(samples)
    if slip is not None:
        summary += f" breakaway_t={slip.t:.6g} s (applied={slip.applied:.6g} N)"
    print(summary)
    return EXIT_OK


def measure_breakaway(scene: SceneParams, ramp_rate: float, horizon: float) -> float:
    """Applied force at the first static-to-kinetic transition of a ramp."""
    state = BlockState(0.5 * (scene.bounds[0] + scene.bounds[1]), 0.0, Mode.STATIC)
    source = RampForce(ramp_rate)
    ticks = int(round(horizon / scene.dt))
    from .physics import step

    for i in range(1, ticks + 1):
        t = i * scene.dt
        state, _ = step(state, scene, source.force(t))
        if state.mode is Mode.KINETIC:
            return source.force(t)
    return math.nan


def _parse_sweep(spec: str) -> tuple[str, list[float]]:
    try:
        name, grid = spec.split("=", 1)
        start_s, stop_s, count_s = grid.split(":")
        start, stop, count = float(start_s), float(stop_s), int(count_s)
    except ValueError as exc:
        raise CliError(f"invalid sweep spec: {spec!r} (expected name=a:b:n)") from exc
    if name not in ("mu_s", "angle_deg"):
        raise CliError(f"invalid sweep parameter: {name!r} (mu_s or angle_deg)")
    if count < 1:
        raise CliError("sweep count must be >= 1")
    if count == 1:
        return name, [start]
    step_size = (stop - start) / (count - 1)
    return name, [start + i * step_size for i in range(count)]


def cmd_breakaway(args: argparse.Namespace) -> int:
    scenario = _load_scenario_arg(args.scenario)
    base = scenario.scene
    name, values = _parse_sweep(args.sweep)

    rows: list[tuple[float, float, float, float]] = []
    for value in values:
        if name == "mu_s":
            scene = SceneParams(
                mass=base.mass, angle=base.angle, mu_static=value,
                mu_kinetic=min(value, base.mu_kinetic), gravity=base.gravity,
                bounds=(-1e9, 1e9), dt=base.dt,
                stick_velocity_epsilon=base.stick_velocity_epsilon,
            )
        else:
            scene = SceneParams(
                mass=base.mass, angle=math.radians(value),
                mu_static=base.mu_static, mu_kinetic=base.mu_kinetic,
                gravity=base.gravity, bounds=(-1e9, 1e9), dt=base.dt,
                stick_velocity_epsilon=base.stick_velocity_epsilon,
            )
        gravity_pull = scene.mass * scene.gravity * math.sin(scene.angle)
        if gravity_pull > max_static_friction(scene):
            # Beyond the angle of repose the block self-slips unaided; no
            # finite applied force is needed for breakaway.
            analytic = 0.0
            measured = 0.0
        else:
            analytic = gravity_pull + max_static_friction(scene)
            ramp_rate = max(analytic, 1e-6) / 5.0
            measured = measure_breakaway(scene, ramp_rate, horizon=10.0)
        if analytic > 0.0:
            rel_err = abs(measured - analytic) / analytic
        else:
            rel_err = abs(measured - analytic)
        rows.append((value, measured, analytic, rel_err))

    lines = ["param,measured,analytic,rel_err"]
    for row in rows:
        lines.append(",".join(format(x, ".9g") for x in row))
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        if args.plot:
            from . import report
            report.sweep_figure(rows, name, Path(args.out).with_suffix(".png"))
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_pulley(args: argparse.Namespace) -> int:
    try:
        problem = PulleyProblem(
            m1=args.m1, m2=args.m2, angle=math.radians(args.angle_deg),
            mu_static=args.mu_s, mu_kinetic=args.mu_k, gravity=args.g,
        )
    except ValueError as exc:
        raise CliError(f"invalid pulley problem: {exc}") from exc
    solution = solve(problem)
    print(json.dumps({
        "regime": solution.regime.value,
        "acceleration": solution.acceleration,
        "tension": solution.tension,
        "friction": solution.friction,
    }))
    return EXIT_OK


def _read_csv(path: str) -> list[dict]:
    text = _read_file(path)
    reader = csv.DictReader(text.splitlines())
    return list(reader)


def cmd_gain(args: argparse.Namespace) -> int:
    rows = _read_csv(args.scores)
    if not rows or not {"student_id", "test2", "test3"} <= set(rows[0]):
        raise CliError(f"scores file {args.scores}: expected header student_id,test2,test3")
    gains = []
    print("student_id,gain")
    try:
        for row in rows:
            pair = ScorePair(float(row["test2"]), float(row["test3"]))
            gain = normalized_gain(pair)
            gains.append(gain)
            print(f"{row['student_id']},{gain:.9g}")
    except ValueError as exc:
        raise CliError(f"scores file {args.scores}: {exc}") from exc
    print(f"mean,{math.fsum(gains) / len(gains):.9g}")
    return EXIT_OK


def cmd_ttest(args: argparse.Namespace) -> int:
    rows = _read_csv(args.scores)
    if not rows or not {"group", "score"} <= set(rows[0]):
        raise CliError(f"scores file {args.scores}: expected header group,score")
    groups: dict[str, list[float]] = {"A": [], "B": []}
    try:
        for row in rows:
            if row["group"] not in groups:
                raise CliError(f"scores file {args.scores}: group must be A or B")
            groups[row["group"]].append(float(row["score"]))
    except ValueError as exc:
        raise CliError(f"scores file {args.scores}: {exc}") from exc
    try:
        result = welch_t(groups["A"], groups["B"])
    except ValueError as exc:
        raise CliError(f"t-test failed: {exc}", code=EXIT_RUNTIME) from exc
    print(json.dumps({
        "t": result.t, "df": result.df, "p_two_tailed": result.p_two_tailed,
    }))
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    from . import service as service_mod

    scenario = _load_scenario_arg(args.scenario)
    try:
        host, port_s = args.addr.rsplit(":", 1)
        port = int(port_s)
    except ValueError as exc:
        raise CliError(f"invalid address: {args.addr!r} (expected host:port)") from exc

    async def main() -> None:
        try:
            handle = await service_mod.serve(
                scenario, host, port, record_dir=args.record_dir
            )
        except OSError as exc:
            raise CliError(f"bind failed on {args.addr}: {exc}", code=EXIT_RUNTIME)
        bound = handle.address
        print(f"serving on {bound[0]}:{bound[1]}", flush=True)
        try:
            await asyncio.Future()
        finally:
            await handle.close()

    try:
        asyncio.run(main())
    except KeyboardInterrupt:
        pass
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    import time

    scenario = _load_scenario_arg(args.scenario)
    scene = scenario.scene
    state = scenario.initial
    start = time.perf_counter()
    state, slipped = advance(state, scene, args.force, args.ticks)
    elapsed = time.perf_counter() - start
    rate = args.ticks / elapsed if elapsed > 0 else math.inf
    regime = "sliding" if slipped else "stuck"
    print(
        f"{args.ticks} ticks in {elapsed:.3f} s ({rate:,.0f} ticks/s, {regime})"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frictionlab",
        description="Deterministic stick-slip friction simulator and tools",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a scenario and write a trajectory CSV")
    p.add_argument("--scenario", help="scenario JSON file (defaults when omitted)")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--script", help="device script JSON: array of [t, coord]")
    group.add_argument("--force", type=float, help="constant applied force in N")
    p.add_argument("--duration", type=float, help="simulated seconds")
    p.add_argument("--out", help="trajectory CSV path")
    p.add_argument("--plot", action="store_true", help="render a PNG beside the CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("breakaway", help="sweep a parameter and measure breakaway")
    p.add_argument("--sweep", required=True, help="mu_s=a:b:n or angle_deg=a:b:n")
    p.add_argument("--scenario", help="base scenario JSON file")
    p.add_argument("--out", help="sweep CSV path")
    p.add_argument("--plot", action="store_true", help="render a PNG beside the CSV")
    p.set_defaults(func=cmd_breakaway)

    p = sub.add_parser("pulley", help="solve the incline-and-hanging-mass problem")
    p.add_argument("--m1", type=float, required=True)
    p.add_argument("--m2", type=float, required=True)
    p.add_argument("--angle-deg", type=float, required=True, dest="angle_deg")
    p.add_argument("--mu-s", type=float, required=True, dest="mu_s")
    p.add_argument("--mu-k", type=float, required=True, dest="mu_k")
    p.add_argument("--g", type=float, default=9.80665)
    p.set_defaults(func=cmd_pulley)

    p = sub.add_parser("gain", help="normalized gains from a scores CSV")
    p.add_argument("--scores", required=True, help="CSV: student_id,test2,test3")
    p.set_defaults(func=cmd_gain)

    p = sub.add_parser("ttest", help="Welch t-test from a grouped scores CSV")
    p.add_argument("--scores", required=True, help="CSV: group,score with group A|B")
    p.set_defaults(func=cmd_ttest)

    p = sub.add_parser("serve", help="stream simulation state over websockets")
    p.add_argument("--scenario", help="scenario JSON file")
    p.add_argument("--addr", default="127.0.0.1:8787", help="host:port")
    p.add_argument("--record-dir", default=None, help="directory for recordings")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("bench", help="time the physics kernel")
    p.add_argument("--ticks", type=int, default=1_000_000)
    p.add_argument("--force", type=float, default=0.0)
    p.add_argument("--scenario", help="scenario JSON file")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (session.ParseError, session.ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
