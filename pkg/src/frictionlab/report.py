"""Figure rendering for the CLI report paths.

Renders trajectory and sweep results to image files next to the CSV
output. Uses the Agg backend so headless runs never need a display.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .physics import SceneParams
from .session import TrajectorySample


def trajectory_figure(
    samples: list[TrajectorySample], scene: SceneParams, path: str | Path
) -> Path:
    """Three stacked panels: position, velocity and the force channels."""
    t = [r.t for r in samples]
    fig, (ax_s, ax_v, ax_f) = plt.subplots(3, 1, sharex=True, figsize=(8, 7))

    ax_s.plot(t, [r.s for r in samples], color="tab:blue")
    for bound in scene.bounds:
        ax_s.axhline(bound, color="gray", linewidth=0.8, linestyle="--")
    ax_s.set_ylabel("position [m]")

    ax_v.plot(t, [r.v for r in samples], color="tab:orange")
    ax_v.axhline(0.0, color="gray", linewidth=0.8)
    ax_v.set_ylabel("velocity [m/s]")

    ax_f.plot(t, [r.applied for r in samples], label="applied")
    ax_f.plot(t, [r.friction for r in samples], label="friction")
    ax_f.plot(t, [r.net for r in samples], label="net")
    ax_f.set_ylabel("force [N]")
    ax_f.set_xlabel("time [s]")
    ax_f.legend(loc="best", fontsize=8)

    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def sweep_figure(
    rows: list[tuple[float, float, float, float]],
    param_name: str,
    path: str | Path,
) -> Path:
    """Measured vs analytic breakaway force across a parameter sweep."""
    values = [r[0] for r in rows]
    fig, (ax, ax_err) = plt.subplots(
        2, 1, sharex=True, figsize=(7, 5), height_ratios=[3, 1]
    )
    ax.plot(values, [r[2] for r in rows], "-", color="gray", label="analytic")
    ax.plot(values, [r[1] for r in rows], "o", color="tab:red", label="measured",
            markersize=4)
    ax.set_ylabel("breakaway force [N]")
    ax.legend(loc="best", fontsize=8)

    ax_err.plot(values, [r[3] for r in rows], ".-", color="tab:purple")
    ax_err.set_ylabel("rel. error")
    ax_err.set_xlabel(param_name)

    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out
