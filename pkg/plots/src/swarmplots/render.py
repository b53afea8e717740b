"""Render static figures from swarmsafe output files.

Pure renderer: reads records.jsonl / summary.csv / feasibility_map.csv and
never recomputes simulation quantities. The records header carries the
resolved scenario config, which supplies the safety radius for the zone
circles. Styling is fixed so identical inputs produce identical images.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.patches import Circle

SCHEMA_VERSION = 1

FIGURE_KINDS = ("trajectories", "feasibility-heatmap", "metrics-timeseries")

STYLE = {
    "executed": dict(color="tab:blue", lw=1.4),
    "nominal": dict(color="tab:red", ls="-.", lw=0.9, alpha=0.8),
    "link": dict(color="0.4", ls="--", lw=1.0),
    "zone_idle": dict(edgecolor="tab:blue", facecolor="none", lw=1.0, alpha=0.8),
    "zone_active": dict(edgecolor="tab:orange", facecolor="none", lw=1.0, alpha=0.9),
    "zone_responsible": dict(edgecolor="tab:orange", facecolor="none", lw=2.6),
    "target": dict(marker="s", color="black", ms=6, ls="none"),
}


class RenderError(ValueError):
    """Bad or unusable input files."""


@dataclass(frozen=True)
class PlotSpec:
    figure: str
    out_path: Path
    records_path: Path | None = None
    summary_path: Path | None = None
    feasibility_path: Path | None = None
    dpi: int = 150

    def __post_init__(self):
        if self.figure not in FIGURE_KINDS:
            raise RenderError(f"unknown figure type {self.figure!r}; expected one of {FIGURE_KINDS}")


def load_records(path) -> tuple[dict, list[dict]]:
    """Read a records.jsonl stream: header line plus step records."""
    with open(path) as f:
        lines = [line for line in f if line.strip()]
    if not lines:
        raise RenderError(f"{path}: empty records file")
    header = json.loads(lines[0])
    if header.get("kind") != "header":
        raise RenderError(f"{path}: first line is not a header record")
    found = header.get("schema_version")
    if found != SCHEMA_VERSION:
        raise RenderError(
            f"{path}: schema_version mismatch: expected {SCHEMA_VERSION}, found {found}"
        )
    steps = [json.loads(line) for line in lines[1:]]
    if not steps:
        raise RenderError(f"{path}: no step records after the header")
    return header, steps


def load_summary(path) -> dict[str, np.ndarray]:
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        rows = list(reader)
    if not rows:
        raise RenderError(f"{path}: empty summary file")
    cols: dict[str, list[float]] = {name: [] for name in rows[0]}
    for row in rows:
        for name, val in row.items():
            cols[name].append(float(val) if val != "" else math.nan)
    return {name: np.asarray(vals) for name, vals in cols.items()}


def load_feasibility(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Parse the gamma sweep CSV into (gamma1 axis, gamma2 axis, grid)."""
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        rows = list(reader)
    if not rows:
        raise RenderError(f"{path}: empty feasibility file")
    try:
        g1 = np.array([float(r["gamma1"]) for r in rows])
        g2 = np.array([float(r["gamma2"]) for r in rows])
        frac = np.array([float(r["feasible_fraction"]) for r in rows])
    except (KeyError, TypeError) as e:
        raise RenderError(f"{path}: expected gamma1,gamma2,feasible_fraction columns") from e
    g1_axis = np.unique(g1)
    g2_axis = np.unique(g2)
    if len(g1_axis) * len(g2_axis) != len(rows):
        raise RenderError(f"{path}: rows do not form a full grid")
    grid = np.full((len(g1_axis), len(g2_axis)), np.nan)
    for a, b, f_ in zip(g1, g2, frac):
        grid[np.searchsorted(g1_axis, a), np.searchsorted(g2_axis, b)] = f_
    return g1_axis, g2_axis, grid


def _snapshot_index(steps: list[dict]) -> int:
    """Deterministic snapshot for constraint links: the tick of minimum
    pairwise distance (ties to the earliest)."""
    best, best_idx = math.inf, 0
    for k, s in enumerate(steps):
        d = s.get("min_dist")
        if d is not None and d < best:
            best, best_idx = d, k
    return best_idx


def trajectories_figure(records_path) -> plt.Figure:
    header, steps = load_records(records_path)
    config = header["config"]
    r_s = float(config["safety"]["r_s"])
    agents_cfg = config["scenario"]["agents"]
    n = len(agents_cfg)

    fig, ax = plt.subplots(figsize=(6.4, 6.4))
    paths = {a["id"]: [] for a in steps[0]["agents"]}
    for s in steps:
        for a in s["agents"]:
            paths[a["id"]].append(a["p"])

    for spec in agents_cfg:
        ax.plot([spec["p"][0], spec["target"][0]], [spec["p"][1], spec["target"][1]],
                gid="nominal-path", **STYLE["nominal"])
        ax.plot([spec["target"][0]], [spec["target"][1]], gid="target",
                **STYLE["target"])

    for agent_id in sorted(paths):
        arr = np.asarray(paths[agent_id])
        ax.plot(arr[:, 0], arr[:, 1], gid="trajectory", **STYLE["executed"])

    snap = steps[_snapshot_index(steps)]
    snap_pos = {a["id"]: a["p"] for a in snap["agents"]}
    active = {tuple(p) for p in snap["active_pairs"]}
    for (i, j) in sorted(active):
        pi, pj = snap_pos[i], snap_pos[j]
        ax.plot([pi[0], pj[0]], [pi[1], pj[1]], gid="active-link", **STYLE["link"])
    enforcers = {e[0] for e in snap["edges"]} | {e[0] for e in snap["forced_edges"]}
    engaged = {i for pair in active for i in pair}
    for a in snap["agents"]:
        if a["id"] in enforcers:
            style = STYLE["zone_responsible"]
        elif a["id"] in engaged:
            style = STYLE["zone_active"]
        else:
            style = STYLE["zone_idle"]
        ax.add_patch(Circle(a["p"], r_s, gid="safety-zone", **style))

    half = float(config["scenario"].get("workspace", 6.0)) / 2
    ax.set_xlim(-half - 0.5, half + 0.5)
    ax.set_ylim(-half - 0.5, half + 0.5)
    ax.set_aspect("equal")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_title(f"{config.get('name', 'scenario')}: {n} agents, "
                 f"snapshot t={snap['t']:.2f} s")
    fig.tight_layout()
    return fig


def feasibility_heatmap_figure(feasibility_path) -> plt.Figure:
    g1, g2, grid = load_feasibility(feasibility_path)
    fig, ax = plt.subplots(figsize=(6.4, 5.2))
    mesh = ax.pcolormesh(g2, g1, grid, shading="nearest", cmap="viridis",
                         vmin=0.0, vmax=1.0)
    mesh.set_gid("feasibility-cells")
    fig.colorbar(mesh, ax=ax, label="feasible fraction")
    ax.set_xlabel("gamma2 [1/s]")
    ax.set_ylabel("gamma1 [1/s]")
    ax.set_title("Single-constraint filter feasibility over the gain grid")
    fig.tight_layout()
    return fig


def metrics_timeseries_figure(summary_path) -> plt.Figure:
    cols = load_summary(summary_path)
    fig, axes = plt.subplots(3, 1, figsize=(7.2, 7.0), sharex=True)
    axes[0].plot(cols["t"], cols["min_dist"], color="tab:blue", gid="min-dist")
    axes[0].set_ylabel("min distance [m]")
    axes[1].plot(cols["t"], cols["n_active_pairs"], color="tab:orange",
                 gid="active-pairs", label="active pairs")
    axes[1].plot(cols["t"], cols["n_edges"], color="tab:green", gid="edges",
                 label="responsibility edges")
    axes[1].set_ylabel("count")
    axes[1].legend(loc="upper right")
    axes[2].plot(cols["t"], cols["total_deviation"], color="tab:red",
                 gid="deviation")
    axes[2].set_ylabel("total deviation [(m/s^2)^2]")
    axes[2].set_xlabel("t [s]")
    fig.tight_layout()
    return fig


def render(spec: PlotSpec) -> Path:
    """Render the requested figure to spec.out_path and return the path."""
    if spec.figure == "trajectories":
        if spec.records_path is None:
            raise RenderError("trajectories figure needs --records")
        fig = trajectories_figure(spec.records_path)
    elif spec.figure == "feasibility-heatmap":
        if spec.feasibility_path is None:
            raise RenderError("feasibility-heatmap figure needs --feasibility")
        fig = feasibility_heatmap_figure(spec.feasibility_path)
    else:
        if spec.summary_path is None:
            raise RenderError("metrics-timeseries figure needs --summary")
        fig = metrics_timeseries_figure(spec.summary_path)
    out = Path(spec.out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=spec.dpi, metadata={"Software": "swarmplots"})
    plt.close(fig)
    return out
