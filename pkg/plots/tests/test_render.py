"""Renderer tests. Simulation outputs are produced by invoking the swarmsafe
CLI in a subprocess: the plots package consumes only the file formats."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from swarmplots.cli import main as plots_main
from swarmplots.render import (
    PlotSpec,
    RenderError,
    feasibility_heatmap_figure,
    render,
    trajectories_figure,
)

REPO_ROOT = Path(__file__).resolve().parent.parent.parent
THREE_AGENT_CONFIG = REPO_ROOT / "configs" / "three_agents.yaml"

FEAS_CONFIG = """\
schema_version: 1
name: feas-mini
scenario:
  dim: 2
  dt: 0.01
  t_end: 0.5
  seed: 2
  agents:
    - {p: [0.0, 0.0], v: [0.5, 0.0], target: [2.0, 0.0]}
feasibility:
  gamma1: {start: 1.0, stop: 5.0, count: 3}
  gamma2: {start: 1.0, stop: 8.0, count: 4}
  samples: 20
"""


def run_swarmsafe(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "swarmsafe.cli", *args],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def sim_outputs(tmp_path_factory):
    out = tmp_path_factory.mktemp("sim") / "run"
    run_swarmsafe("--config", str(THREE_AGENT_CONFIG), "--out", str(out))
    return out


@pytest.fixture(scope="session")
def feasibility_outputs(tmp_path_factory):
    base = tmp_path_factory.mktemp("feas")
    cfg = base / "feas.yaml"
    cfg.write_text(FEAS_CONFIG)
    out = base / "run"
    run_swarmsafe("--config", str(cfg), "--out", str(out), "--mode", "feasibility-map")
    return out


def count_gid(fig, gid):
    n = 0
    for ax in fig.axes:
        for artist in ax.lines + ax.patches + list(ax.collections):
            if artist.get_gid() == gid:
                n += 1
    return n


def test_trajectories_trace_count_matches_agents(sim_outputs):
    fig = trajectories_figure(sim_outputs / "records.jsonl")
    assert count_gid(fig, "trajectory") == 3
    assert count_gid(fig, "nominal-path") == 3
    assert count_gid(fig, "safety-zone") == 3


def test_heatmap_cell_count_matches_rows(feasibility_outputs):
    csv_path = feasibility_outputs / "feasibility_map.csv"
    n_rows = len(csv_path.read_text().strip().splitlines()) - 1
    assert n_rows == 12
    fig = feasibility_heatmap_figure(csv_path)
    mesh = [c for ax in fig.axes for c in ax.collections if c.get_gid() == "feasibility-cells"]
    assert len(mesh) == 1
    assert mesh[0].get_array().size == n_rows


def test_render_writes_all_figure_kinds(sim_outputs, feasibility_outputs, tmp_path):
    t = render(PlotSpec(figure="trajectories", out_path=tmp_path / "traj.png",
                        records_path=sim_outputs / "records.jsonl"))
    h = render(PlotSpec(figure="feasibility-heatmap", out_path=tmp_path / "heat.png",
                        feasibility_path=feasibility_outputs / "feasibility_map.csv"))
    m = render(PlotSpec(figure="metrics-timeseries", out_path=tmp_path / "metrics.png",
                        summary_path=sim_outputs / "summary.csv"))
    for p in (t, h, m):
        assert p.exists() and p.stat().st_size > 0


def test_rendering_is_deterministic(sim_outputs, tmp_path):
    a = render(PlotSpec(figure="trajectories", out_path=tmp_path / "a.png",
                        records_path=sim_outputs / "records.jsonl"))
    b = render(PlotSpec(figure="trajectories", out_path=tmp_path / "b.png",
                        records_path=sim_outputs / "records.jsonl"))
    assert a.read_bytes() == b.read_bytes()


def test_empty_records_error_and_no_image(tmp_path):
    empty = tmp_path / "records.jsonl"
    empty.write_text("")
    out = tmp_path / "img.png"
    with pytest.raises(RenderError, match="empty"):
        render(PlotSpec(figure="trajectories", out_path=out, records_path=empty))
    assert not out.exists()


def test_schema_mismatch_names_versions(tmp_path):
    bad = tmp_path / "records.jsonl"
    bad.write_text(json.dumps({"kind": "header", "schema_version": 99}) + "\n")
    with pytest.raises(RenderError, match="expected 1, found 99"):
        render(PlotSpec(figure="trajectories", out_path=tmp_path / "x.png",
                        records_path=bad))


def test_missing_input_for_figure(tmp_path):
    with pytest.raises(RenderError, match="--records"):
        render(PlotSpec(figure="trajectories", out_path=tmp_path / "x.png"))
    with pytest.raises(RenderError):
        PlotSpec(figure="not-a-figure", out_path=tmp_path / "x.png")


def test_cli_renders_and_reports_bad_input(sim_outputs, tmp_path):
    out = tmp_path / "cli.png"
    code = plots_main(["--figure", "trajectories",
                       "--records", str(sim_outputs / "records.jsonl"),
                       "--out", str(out)])
    assert code == 0
    assert out.exists()
    code = plots_main(["--figure", "trajectories",
                       "--records", str(tmp_path / "missing.jsonl"),
                       "--out", str(tmp_path / "y.png")])
    assert code == 2


def test_acceptance_secondary(sim_outputs, feasibility_outputs, tmp_path):
    # shipped-scenario outputs render without error; counts match inputs
    fig = trajectories_figure(sim_outputs / "records.jsonl")
    traces = count_gid(fig, "trajectory")
    csv_path = feasibility_outputs / "feasibility_map.csv"
    n_rows = len(csv_path.read_text().strip().splitlines()) - 1
    hfig = feasibility_heatmap_figure(csv_path)
    cells = [c for ax in hfig.axes for c in ax.collections
             if c.get_gid() == "feasibility-cells"][0].get_array().size
    ok = traces == 3 and cells == n_rows
    print(f"ACCEPTANCE secondary-plots: {'PASS' if ok else 'FAIL'} "
          f"(traces={traces}, heatmap cells={cells}/{n_rows})")
    assert ok
