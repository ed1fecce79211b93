"""Secondary acceptance: render panels and monitors from real run directories.

Generates small-scale runs of the three bundled figure scenarios with the
simulator package (skipped if it is not installed), then renders a panel
image per run plus monitor plots, checking panel counts against snapshot
counts.
"""
import json
from pathlib import Path

import pytest

crimewave = pytest.importorskip("crimewave")

from crimewave_plots import FigureSpec, render_heatmap_grid, render_monitors  # noqa: E402


@pytest.fixture(scope="module")
def run_dirs(tmp_path_factory):
    from crimewave.runio import run_scenario
    from crimewave.scenario import apply_overrides, bundled_scenario_path, load_scenario

    base = tmp_path_factory.mktemp("runs")
    dirs = {}
    small = {
        "grid.nx": 32,
        "grid.ny": 32,
        "diagnostics.stride": 1,
    }
    for name, extra in (
        ("fig1_m1_chi10", {"t_end": 0.3, "output_times": "[0.0, 0.15, 0.3]"}),
        ("fig2_m3_chi10", {"t_end": 0.3, "output_times": "[0.0, 0.1, 0.2, 0.3]",
                           "control.equilibrium_tol": 0.0}),
        ("fig3_m1_chi5", {"t_end": 0.2, "output_times": "[0.0, 0.1, 0.2]"}),
    ):
        scenario = load_scenario(bundled_scenario_path(name))
        scenario = apply_overrides(scenario, {**small, **extra})
        out = base / name
        run_scenario(scenario, out)
        dirs[name] = out
    return dirs


def test_render_all_figure_run_directories(run_dirs, tmp_path):
    for name, run_dir in run_dirs.items():
        u_snaps = sorted(Path(run_dir).glob("u_t*.cwf"))
        assert u_snaps, f"{name}: no snapshots written"
        spec = FigureSpec(
            panels=tuple((str(p), "") for p in u_snaps),
            output=str(tmp_path / f"{name}.png"),
        )
        result = render_heatmap_grid(spec)
        assert result.n_panels == len(u_snaps)
        assert Path(result.output).exists()


def test_render_monitsince_from_run_directories(run_dirs, tmp_path):
    for name, run_dir in run_dirs.items():
        out = tmp_path / f"{name}_monitors.png"
        result = render_monitors(
            Path(run_dir) / "diagnostics.csv",
            ["linf_u", "mass_u", "min_v"],
            out,
            log_scale=name.startswith("fig1"),
        )
        assert out.exists()
        assert result.n_panels == 3


def test_cli_round_trip_from_run_directory(run_dirs, tmp_path):
    from crimewave_plots.cli import main

    run_dir = run_dirs["fig2_m3_chi10"]
    u_snaps = sorted(Path(run_dir).glob("u_t*.cwf"))
    spec_path = tmp_path / "fig2.json"
    spec_path.write_text(
        json.dumps(
            {
                "panels": [[str(p), ""] for p in u_snaps],
                "output": str(tmp_path / "fig2_cli.png"),
                "shared_scale": True,
            }
        )
    )
    assert main(["figure", "--spec", str(spec_path)]) == 0
    assert (tmp_path / "fig2_cli.png").exists()
