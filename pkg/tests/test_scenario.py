import numpy as np
import pytest

from crimewave import bundled_scenario_path, load_scenario, run_scenario_in_memory
from crimewave.errors import ScenarioParseError, ScenarioValidationError
from crimewave.scenario import (
    apply_overrides,
    build_control,
    build_grid,
    build_initial_state,
    build_params,
    bundled_scenario_names,
    parse_scenario_text,
    scenario_from_dict,
)

MINIMAL = """
name = tiny
grid.nx = 8
grid.ny = 8
model.m = 1.0
model.chi = 2.0
ic.kind = constant
ic.u0 = 0.5
ic.v0 = 2.0
t_end = 0.01
"""


def test_parse_values_and_comments():
    data = parse_scenario_text(
        "# header\nname = run1  # trailing\nt_end = 2.5\nflags = [1, 2.5, 3]\nok = true\n"
    )
    assert data == {"name": "run1", "t_end": 2.5, "flags": [1, 2.5, 3], "ok": True}


def test_parse_error_carries_line_number():
    with pytest.raises(ScenarioParseError, match="line 2"):
        parse_scenario_text("name = x\nbroken line\n")


def test_duplicate_key_rejected():
    with pytest.raises(ScenarioParseError, match="duplicate"):
        parse_scenario_text("a = 1\na = 2\n")


def test_minimal_scenario_builds():
    s = scenario_from_dict(parse_scenario_text(MINIMAL))
    assert s.name == "tiny"
    assert s.nx == 8 and s.x_min == -3.0
    grid = build_grid(s)
    params = build_params(s)
    ctrl = build_control(s)
    state = build_initial_state(s, grid)
    assert params.m == 1.0
    assert ctrl.cfl_safety == 0.4
    assert float(state.u.values[0]) == 0.5


def test_unknown_key_rejected():
    with pytest.raises(ScenarioValidationError, match="unknown scenario keys: modle.m"):
        scenario_from_dict({"modle.m": 1.0})


def test_missing_required_key_named():
    with pytest.raises(ScenarioValidationError, match="model.chi"):
        scenario_from_dict(
            {"name": "x", "grid.nx": 8, "grid.ny": 8, "model.m": 1.0, "t_end": 1.0}
        )


def test_small_m_rejected():
    data = parse_scenario_text(MINIMAL)
    data["model.m"] = 0.5
    with pytest.raises(ScenarioValidationError, match="model.m"):
        scenario_from_dict(data)


def test_bad_output_times_rejected():
    data = parse_scenario_text(MINIMAL)
    data["output_times"] = [0.5]
    with pytest.raises(ScenarioValidationError, match="output_times"):
        scenario_from_dict(data)


def test_apply_overrides_rebuilds():
    s = scenario_from_dict(parse_scenario_text(MINIMAL))
    s2 = apply_overrides(s, {"grid.nx": "16", "control.cfl_safety": "0.5"})
    assert s2.nx == 16
    assert build_control(s2).cfl_safety == 0.5


def test_bundled_scenarios_load_and_match_parameters():
    names = bundled_scenario_names()
    assert {
        "fig1_m1_chi10",
        "fig2_m3_chi10",
        "fig3_m1_chi5",
        "fig3_m3_chi5",
        "decoupled_decay",
    } <= set(names)
    fig1 = load_scenario(bundled_scenario_path("fig1_m1_chi10"))
    assert (fig1.m, fig1.chi, fig1.ic_sigma) == (1.0, 10.0, 0.25)
    assert fig1.output_times == (0.0, 0.95)
    fig2 = load_scenario(bundled_scenario_path("fig2_m3_chi10"))
    assert (fig2.m, fig2.chi, fig2.ic_sigma) == (3.0, 10.0, 0.25)
    assert fig2.output_times == (0.95, 1.2, 1.95, 9.95)
    fig3 = load_scenario(bundled_scenario_path("fig3_m1_chi5"))
    assert (fig3.m, fig3.chi, fig3.ic_sigma) == (1.0, 5.0, 0.16)


def test_run_scenario_in_memory_tiny():
    s = scenario_from_dict(parse_scenario_text(MINIMAL))
    traj = run_scenario_in_memory(s)
    assert traj.final_status.value == "reached_t"
    # constant ic at the reaction fixed point stays put
    assert np.abs(traj.final_state.u.values - 0.5).max() < 1e-12


def test_file_initial_data_round_trip(tmp_path):
    from crimewave import gaussian_ic, make_grid, write_snapshot

    g = make_grid(-3, 3, -3, 3, 8, 8)
    bump = gaussian_ic(g, 0.5)
    write_snapshot(bump, tmp_path / "u0.cwf", name="u")
    write_snapshot(bump, tmp_path / "v0.cwf", name="v")
    data = parse_scenario_text(MINIMAL)
    data.pop("ic.u0")
    data.pop("ic.v0")
    data["ic.kind"] = "file"
    data["ic.u_path"] = str(tmp_path / "u0.cwf")
    data["ic.v_path"] = str(tmp_path / "v0.cwf")
    s = scenario_from_dict(data)
    state = build_initial_state(s, build_grid(s))
    assert np.array_equal(state.u.values, bump.values)


def test_refinement_classifier_diffusion_only_is_bounded():
    # chi tiny and pure decay: peaks fall and converge under refinement
    data = parse_scenario_text(MINIMAL)
    data["ic.kind"] = "gaussian"
    data.pop("ic.u0")
    data.pop("ic.v0")
    data["ic.sigma"] = 0.5
    data["model.chi"] = 1e-9
    data["t_end"] = 0.1
    s = scenario_from_dict(data)
    from crimewave import refinement_blowup_classifier, ClassificationLabel

    result = refinement_blowup_classifier(s, [(16, 16), (32, 32), (64, 64)])
    assert result.label is ClassificationLabel.BOUNDED
    # peak is the (decaying) sampled initial bump, converging under refinement
    assert abs(result.peaks[2] - result.peaks[1]) <= 0.05 * result.peaks[2]


def test_refinement_classifier_needs_three_doubling_grids():
    s = scenario_from_dict(parse_scenario_text(MINIMAL))
    from crimewave import refinement_blowup_classifier
    from crimewave.errors import InvalidParameterError

    with pytest.raises(InvalidParameterError):
        refinement_blowup_classifier(s, [(8, 8), (16, 16)])
    with pytest.raises(InvalidParameterError):
        refinement_blowup_classifier(s, [(8, 8), (12, 12), (16, 16)])
