from crimewave.verification import (
    REL_EXPECTED_ADVECTION,
    REL_EXPECTED_DIFFUSION,
    REL_EXPECTED_TEMPORAL,
    diffusion_convergence,
    full_scheme_convergence,
    temporal_order,
)


def test_diffusion_path_is_second_order():
    res = diffusion_convergence(sizes=(16, 32, 64))
    lo, hi = REL_EXPECTED_DIFFUSION
    assert all(lo <= r <= hi for r in res.ratios_u), res.ratios_u
    assert all(lo <= r <= hi for r in res.ratios_v), res.ratios_v


def test_full_scheme_at_least_first_order():
    res = full_scheme_convergence(sizes=(16, 32, 64))
    assert all(r >= REL_EXPECTED_ADVECTION for r in res.ratios_u), res.ratios_u


def test_temporal_order_about_two():
    res = temporal_order()
    lo, hi = REL_EXPECTED_TEMPORAL
    assert all(lo <= r <= hi for r in res.ratios), res.ratios


def test_cli_convergence_command(capsys):
    from crimewave.cli import main

    code = main(["convergence", "--test", "temporal"])
    captured = capsys.readouterr()
    assert code == 0
    assert "PASS" in captured.out
