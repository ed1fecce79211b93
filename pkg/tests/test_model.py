import numpy as np
import pytest

from crimewave import (
    ModelParams,
    SourceTerm,
    cell_integral,
    eval_source,
    gaussian_ic,
    homogeneous_steady_state,
    initial_state,
    make_grid,
)
from crimewave.errors import (
    InvalidGridPairError,
    InvalidParameterError,
    InvalidSigmaError,
    NegativeSourceError,
    NoSteadyStateError,
)
from crimewave.model import SimState, V_INITIAL_FLOOR


def test_gaussian_peak_near_origin_cell():
    g = make_grid(-3, 3, -3, 3, 256, 256)
    f = gaussian_ic(g, 0.25)
    peak_continuous = 1.0 / (0.25 * np.sqrt(2.0 * np.pi))  # 1.5957691216057308
    assert float(f.values.max()) == pytest.approx(peak_continuous, rel=0.005)


def test_gaussian_mass_closed_form():
    g = make_grid(-3, 3, -3, 3, 256, 256)
    f = gaussian_ic(g, 0.25)
    assert cell_integral(f) == pytest.approx(0.6266570686577501, abs=1e-6)


def test_gaussian_sigma_016_peak():
    # the sharper bump sits half a cell off the nearest center, so the
    # sampled maximum lags the analytic peak by a little more
    g = make_grid(-3, 3, -3, 3, 256, 256)
    f = gaussian_ic(g, 0.16)
    assert float(f.values.max()) == pytest.approx(2.4933892525089547, rel=0.01)


def test_gaussian_rejects_bad_sigma():
    g = make_grid(-3, 3, -3, 3, 8, 8)
    with pytest.raises(InvalidSigmaError):
        gaussian_ic(g, 0.0)


def test_gaussian_symmetries_exact():
    g = make_grid(-3, 3, -3, 3, 32, 32)
    a = gaussian_ic(g, 0.25).as2d()
    assert np.array_equal(a, a.T)
    assert np.array_equal(a, a[::-1, :])
    assert np.array_equal(a, a[:, ::-1])


@pytest.mark.parametrize(
    "b1,b2,expected",
    [(1.0, 1.0, (0.5, 2.0)), (0.0, 1.0, (0.0, 1.0)), (2.0, 2.0, (0.5, 4.0))],
)
def test_homogeneous_steady_state(b1, b2, expected):
    params = ModelParams(m=3.0, chi=10.0, b1=SourceTerm.const(b1), b2=SourceTerm.const(b2))
    u_star, v_star = homogeneous_steady_state(params)
    assert (u_star, v_star) == pytest.approx(expected)
    # residuals of the defining equations
    assert abs(-u_star * v_star + b1) < 1e-14
    assert abs(u_star * v_star - v_star + b2) < 1e-14


def test_steady_state_requires_some_source():
    params = ModelParams(m=2.0, chi=1.0, b1=SourceTerm.const(0.0), b2=SourceTerm.const(0.0))
    with pytest.raises(NoSteadyStateError):
        homogeneous_steady_state(params)


def test_eval_source_constant():
    g = make_grid(-3, 3, -3, 3, 8, 8)
    f = eval_source(SourceTerm.const(1.0), g, 5.0)
    assert np.all(f.values == 1.0)
    zero = eval_source(SourceTerm.const(0.0), g, 0.0)
    assert np.all(zero.values == 0.0)


def test_eval_source_time_space():
    g = make_grid(-3, 3, -3, 3, 8, 8)
    s = SourceTerm.time_space(lambda x, y, t: (x + 3.0) * t)
    f = eval_source(s, g, 2.0)
    assert float(f.values.min()) >= 0.0
    assert f.as2d()[0, -1] == pytest.approx((g.xs[-1] + 3.0) * 2.0)


def test_eval_source_rejects_negative_samples():
    g = make_grid(-3, 3, -3, 3, 8, 8)
    s = SourceTerm.time_space(lambda x, y, t: -np.ones_like(x))
    with pytest.raises(NegativeSourceError):
        eval_source(s, g, 0.0)


def test_source_term_needs_exactly_one_variant():
    with pytest.raises(NegativeSourceError):
        SourceTerm()
    with pytest.raises(NegativeSourceError):
        SourceTerm.const(-1.0)


def test_model_params_validation():
    with pytest.raises(InvalidParameterError):
        ModelParams(m=0.5, chi=1.0)
    with pytest.raises(InvalidParameterError):
        ModelParams(m=1.0, chi=0.0)
    with pytest.raises(InvalidParameterError):
        ModelParams(m=1.0, chi=1.0, eps=-1.0)


def test_initial_state_clamps_v():
    g = make_grid(-3, 3, -3, 3, 64, 64)
    bump = gaussian_ic(g, 0.25)
    state = initial_state(g, bump, bump)
    assert state.v.values.min() >= V_INITIAL_FLOOR
    assert state.u.values.min() >= 0.0


def test_sim_state_rejects_mismatched_grids():
    g1 = make_grid(-3, 3, -3, 3, 8, 8)
    g2 = make_grid(-3, 3, -3, 3, 16, 16)
    with pytest.raises(InvalidGridPairError):
        SimState(u=gaussian_ic(g1, 0.25), v=gaussian_ic(g2, 0.25))
