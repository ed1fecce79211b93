"""Residuals of the integral (weak) identities along a stored trajectory.

A trajectory that solves the scheme should satisfy the two weak identities
obtained by pairing each equation with a smooth test function that has zero
normal derivative on the boundary and compact support in time.  The
nonlinear diffusion term is paired in flux form, with the scheme's own face
fluxes against face differences of the test function; summation by parts
then makes the spatial pairing exact, so the residual measures only the
time quadrature over snapshots, O(h^2 + dt_snap^2) on smooth runs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientRowsError, UnsupportedTestFunctionError
from .grid import Grid
from .model import ModelParams, _source_array
from .operators import _chemo_fluxes, _coeff_pow


@dataclass(frozen=True)
class CosineBumpTestFunction:
    """amplitude * cos(jx pi (x-x0)/Lx) * cos(jy pi (y-y0)/Ly) * bump(t).

    The cosine products have zero normal derivative on the rectangle for
    any integer modes; bump(t) = sin^2(pi (t-a)/(b-a)) on [a, b] and zero
    outside, so the function is compactly supported in time.
    """

    amplitude: float
    jx: int
    jy: int
    t_lo: float
    t_hi: float
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    label: str = ""

    def _spatial(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        lx = self.x_max - self.x_min
        ly = self.y_max - self.y_min
        return np.cos(self.jx * np.pi * (x - self.x_min) / lx) * np.cos(
            self.jy * np.pi * (y - self.y_min) / ly
        )

    def _bump(self, t: float) -> float:
        if t <= self.t_lo or t >= self.t_hi:
            return 0.0
        s = (t - self.t_lo) / (self.t_hi - self.t_lo)
        return math.sin(math.pi * s) ** 2

    def _bump_dt(self, t: float) -> float:
        if t <= self.t_lo or t >= self.t_hi:
            return 0.0
        width = self.t_hi - self.t_lo
        s = (t - self.t_lo) / width
        return math.pi / width * math.sin(2.0 * math.pi * s)

    def value(self, x: np.ndarray, y: np.ndarray, t: float) -> np.ndarray:
        return self.amplitude * self._bump(t) * self._spatial(x, y)

    def dt(self, x: np.ndarray, y: np.ndarray, t: float) -> np.ndarray:
        return self.amplitude * self._bump_dt(t) * self._spatial(x, y)

    def dx(self, x: np.ndarray, y: np.ndarray, t: float) -> np.ndarray:
        lx = self.x_max - self.x_min
        ly = self.y_max - self.y_min
        return (
            -self.amplitude
            * self._bump(t)
            * (self.jx * np.pi / lx)
            * np.sin(self.jx * np.pi * (x - self.x_min) / lx)
            * np.cos(self.jy * np.pi * (y - self.y_min) / ly)
        )

    def dy(self, x: np.ndarray, y: np.ndarray, t: float) -> np.ndarray:
        lx = self.x_max - self.x_min
        ly = self.y_max - self.y_min
        return (
            -self.amplitude
            * self._bump(t)
            * (self.jy * np.pi / ly)
            * np.cos(self.jx * np.pi * (x - self.x_min) / lx)
            * np.sin(self.jy * np.pi * (y - self.y_min) / ly)
        )


def seeded_test_functions(
    grid: Grid, t_end: float, count: int = 5, seed: int = 2308
) -> list[CosineBumpTestFunction]:
    """Reproducible family of test functions supported inside (0, t_end)."""
    rng = np.random.default_rng(seed)
    fns = []
    for k in range(count):
        jx = int(rng.integers(0, 4))
        jy = int(rng.integers(0, 4))
        if jx == 0 and jy == 0 and k > 0:
            jx = 1
        amp = float(rng.uniform(0.5, 1.5))
        a = float(rng.uniform(0.05, 0.25)) * t_end
        b = float(rng.uniform(0.75, 0.95)) * t_end
        fns.append(
            CosineBumpTestFunction(
                amplitude=amp,
                jx=jx,
                jy=jy,
                t_lo=a,
                t_hi=b,
                x_min=grid.x_min,
                x_max=grid.x_max,
                y_min=grid.y_min,
                y_max=grid.y_max,
                label=f"seed{seed}-{k}(jx={jx},jy={jy})",
            )
        )
    return fns


@dataclass(frozen=True)
class WeakResidualReport:
    residual_u: float
    residual_v: float
    test_function_id: str
    n_snapshots: int
    grid_shape: tuple[int, int]


def _check_neumann(test_fn, grid: Grid, times: np.ndarray) -> None:
    ys = grid.ys
    xs = grid.xs
    scale = 1e-10 * (1.0 + abs(getattr(test_fn, "amplitude", 1.0)))
    for t in times[:: max(1, len(times) // 4)]:
        left = np.abs(test_fn.dx(np.full_like(ys, grid.x_min), ys, float(t))).max()
        right = np.abs(test_fn.dx(np.full_like(ys, grid.x_max), ys, float(t))).max()
        bottom = np.abs(test_fn.dy(xs, np.full_like(xs, grid.y_min), float(t))).max()
        top = np.abs(test_fn.dy(xs, np.full_like(xs, grid.y_max), float(t))).max()
        worst = max(left, right, bottom, top)
        if worst > scale:
            raise UnsupportedTestFunctionError(
                f"test function has nonzero normal derivative ({worst:.3e}) at the boundary"
            )


def weak_residual(traj, params: ModelParams, test_fn) -> WeakResidualReport:
    """Absolute residuals of both weak identities on a trajectory.

    Space integrals use the midpoint rule; transport pairings use the
    scheme's face fluxes against face differences of the test function;
    the time integral is the trapezoid rule over snapshot times.
    """
    snaps = traj.snapshots
    in_support = [s for s in snaps if test_fn.t_lo <= s[0] <= test_fn.t_hi]
    if len(in_support) < 20 and not _is_trivial(test_fn):
        raise InsufficientRowsError(
            f"need >= 20 snapshots inside the test function support, got {len(in_support)}"
        )
    grid = snaps[0][1].grid
    X, Y = grid.mesh
    hx, hy, area = grid.hx, grid.hy, grid.cell_area
    times = np.array([s[0] for s in snaps])
    _check_neumann(test_fn, grid, times)

    lhs_u_terms = np.empty(len(snaps))
    lhs_v_terms = np.empty(len(snaps))
    rhs_u_terms = np.empty(len(snaps))
    rhs_v_terms = np.empty(len(snaps))
    expo = params.m - 1.0

    for k, (t, u_f, v_f) in enumerate(snaps):
        u = u_f.as2d()
        v = v_f.as2d()
        phi = np.asarray(test_fn.value(X, Y, t), dtype=np.float64)
        phi = np.broadcast_to(phi, u.shape)
        phi_t = np.asarray(test_fn.dt(X, Y, t), dtype=np.float64)
        phi_t = np.broadcast_to(phi_t, u.shape)

        lhs_u_terms[k] = area * float((u * phi_t).sum())
        lhs_v_terms[k] = area * float((v * phi_t).sum())

        dphix = phi[:, 1:] - phi[:, :-1]
        dphiy = phi[1:, :] - phi[:-1, :]

        ax = _coeff_pow(0.5 * (u[:, 1:] + u[:, :-1]) + params.eps, expo)
        ay = _coeff_pow(0.5 * (u[1:, :] + u[:-1, :]) + params.eps, expo)
        gux = ax * (u[:, 1:] - u[:, :-1]) / hx
        guy = ay * (u[1:, :] - u[:-1, :]) / hy
        diff_u = -area * (float((gux * dphix).sum()) / hx + float((guy * dphiy).sum()) / hy)

        qx, qy = _chemo_fluxes(u, v, params.chi, hx, hy)
        adv_u = area * (float((qx * dphix).sum()) / hx + float((qy * dphiy).sum()) / hy)

        uv = u * v
        b1 = _source_array(params.b1, grid, t)
        b2 = _source_array(params.b2, grid, t)
        react_u = area * float(((b1 - uv) * phi).sum())
        rhs_u_terms[k] = diff_u + adv_u + react_u

        gvx = (v[:, 1:] - v[:, :-1]) / hx
        gvy = (v[1:, :] - v[:-1, :]) / hy
        diff_v = -area * (float((gvx * dphix).sum()) / hx + float((gvy * dphiy).sum()) / hy)
        if params.regularized_reaction:
            react_v_arr = uv / (1.0 + params.eps * uv)
        else:
            react_v_arr = uv
        rhs_v_terms[k] = diff_v + area * float(((react_v_arr - v + b2) * phi).sum())

    t0 = times[0]
    u0 = snaps[0][1].as2d()
    v0 = snaps[0][2].as2d()
    phi0 = np.broadcast_to(np.asarray(test_fn.value(X, Y, t0), dtype=np.float64), u0.shape)
    init_u = area * float((u0 * phi0).sum())
    init_v = area * float((v0 * phi0).sum())

    lhs_u = -np.trapezoid(lhs_u_terms, times) - init_u
    lhs_v = -np.trapezoid(lhs_v_terms, times) - init_v
    rhs_u = np.trapezoid(rhs_u_terms, times)
    rhs_v = np.trapezoid(rhs_v_terms, times)

    return WeakResidualReport(
        residual_u=abs(float(lhs_u - rhs_u)),
        residual_v=abs(float(lhs_v - rhs_v)),
        test_function_id=getattr(test_fn, "label", "") or repr(test_fn),
        n_snapshots=len(snaps),
        grid_shape=(grid.nx, grid.ny),
    )


def _is_trivial(test_fn) -> bool:
    return getattr(test_fn, "amplitude", None) == 0.0
