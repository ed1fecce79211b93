"""Discrete spatial operators: nonlinear diffusion, biased advection, Laplacian.

Everything is written in conservative face-flux form on the cell-centered
grid.  Boundary faces always carry zero flux, so the discrete integral of
each transport term telescopes to zero exactly (up to float rounding) and
total mass is accounted for by the reaction terms alone.

Array kernels operate on (ny, nx) views; the public functions wrap them in
Field objects and validate preconditions.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateDiffusionError,
    NegativeDensityError,
    NonFiniteFieldError,
    NonpositiveAttractivenessError,
)
from .grid import Field
from .model import ModelParams, SimState, SimStatus, _source_array

# --------------------------------------------------------------------------
# array kernels
# --------------------------------------------------------------------------


def _coeff_pow(base: np.ndarray, expo: float) -> np.ndarray:
    # integer exponents cover the common m values without a full pow call
    if expo == 0.0:
        return np.ones_like(base)
    if expo == 1.0:
        return base.copy()
    if expo == 2.0:
        return base * base
    if expo == 3.0:
        return base * base * base
    return base**expo


def _laplacian(a: np.ndarray, hx: float, hy: float) -> np.ndarray:
    out = np.zeros_like(a)
    fx = (a[:, 1:] - a[:, :-1]) / hx
    fy = (a[1:, :] - a[:-1, :]) / hy
    out[:, :-1] += fx / hx
    out[:, 1:] -= fx / hx
    out[:-1, :] += fy / hy
    out[1:, :] -= fy / hy
    return out


def _porous_div(u: np.ndarray, m: float, eps: float, hx: float, hy: float) -> np.ndarray:
    expo = m - 1.0
    ax = _coeff_pow(0.5 * (u[:, 1:] + u[:, :-1]) + eps, expo)
    ay = _coeff_pow(0.5 * (u[1:, :] + u[:-1, :]) + eps, expo)
    fx = ax * (u[:, 1:] - u[:, :-1]) / hx
    fy = ay * (u[1:, :] - u[:-1, :]) / hy
    out = np.zeros_like(u)
    out[:, :-1] += fx / hx
    out[:, 1:] -= fx / hx
    out[:-1, :] += fy / hy
    out[1:, :] -= fy / hy
    return out


def _chemo_fluxes(
    u: np.ndarray, v: np.ndarray, chi: float, hx: float, hy: float
) -> tuple[np.ndarray, np.ndarray]:
    """Upwind advective face fluxes of u with velocity chi * grad(v) / v.

    The face velocity divides the two-point gradient by the face-averaged v;
    the donor cell is picked by the velocity sign via the max/min split.
    """
    wx = chi * (v[:, 1:] - v[:, :-1]) / (hx * 0.5 * (v[:, 1:] + v[:, :-1]))
    wy = chi * (v[1:, :] - v[:-1, :]) / (hy * 0.5 * (v[1:, :] + v[:-1, :]))
    qx = np.maximum(wx, 0.0) * u[:, :-1] + np.minimum(wx, 0.0) * u[:, 1:]
    qy = np.maximum(wy, 0.0) * u[:-1, :] + np.minimum(wy, 0.0) * u[1:, :]
    return qx, qy


def _chemo_div(u: np.ndarray, v: np.ndarray, chi: float, hx: float, hy: float) -> np.ndarray:
    qx, qy = _chemo_fluxes(u, v, chi, hx, hy)
    out = np.zeros_like(u)
    # sign: this is -div(q), the advection term as it appears on the RHS of
    # the u equation
    out[:, :-1] -= qx / hx
    out[:, 1:] += qx / hx
    out[:-1, :] -= qy / hy
    out[1:, :] += qy / hy
    return out


def max_face_speed(v: np.ndarray, chi: float, hx: float, hy: float) -> float:
    """Largest advective face speed |chi * grad(v) / v|, for step control."""
    wx = chi * (v[:, 1:] - v[:, :-1]) / (hx * 0.5 * (v[:, 1:] + v[:, :-1]))
    wy = chi * (v[1:, :] - v[:-1, :]) / (hy * 0.5 * (v[1:, :] + v[:-1, :]))
    mx = float(np.abs(wx).max()) if wx.size else 0.0
    my = float(np.abs(wy).max()) if wy.size else 0.0
    return max(mx, my)


# --------------------------------------------------------------------------
# field-level operations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RhsPair:
    """Right-hand sides of the two evolution equations."""

    du_dt: Field
    dv_dt: Field


def _check_finite_minmax(a: np.ndarray, what: str) -> tuple[float, float]:
    lo = float(a.min())
    hi = float(a.max())
    if not (np.isfinite(lo) and np.isfinite(hi)):
        raise NonFiniteFieldError(f"{what} contains NaN or Inf entries")
    return lo, hi


def laplacian_neumann(f: Field) -> Field:
    """Five-point Laplacian with zero-flux boundary faces."""
    _check_finite_minmax(f.values, "laplacian input")
    out = _laplacian(f.as2d(), f.grid.hx, f.grid.hy)
    return Field(f.grid, out.reshape(-1))


def porous_diffusion_div(u: Field, m: float, eps: float) -> Field:
    """div((u + eps)^(m-1) grad u) with arithmetic-mean face coefficients."""
    lo, _ = _check_finite_minmax(u.values, "density")
    if lo < 0.0:
        raise NegativeDensityError(f"density must be nonnegative, min={lo}")
    if m < 1.0:
        raise DegenerateDiffusionError(f"diffusion exponent must satisfy m >= 1, got {m}")
    if eps < 0.0:
        raise DegenerateDiffusionError(f"eps must be >= 0, got {eps}")
    if m > 1.0 and m < 2.0 and eps == 0.0:
        # (u + 0)^(m-1) has unbounded derivative at u = 0 for 1 < m < 2
        raise DegenerateDiffusionError("m in (1, 2) with eps = 0 is degenerate; pass eps > 0")
    out = _porous_div(u.as2d(), m, eps, u.grid.hx, u.grid.hy)
    return Field(u.grid, out.reshape(-1))


def chemotaxis_div(u: Field, v: Field, chi: float) -> Field:
    """-chi * div((u / v) grad v), upwinded; the u-equation advection term."""
    lo_u, _ = _check_finite_minmax(u.values, "density")
    lo_v, _ = _check_finite_minmax(v.values, "attractiveness")
    if lo_u < 0.0:
        raise NegativeDensityError(f"density must be nonnegative, min={lo_u}")
    if lo_v <= 0.0:
        raise NonpositiveAttractivenessError(f"attractiveness must be positive, min={lo_v}")
    out = _chemo_div(u.as2d(), v.as2d(), chi, u.grid.hx, u.grid.hy)
    return Field(u.grid, out.reshape(-1))


@dataclass(frozen=True)
class RhsStats:
    """Per-evaluation bookkeeping used by the mass ledger."""

    reaction_u_integral: float  # integral of (-u*v + b1)
    flux_u_integral: float  # integral of the transport terms, ~0 by telescoping
    flux_u_scale: float  # L1-type magnitude for relative comparison


def _rhs_arrays(
    u: np.ndarray,
    v: np.ndarray,
    t: float,
    params: ModelParams,
    grid,
    with_stats: bool = False,
) -> tuple[np.ndarray, np.ndarray, RhsStats | None]:
    hx, hy = grid.hx, grid.hy
    diff_u = _porous_div(u, params.m, params.eps, hx, hy)
    adv_u = _chemo_div(u, v, params.chi, hx, hy)
    uv = u * v
    b1 = _source_array(params.b1, grid, t)
    b2 = _source_array(params.b2, grid, t)
    du = diff_u + adv_u - uv + b1
    if params.regularized_reaction:
        react_v = uv / (1.0 + params.eps * uv)
    else:
        react_v = uv
    dv = _laplacian(v, hx, hy) + react_v - v + b2
    stats = None
    if with_stats:
        area = grid.cell_area
        react_int = area * float((b1 - uv).sum())
        flux_int = area * (float(diff_u.sum()) + float(adv_u.sum()))
        scale = area * (float(np.abs(diff_u).sum()) + float(np.abs(adv_u).sum())) + 1.0
        stats = RhsStats(react_int, flux_int, scale)
    return du, dv, stats


def rhs_eval(state: SimState, params: ModelParams) -> RhsPair:
    """Assembled right-hand side of both equations at the state's time."""
    if state.status is not SimStatus.HEALTHY:
        raise NonFiniteFieldError(f"rhs evaluation requires a healthy state, got {state.status}")
    u = state.u.as2d()
    v = state.v.as2d()
    lo_u, _ = _check_finite_minmax(u, "density")
    lo_v, _ = _check_finite_minmax(v, "attractiveness")
    if lo_u < 0.0:
        raise NegativeDensityError(f"density must be nonnegative, min={lo_u}")
    if lo_v <= 0.0:
        raise NonpositiveAttractivenessError(f"attractiveness must be positive, min={lo_v}")
    du, dv, _ = _rhs_arrays(u, v, state.t, params, state.grid)
    return RhsPair(Field(state.grid, du.reshape(-1)), Field(state.grid, dv.reshape(-1)))
