"""Adaptive explicit time stepping with positivity safeguarding.

The semi-discrete system is advanced with Heun's method (explicit
trapezoidal rule).  Step sizes obey an explicit stability bound combining
the diffusion, advection and reaction scales; after each update u is
clipped at zero (the clipped mass is logged, never silently dropped) and v
is clipped at a small positive floor.  Suspected blow-up is a status, not
an exception: runs terminate cleanly with data up to the event.
"""
from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .diagnostics import DiagnosticsRecord, record
from .errors import DtUnderflowError, InvalidParameterError
from .grid import Field
from .model import ModelParams, SimState, SimStatus
from .operators import _rhs_arrays, max_face_speed

_REL_TIME_TOL = 1e-12


@dataclass(frozen=True)
class StepControl:
    """Knobs of the adaptive stepper; defaults suit the bundled scenarios."""

    cfl_safety: float = 0.4
    dt_min: float = 1e-10
    dt_max: float = 1.0
    positivity_floor_v: float = 1e-12
    blowup_linf_threshold: float = 1e6
    equilibrium_tol: float = 1e-7

    def __post_init__(self) -> None:
        if not (0.0 < self.cfl_safety <= 1.0):
            raise InvalidParameterError(f"cfl_safety must lie in (0, 1], got {self.cfl_safety}")
        if not (0.0 < self.dt_min <= self.dt_max):
            raise InvalidParameterError(
                f"need 0 < dt_min <= dt_max, got dt_min={self.dt_min}, dt_max={self.dt_max}"
            )
        if not self.positivity_floor_v > 0.0:
            raise InvalidParameterError("positivity_floor_v must be > 0")
        if self.equilibrium_tol < 0.0:
            raise InvalidParameterError("equilibrium_tol must be >= 0 (0 disables the stop)")


class RunStatus(enum.Enum):
    REACHED_T = "reached_t"
    EQUILIBRATED = "equilibrated"
    BLOWUP_SUSPECTED = "blowup_suspected"
    FAILED = "failed"


@dataclass
class Trajectory:
    """Everything a completed (or interrupted) run leaves behind."""

    snapshots: list[tuple[float, Field, Field]]
    diagnostics: DiagnosticsRecord
    final_status: RunStatus
    final_state: SimState
    steps: int
    peak_linf_u: float
    clipped_mass_total: float
    mass_initial_u: float
    mass_change_u: float
    reaction_mass_integral: float
    max_flux_defect_rel: float
    last_unit_rel_change: float | None
    termination: str


def stable_dt(state: SimState, params: ModelParams, ctrl: StepControl) -> float:
    """Stability-limited step size for the current state.

    dt = cfl_safety * min(h^2 / (4 Dmax), h / (2 Wmax), 1 / Lambda) where
    Dmax is the largest diffusion coefficient (at least 1, the v rate),
    Wmax the largest advective face speed and Lambda the reaction scale
    max(max v, 1).  Values above dt_max clamp; values below dt_min raise.
    """
    if state.status is not SimStatus.HEALTHY:
        raise DtUnderflowError(f"step size undefined for status {state.status}")
    grid = state.grid
    h = min(grid.hx, grid.hy)
    u_max = float(state.u.values.max())
    v_max = float(state.v.values.max())
    d_max = max((u_max + params.eps) ** (params.m - 1.0), 1.0)
    w_max = max_face_speed(state.v.as2d(), params.chi, grid.hx, grid.hy)
    bound = h * h / (4.0 * d_max)
    if w_max > 0.0:
        bound = min(bound, h / (2.0 * w_max))
    bound = min(bound, 1.0 / max(v_max, 1.0))
    dt = ctrl.cfl_safety * bound
    if not math.isfinite(dt) or dt < ctrl.dt_min:
        raise DtUnderflowError(
            f"stable step {dt:.3e} fell below dt_min={ctrl.dt_min:.3e} "
            f"(u_max={u_max:.3e}, v_max={v_max:.3e}, w_max={w_max:.3e})"
        )
    return min(dt, ctrl.dt_max)


@dataclass(frozen=True)
class _StepStats:
    clipped_mass: float
    reaction_integral: float
    flux_defect_rel: float


def _advance(
    state: SimState, params: ModelParams, ctrl: StepControl, dt: float
) -> tuple[SimState, _StepStats]:
    grid = state.grid
    u = state.u.as2d()
    v = state.v.as2d()
    with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
        k1u, k1v, s1 = _rhs_arrays(u, v, state.t, params, grid, with_stats=True)
        up = u + dt * k1u
        vp = v + dt * k1v
        np.maximum(up, 0.0, out=up)
        np.maximum(vp, ctrl.positivity_floor_v, out=vp)
        k2u, k2v, s2 = _rhs_arrays(up, vp, state.t + dt, params, grid, with_stats=True)
        un = u + (0.5 * dt) * (k1u + k2u)
        vn = v + (0.5 * dt) * (k1v + k2v)
        neg_sum = float(np.minimum(un, 0.0).sum())
        clipped = -neg_sum * grid.cell_area
        if neg_sum < 0.0:
            np.maximum(un, 0.0, out=un)
        np.maximum(vn, ctrl.positivity_floor_v, out=vn)

    u_lo, u_hi = float(un.min()), float(un.max())
    v_lo, v_hi = float(vn.min()), float(vn.max())
    if not (math.isfinite(u_lo) and math.isfinite(u_hi) and math.isfinite(v_lo) and math.isfinite(v_hi)):
        failed = SimState(state.u, state.v, state.t, state.step + 1, SimStatus.FAILED)
        return failed, _StepStats(0.0, 0.0, 0.0)

    status = SimStatus.HEALTHY
    if u_hi > ctrl.blowup_linf_threshold:
        status = SimStatus.BLOWUP_SUSPECTED
    new_state = SimState(
        Field(grid, un.reshape(-1)),
        Field(grid, vn.reshape(-1)),
        state.t + dt,
        state.step + 1,
        status,
    )
    stats = _StepStats(
        clipped_mass=clipped if math.isfinite(clipped) else 0.0,
        reaction_integral=0.5 * dt * (s1.reaction_u_integral + s2.reaction_u_integral),
        flux_defect_rel=max(
            abs(s1.flux_u_integral) / s1.flux_u_scale,
            abs(s2.flux_u_integral) / s2.flux_u_scale,
        ),
    )
    return new_state, stats


def step(state: SimState, params: ModelParams, ctrl: StepControl, dt: float) -> SimState:
    """One Heun step of size dt with the positivity safeguards applied."""
    if state.status is not SimStatus.HEALTHY:
        raise DtUnderflowError(f"cannot step a state with status {state.status}")
    if not dt > 0.0:
        raise InvalidParameterError(f"dt must be > 0, got {dt}")
    new_state, _ = _advance(state, params, ctrl, dt)
    return new_state


def run(
    initial: SimState,
    params: ModelParams,
    ctrl: StepControl,
    t_end: float,
    output_times: list[float] | tuple[float, ...] = (),
    *,
    diag_stride: int = 1,
) -> Trajectory:
    """Advance from the initial state to t_end, collecting outputs.

    Snapshots are taken exactly at the requested output times (steps are
    shortened to land on them).  Diagnostics rows are recorded at the
    initial state, every diag_stride accepted steps, and at the final
    state.  The run ends early with EQUILIBRATED when the relative sup
    change of u over a unit time window falls below equilibrium_tol, or
    with BLOWUP_SUSPECTED / FAILED as flagged by the stepper.
    """
    output_times = list(output_times)
    if sorted(output_times) != output_times:
        raise InvalidParameterError("output_times must be sorted ascending")
    if output_times and (output_times[0] < initial.t or output_times[-1] > t_end):
        raise InvalidParameterError("output_times must lie within [t0, t_end]")
    if diag_stride < 1:
        raise InvalidParameterError(f"diag_stride must be >= 1, got {diag_stride}")
    if initial.status is not SimStatus.HEALTHY:
        raise InvalidParameterError("run requires a healthy initial state")

    state = initial
    rec = DiagnosticsRecord(m=params.m)
    snapshots: list[tuple[float, Field, Field]] = []
    pending = deque(output_times)
    mass0 = state.grid.cell_area * float(state.u.values.sum())
    peak_linf = float(state.u.values.max())
    init_linf = max(peak_linf, 1e-30)
    clipped_total = 0.0
    reaction_cum = 0.0
    max_flux_rel = 0.0
    last_unit_rel: float | None = None
    eq_ref_t = state.t
    eq_ref_u = state.u.values
    termination = "reached t_end"
    final_status = RunStatus.REACHED_T
    last_recorded_step = state.step

    def time_tol(t: float) -> float:
        return _REL_TIME_TOL * max(1.0, abs(t))

    def take_snapshots() -> None:
        while pending and pending[0] <= state.t + time_tol(state.t):
            snapshots.append((pending.popleft(), state.u, state.v))

    record(state, params, rec, clipped_mass_cum=0.0)
    take_snapshots()

    while state.t < t_end - time_tol(t_end):
        try:
            dt = stable_dt(state, params, ctrl)
        except DtUnderflowError as err:
            # a collapsing step size during strong growth is treated as a
            # concentration event, otherwise as a hard failure
            if peak_linf > 10.0 * init_linf:
                final_status = RunStatus.BLOWUP_SUSPECTED
            else:
                final_status = RunStatus.FAILED
            termination = f"dt underflow: {err}"
            break
        t_target = min(pending[0], t_end) if pending else t_end
        remaining = t_target - state.t
        if dt >= remaining:
            dt = remaining
        state, stats = _advance(state, params, ctrl, dt)
        clipped_total += stats.clipped_mass
        reaction_cum += stats.reaction_integral
        if stats.flux_defect_rel > max_flux_rel:
            max_flux_rel = stats.flux_defect_rel
        linf_now = float(state.u.values.max())
        if linf_now > peak_linf:
            peak_linf = linf_now

        if state.status is SimStatus.FAILED:
            final_status = RunStatus.FAILED
            termination = "non-finite state"
            break
        if state.step - last_recorded_step >= diag_stride:
            record(state, params, rec, clipped_mass_cum=clipped_total)
            last_recorded_step = state.step
        take_snapshots()
        if state.status is SimStatus.BLOWUP_SUSPECTED:
            final_status = RunStatus.BLOWUP_SUSPECTED
            termination = (
                f"sup u = {linf_now:.3e} crossed the blow-up threshold "
                f"{ctrl.blowup_linf_threshold:.3e} at t = {state.t:.6f}"
            )
            break
        if state.t >= eq_ref_t + 1.0 - time_tol(state.t):
            rel = float(np.abs(state.u.values - eq_ref_u).max()) / max(linf_now, 1.0)
            last_unit_rel = rel
            if rel < ctrl.equilibrium_tol and state.t < t_end - time_tol(t_end):
                final_status = RunStatus.EQUILIBRATED
                termination = (
                    f"relative sup change {rel:.3e} over a unit window at t = {state.t:.6f}"
                )
                break
            eq_ref_t = state.t
            eq_ref_u = state.u.values

    if state.step != last_recorded_step and state.status is not SimStatus.FAILED:
        record(state, params, rec, clipped_mass_cum=clipped_total)
    take_snapshots()

    mass_end = state.grid.cell_area * float(state.u.values.sum())
    return Trajectory(
        snapshots=snapshots,
        diagnostics=rec,
        final_status=final_status,
        final_state=state,
        steps=state.step - initial.step,
        peak_linf_u=peak_linf,
        clipped_mass_total=clipped_total,
        mass_initial_u=mass0,
        mass_change_u=mass_end - mass0,
        reaction_mass_integral=reaction_cum,
        max_flux_defect_rel=max_flux_rel,
        last_unit_rel_change=last_unit_rel,
        termination=termination,
    )
