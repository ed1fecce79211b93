"""Time-series monitors of conserved and bounded quantities.

Each recorded row tracks the discrete analogues of the quantities that stay
bounded when the diffusion enhancement is strong enough (m > 3/2): masses,
the pointwise floor of v, the sup of u, Sobolev-type norms of v, and two
trailing unit-window space-time integrals.  Audits over a completed record
check the exponential lower bound on v, plateau behavior of the bounded
monitors, and grid-robustness of concentration events.
"""
from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import EmptyRecordError, InsufficientRowsError, InvalidParameterError
from .grid import cell_integral, central_gradient, discrete_norm
from .model import ModelParams, SimState, SimStatus

#: Column order of a diagnostics record and of the exported CSV.
DIAG_COLUMNS = (
    "t",
    "mass_u",
    "mass_v",
    "min_v",
    "linf_u",
    "w1q3_v",
    "w1q2m1_v",
    "concentration_index",
    "clipped_mass_cum",
    "iv_window",
    "iu_window",
)

#: Exponent p of the v^(p-2) |grad v|^2 monitor.
P_MONITOR = 0.5


class DiagnosticsRecord:
    """Append-only table of monitor rows for one run.

    ``iv_window`` and ``iu_window`` are trailing integrals over the window
    (t - 1, t] of v^(p-2) |grad v|^2 with p = 1/2 and of u^(2m-1); for
    t < 1 the window is the partial interval (0, t].  The quadrature in
    time is the rectangle rule over recording intervals.
    """

    def __init__(self, m: float, window: float = 1.0):
        if m < 1.0:
            raise InvalidParameterError(f"diffusion exponent must satisfy m >= 1, got {m}")
        self.m = float(m)
        self.window = float(window)
        self._cols: dict[str, list[float]] = {name: [] for name in DIAG_COLUMNS}
        self._win_entries: deque[tuple[float, float, float]] = deque()
        self._iv_sum = 0.0
        self._iu_sum = 0.0
        self._last_t: float | None = None

    @property
    def n_rows(self) -> int:
        return len(self._cols["t"])

    def column(self, name: str) -> np.ndarray:
        if name not in self._cols:
            raise KeyError(f"unknown diagnostics column {name!r}")
        return np.asarray(self._cols[name], dtype=np.float64)

    def row(self, i: int) -> dict[str, float]:
        return {name: self._cols[name][i] for name in DIAG_COLUMNS}

    def append_raw(self, row: dict[str, float]) -> None:
        """Append a precomputed row (used by the CSV loader and by tests)."""
        for name in DIAG_COLUMNS:
            self._cols[name].append(float(row[name]))
        self._last_t = self._cols["t"][-1]

    @classmethod
    def from_columns(cls, m: float, columns: dict[str, np.ndarray]) -> "DiagnosticsRecord":
        rec = cls(m=m)
        n = len(columns["t"])
        for name in DIAG_COLUMNS:
            if name not in columns or len(columns[name]) != n:
                raise InvalidParameterError(f"diagnostics column {name!r} missing or ragged")
            rec._cols[name] = [float(x) for x in columns[name]]
        rec._last_t = rec._cols["t"][-1] if n else None
        return rec

    def _advance_windows(self, t: float, s_v: float, s_u: float) -> tuple[float, float]:
        if self._last_t is not None and t > self._last_t:
            dt = t - self._last_t
            wv = dt * s_v
            wu = dt * s_u
            self._win_entries.append((t, wv, wu))
            self._iv_sum += wv
            self._iu_sum += wu
        while self._win_entries and self._win_entries[0][0] <= t - self.window:
            _, wv, wu = self._win_entries.popleft()
            self._iv_sum -= wv
            self._iu_sum -= wu
        return self._iv_sum, self._iu_sum


def record(
    state: SimState,
    params: ModelParams,
    rec: DiagnosticsRecord,
    clipped_mass_cum: float | None = None,
) -> DiagnosticsRecord:
    """Append one monitor row for the given state.

    All row entries are recomputed from the state through the grid-module
    norms; nothing is cached between rows except the window accumulators.
    """
    if state.status is SimStatus.FAILED:
        raise InvalidParameterError("cannot record diagnostics for a failed state")
    grid = state.grid
    mass_u = cell_integral(state.u)
    mass_v = cell_integral(state.v)
    min_v = float(state.v.values.min())
    linf_u = discrete_norm(state.u, "linf")
    w1q3 = discrete_norm(state.v, "w1q", 3.0)
    q2 = max(2.0 * rec.m - 1.0, 1.0)
    w1q2m1 = discrete_norm(state.v, "w1q", q2)
    mean_u = mass_u / grid.area
    conc = linf_u / mean_u if mean_u > 0.0 else 0.0

    v2d = state.v.as2d()
    gx, gy = central_gradient(state.v)
    grad2 = gx * gx + gy * gy
    s_v = grid.cell_area * float((v2d ** (P_MONITOR - 2.0) * grad2).sum())
    u_vals = state.u.values
    s_u = grid.cell_area * float((u_vals ** q2).sum())
    iv_win, iu_win = rec._advance_windows(state.t, s_v, s_u)

    if clipped_mass_cum is None:
        clipped_mass_cum = rec._cols["clipped_mass_cum"][-1] if rec.n_rows else 0.0

    rec.append_raw(
        {
            "t": state.t,
            "mass_u": mass_u,
            "mass_v": mass_v,
            "min_v": min_v,
            "linf_u": linf_u,
            "w1q3_v": w1q3,
            "w1q2m1_v": w1q2m1,
            "concentration_index": conc,
            "clipped_mass_cum": clipped_mass_cum,
            "iv_window": iv_win,
            "iu_window": iu_win,
        }
    )
    return rec


def min_v_lower_bound_check(rec: DiagnosticsRecord, v0_min: float) -> tuple[bool, float]:
    """Check min v(t) >= v0_min * exp(-t) * (1 - 1e-6) - 1e-10 on every row.

    Returns (ok, worst_ratio) where worst_ratio is the smallest value of
    min_v(t) / (v0_min * exp(-t)) over the record.  With any nonnegative
    b2 the attractiveness can only sit above the pure-decay envelope.
    """
    if rec.n_rows == 0:
        raise EmptyRecordError("diagnostics record has no rows")
    if not v0_min > 0.0:
        raise InvalidParameterError(f"v0_min must be > 0, got {v0_min}")
    t = rec.column("t")
    min_v = rec.column("min_v")
    envelope = v0_min * np.exp(-t)
    ok = bool(np.all(min_v >= envelope * (1.0 - 1e-6) - 1e-10))
    worst = float((min_v / envelope).min())
    return ok, worst


@dataclass(frozen=True)
class MonitorAudit:
    name: str
    sup: float
    plateauing: bool
    last_quarter_sup: float
    middle_half_sup: float


@dataclass(frozen=True)
class BoundednessReport:
    monitors: tuple[MonitorAudit, ...]
    all_plateauing: bool
    assumptions_met: bool

    def monitor(self, name: str) -> MonitorAudit:
        for mon in self.monitors:
            if mon.name == name:
                return mon
        raise KeyError(name)


_PLATEAU_FACTOR = 1.05
_AUDIT_MONITORS = ("linf_u", "w1q2m1_v", "iu_window", "iv_window")


def boundedness_audit(
    rec: DiagnosticsRecord, m: float, constant_positive_b2: bool = True
) -> BoundednessReport:
    """Report sup and plateau status of the four boundedness monitors.

    A monitor plateaus when its sup over the last quarter of the time span
    does not exceed 1.05x its sup over the middle half.  This is the
    desk-scale stand-in for uniform-in-time boundedness, meaningful when
    m > 3/2 and b2 is a positive constant; the flags are still computed
    otherwise so divergence shows up explicitly.
    """
    if rec.n_rows < 20:
        raise InsufficientRowsError(
            f"boundedness audit needs at least 20 rows, got {rec.n_rows}"
        )
    t = rec.column("t")
    monitors = []
    for name in _AUDIT_MONITORS:
        col = rec.column(name)
        sup = float(col.max())
        tm, cm = t, col
        vacuous = False
        if name in ("iu_window", "iv_window"):
            # rows earlier than one window length carry partial integrals
            # that ramp up from zero; compare only fully formed windows.
            # A run shorter than the window has nothing to compare.
            full = t >= t[0] + rec.window
            if np.count_nonzero(full) >= 4:
                tm, cm = t[full], col[full]
            else:
                vacuous = True
        t0, t1 = float(tm[0]), float(tm[-1])
        span = t1 - t0
        mid = (tm >= t0 + 0.25 * span) & (tm <= t0 + 0.75 * span)
        last = tm >= t0 + 0.75 * span
        mid_sup = float(cm[mid].max()) if mid.any() else 0.0
        last_sup = float(cm[last].max()) if last.any() else 0.0
        plateauing = vacuous or last_sup <= _PLATEAU_FACTOR * mid_sup
        monitors.append(MonitorAudit(name, sup, plateauing, last_sup, mid_sup))
    return BoundednessReport(
        monitors=tuple(monitors),
        all_plateauing=all(mon.plateauing for mon in monitors),
        assumptions_met=(m > 1.5) and constant_positive_b2,
    )


class ClassificationLabel(enum.Enum):
    CONCENTRATION_ROBUST = "concentration_robust"
    BOUNDED = "bounded"
    GRID_ARTIFACT = "grid_artifact"


@dataclass(frozen=True)
class RefinementClassification:
    label: ClassificationLabel
    grids: tuple[tuple[int, int], ...]
    peaks: tuple[float, ...]
    saturated: tuple[bool, ...]
    statuses: tuple[str, ...]


def refinement_blowup_classifier(
    scenario, grids: list[tuple[int, int]]
) -> RefinementClassification:
    """Run a scenario on successively refined grids and classify the peak.

    Peaks reached while a run is stopped at the blow-up threshold are
    saturated at that threshold before comparison, since the stopped run
    never sees the true maximum.  Labels:

    - BOUNDED: the two finest peaks agree within 10% and no run hit the
      blow-up threshold (the event is resolved and bounded).
    - CONCENTRATION_ROBUST: peaks are non-decreasing under refinement
      within 10% (each coarse peak <= 1.1x the next finer one).
    - GRID_ARTIFACT: anything else; the coarse-grid event shrinks away
      under refinement.
    """
    from .scenario import run_scenario_in_memory, build_control

    if len(grids) < 3:
        raise InvalidParameterError("classifier needs at least 3 grids")
    for (nx0, ny0), (nx1, ny1) in zip(grids, grids[1:]):
        if nx1 != 2 * nx0 or ny1 != 2 * ny0:
            raise InvalidParameterError(
                f"each grid must refine the previous by 2, got {(nx0, ny0)} -> {(nx1, ny1)}"
            )
    threshold = build_control(scenario).blowup_linf_threshold
    peaks: list[float] = []
    saturated: list[bool] = []
    statuses: list[str] = []
    for nx, ny in grids:
        traj = run_scenario_in_memory(scenario, nx=nx, ny=ny)
        sat = traj.final_status.value == "blowup_suspected"
        peaks.append(min(traj.peak_linf_u, threshold) if sat else traj.peak_linf_u)
        saturated.append(sat)
        statuses.append(traj.final_status.value)

    last_pair_close = math.isclose(peaks[-1], peaks[-2], rel_tol=0.1) or (
        abs(peaks[-1] - peaks[-2]) <= 0.1 * max(peaks[-1], peaks[-2])
    )
    nondecreasing = all(peaks[i] <= 1.1 * peaks[i + 1] for i in range(len(peaks) - 1))
    if last_pair_close and not any(saturated):
        label = ClassificationLabel.BOUNDED
    elif nondecreasing:
        label = ClassificationLabel.CONCENTRATION_ROBUST
    else:
        label = ClassificationLabel.GRID_ARTIFACT
    return RefinementClassification(
        label=label,
        grids=tuple((int(nx), int(ny)) for nx, ny in grids),
        peaks=tuple(peaks),
        saturated=tuple(saturated),
        statuses=tuple(statuses),
    )
