"""Model parameters, source terms, initial data and reference states.

The two unknowns are the offender density u and the attractiveness field v.
u moves by density-dependent diffusion with exponent m plus advection up the
attractiveness gradient with strength chi; v diffuses linearly, is produced
by the crime rate u*v and decays at unit rate.  Both equations carry
nonnegative external sources b1 and b2.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    InvalidGridPairError,
    InvalidParameterError,
    InvalidSigmaError,
    NegativeSourceError,
    NoSteadyStateError,
)
from .grid import Field, Grid

# v is clamped below at this value right after sampling initial data; the
# advection term divides by v and needs it strictly positive.
V_INITIAL_FLOOR = 1e-12


@dataclass(frozen=True)
class SourceTerm:
    """External source, either a constant or a function of (x, y, t).

    Function handles must accept numpy coordinate arrays and return values
    broadcastable to the grid shape; samples must be nonnegative.
    """

    constant: float | None = None
    fn: Callable[[np.ndarray, np.ndarray, float], np.ndarray] | None = None

    def __post_init__(self) -> None:
        if (self.constant is None) == (self.fn is None):
            raise NegativeSourceError("source term needs exactly one of constant or fn")
        if self.constant is not None and self.constant < 0.0:
            raise NegativeSourceError(f"constant source must be >= 0, got {self.constant}")

    @staticmethod
    def const(c: float) -> "SourceTerm":
        return SourceTerm(constant=float(c))

    @staticmethod
    def time_space(fn: Callable[[np.ndarray, np.ndarray, float], np.ndarray]) -> "SourceTerm":
        return SourceTerm(fn=fn)

    @property
    def is_constant(self) -> bool:
        return self.constant is not None


@dataclass(frozen=True)
class ModelParams:
    """All coefficients of the evolution system.

    m >= 1 is the diffusion exponent, chi > 0 the advection strength and
    eps >= 0 the regularization entering the diffusion coefficient
    (u + eps)^(m-1) and, when regularized_reaction is set, the saturated
    production term u*v / (1 + eps*u*v).
    """

    m: float
    chi: float
    eps: float = 1e-6
    b1: SourceTerm = field(default_factory=lambda: SourceTerm.const(1.0))
    b2: SourceTerm = field(default_factory=lambda: SourceTerm.const(1.0))
    regularized_reaction: bool = False

    def __post_init__(self) -> None:
        if self.m < 1.0:
            raise InvalidParameterError(f"diffusion exponent must satisfy m >= 1, got {self.m}")
        if not self.chi > 0.0:
            raise InvalidParameterError(f"advection strength chi must be > 0, got {self.chi}")
        if self.eps < 0.0:
            raise InvalidParameterError(f"regularization eps must be >= 0, got {self.eps}")


class SimStatus(enum.Enum):
    HEALTHY = "healthy"
    BLOWUP_SUSPECTED = "blowup_suspected"
    FAILED = "failed"


@dataclass
class SimState:
    """Solution pair plus time, step counter and health flag."""

    u: Field
    v: Field
    t: float = 0.0
    step: int = 0
    status: SimStatus = SimStatus.HEALTHY

    def __post_init__(self) -> None:
        if self.u.grid != self.v.grid:
            raise InvalidGridPairError("u and v must live on the same grid")

    @property
    def grid(self) -> Grid:
        return self.u.grid



def gaussian_ic(grid: Grid, sigma: float) -> Field:
    """Radially symmetric bump (2 pi sigma^2)^(-1/2) * exp(-(x^2+y^2)/(2 sigma^2)).

    The profile is centered at the origin regardless of the grid bounds.
    """
    if not sigma > 0.0:
        raise InvalidSigmaError(f"sigma must be > 0, got {sigma}")
    X, Y = grid.mesh
    amp = 1.0 / np.sqrt(2.0 * np.pi * sigma * sigma)
    vals = amp * np.exp(-(X * X + Y * Y) / (2.0 * sigma * sigma))
    return Field(grid, vals.reshape(-1))


def initial_state(
    grid: Grid,
    u0: Field | float,
    v0: Field | float,
    v_floor: float = V_INITIAL_FLOOR,
) -> SimState:
    """Assemble a healthy starting state; v is clamped below at v_floor."""
    if not isinstance(u0, Field):
        u0 = Field(grid, np.full(grid.n_cells, float(u0)))
    if not isinstance(v0, Field):
        v0 = Field(grid, np.full(grid.n_cells, float(v0)))
    if u0.values.min() < 0.0:
        raise InvalidParameterError("initial u must be nonnegative")
    v_vals = np.maximum(v0.values, v_floor)
    return SimState(u=u0, v=Field(grid, v_vals), t=0.0, step=0, status=SimStatus.HEALTHY)


def homogeneous_steady_state(params: ModelParams) -> tuple[float, float]:
    """Spatially uniform fixed point of the reaction system with constant sources.

    Solves -u*v + b1 = 0 and u*v - v + b2 = 0, giving v* = b1 + b2 and
    u* = b1 / (b1 + b2).
    """
    if not (params.b1.is_constant and params.b2.is_constant):
        raise NoSteadyStateError("steady state requires constant sources")
    if params.regularized_reaction:
        raise NoSteadyStateError("steady state formula assumes the unregularized reaction")
    beta1 = float(params.b1.constant)
    beta2 = float(params.b2.constant)
    if beta1 + beta2 <= 0.0:
        raise NoSteadyStateError("no steady state when b1 + b2 = 0")
    v_star = beta1 + beta2
    u_star = beta1 / (beta1 + beta2)
    return u_star, v_star


def eval_source(s: SourceTerm, grid: Grid, t: float) -> Field:
    """Sample a source term at cell centers at time t; raises if any value < 0."""
    if t < 0.0:
        raise NegativeSourceError(f"source evaluation needs t >= 0, got {t}")
    if s.is_constant:
        return Field(grid, np.full(grid.n_cells, float(s.constant)))
    X, Y = grid.mesh
    vals = np.asarray(s.fn(X, Y, t), dtype=np.float64)
    vals = np.broadcast_to(vals, (grid.ny, grid.nx)).reshape(-1)
    if vals.min() < 0.0:
        raise NegativeSourceError(f"source term evaluated negative at t={t}")
    return Field(grid, vals.copy())


def _source_array(s: SourceTerm, grid: Grid, t: float) -> np.ndarray:
    """(ny, nx) sample of a source term; fast path for constants."""
    if s.is_constant:
        return np.full((grid.ny, grid.nx), float(s.constant))
    return eval_source(s, grid, t).as2d().copy()
