"""Uniform cell-centered Cartesian grid with discrete integrals, norms and gradients.

The grid covers a rectangle with nx-by-ny cells.  A scalar field stores one
value per cell center in row-major order, flat index ``i + nx * j`` for cell
``(i, j)``.  All boundary handling uses reflective ghost cells, which makes
the discrete normal derivative vanish exactly on every boundary face.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidDimensionError, InvalidExponentError, NonFiniteFieldError


@dataclass(frozen=True)
class Grid:
    """Cell-centered rectangular grid.

    Cell ``(i, j)`` has center ``(x_min + (i + 1/2) hx, y_min + (j + 1/2) hy)``
    with ``i = 0..nx-1`` and ``j = 0..ny-1``.
    """

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int

    def __post_init__(self) -> None:
        if self.nx < 2 or self.ny < 2:
            raise InvalidDimensionError(
                f"grid needs at least 2 cells per axis, got nx={self.nx}, ny={self.ny}"
            )
        if not (self.x_max > self.x_min) or not (self.y_max > self.y_min):
            raise InvalidDimensionError(
                f"degenerate bounds: x=({self.x_min}, {self.x_max}), "
                f"y=({self.y_min}, {self.y_max})"
            )

    @property
    def hx(self) -> float:
        return (self.x_max - self.x_min) / self.nx

    @property
    def hy(self) -> float:
        return (self.y_max - self.y_min) / self.ny

    @property
    def n_cells(self) -> int:
        return self.nx * self.ny

    @property
    def cell_area(self) -> float:
        return self.hx * self.hy

    @property
    def area(self) -> float:
        return (self.x_max - self.x_min) * (self.y_max - self.y_min)

    @cached_property
    def xs(self) -> np.ndarray:
        """x coordinates of cell centers, shape (nx,)."""
        return self.x_min + (np.arange(self.nx) + 0.5) * self.hx

    @cached_property
    def ys(self) -> np.ndarray:
        """y coordinates of cell centers, shape (ny,)."""
        return self.y_min + (np.arange(self.ny) + 0.5) * self.hy

    @cached_property
    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """(X, Y) cell-center coordinate arrays, each shape (ny, nx)."""
        return np.meshgrid(self.xs, self.ys)


@dataclass(frozen=True)
class Field:
    """Scalar unknown sampled at cell centers, stored flat in row-major order.

    The constructor takes ownership of ``values`` and freezes it; operations
    always allocate fresh output arrays.
    """

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.ascontiguousarray(self.values, dtype=np.float64).reshape(-1)
        if arr.size != self.grid.n_cells:
            raise InvalidDimensionError(
                f"field has {arr.size} values for a grid of {self.grid.n_cells} cells"
            )
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def as2d(self) -> np.ndarray:
        """Read-only (ny, nx) view; element [j, i] is cell (i, j)."""
        return self.values.reshape(self.grid.ny, self.grid.nx)


def make_grid(
    x_min: float, x_max: float, y_min: float, y_max: float, nx: int, ny: int
) -> Grid:
    """Build a uniform cell-centered grid over the given rectangle."""
    return Grid(float(x_min), float(x_max), float(y_min), float(y_max), int(nx), int(ny))


def field_from_function(grid: Grid, fn) -> Field:
    """Sample fn(x, y) at cell centers; fn must accept numpy arrays."""
    X, Y = grid.mesh
    vals = np.asarray(fn(X, Y), dtype=np.float64)
    vals = np.broadcast_to(vals, (grid.ny, grid.nx))
    return Field(grid, vals.reshape(-1).copy())


def constant_field(grid: Grid, value: float) -> Field:
    return Field(grid, np.full(grid.n_cells, float(value)))


def _require_finite(f: Field) -> None:
    if not np.isfinite(f.values).all():
        raise NonFiniteFieldError("field contains NaN or Inf entries")


def cell_integral(f: Field) -> float:
    """Midpoint-rule integral over the rectangle: hx * hy * sum(values)."""
    _require_finite(f)
    return f.grid.cell_area * float(f.values.sum())


def central_gradient(f: Field) -> tuple[np.ndarray, np.ndarray]:
    """Central-difference gradient with reflective ghost cells.

    Returns (gx, gy) as (ny, nx) arrays.  Reflection sets the ghost value
    equal to the adjacent interior value, so at boundary cells the one-sided
    part of the stencil collapses to (neighbor - self) / (2 h).
    """
    a = f.as2d()
    hx, hy = f.grid.hx, f.grid.hy
    gx = np.empty_like(a)
    gy = np.empty_like(a)
    gx[:, 1:-1] = (a[:, 2:] - a[:, :-2]) / (2.0 * hx)
    gx[:, 0] = (a[:, 1] - a[:, 0]) / (2.0 * hx)
    gx[:, -1] = (a[:, -1] - a[:, -2]) / (2.0 * hx)
    gy[1:-1, :] = (a[2:, :] - a[:-2, :]) / (2.0 * hy)
    gy[0, :] = (a[1, :] - a[0, :]) / (2.0 * hy)
    gy[-1, :] = (a[-1, :] - a[-2, :]) / (2.0 * hy)
    return gx, gy


def discrete_norm(f: Field, kind: str, exponent: float | None = None) -> float:
    """Discrete norm of a field.

    kind = "lp":   (integral of |f|^p)^(1/p), requires exponent p >= 1.
    kind = "linf": max |f|.
    kind = "w1q":  (integral of |f|^q + integral of |grad f|^q)^(1/q) with the
                   central-difference gradient, requires exponent q >= 1.
    """
    _require_finite(f)
    if kind == "linf":
        return float(np.abs(f.values).max())
    if kind == "lp":
        if exponent is None or exponent < 1.0:
            raise InvalidExponentError(f"Lp norm needs p >= 1, got {exponent}")
        p = float(exponent)
        return float((f.grid.cell_area * (np.abs(f.values) ** p).sum()) ** (1.0 / p))
    if kind == "w1q":
        if exponent is None or exponent < 1.0:
            raise InvalidExponentError(f"W1q norm needs q >= 1, got {exponent}")
        q = float(exponent)
        gx, gy = central_gradient(f)
        grad_mag = np.hypot(gx, gy)
        area = f.grid.cell_area
        lq_q = area * (np.abs(f.values) ** q).sum()
        gq_q = area * (grad_mag**q).sum()
        return float((lq_q + gq_q) ** (1.0 / q))
    raise InvalidExponentError(f"unknown norm kind {kind!r}")
