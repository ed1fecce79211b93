"""Heatmap panels and monitor time-series plots."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .snapshots import Snapshot, read_snapshot


class FigureSpecError(ValueError):
    pass


class GridMismatchError(ValueError):
    pass


class ColumnError(ValueError):
    pass


@dataclass(frozen=True)
class FigureSpec:
    """Panel list plus rendering options for one heatmap figure."""

    panels: tuple[tuple[str, str], ...]  # (snapshot path, title)
    output: str
    colormap: str = "viridis"
    shared_scale: bool = False

    @staticmethod
    def from_json(path) -> "FigureSpec":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as err:
            raise FigureSpecError(f"{path}: {err}") from None
        if not isinstance(data, dict) or "panels" not in data or "output" not in data:
            raise FigureSpecError(f"{path}: spec needs 'panels' and 'output' keys")
        panels = []
        for entry in data["panels"]:
            if isinstance(entry, dict):
                panels.append((str(entry["path"]), str(entry.get("title", ""))))
            else:
                path_str, title = entry
                panels.append((str(path_str), str(title)))
        if not panels:
            raise FigureSpecError(f"{path}: no panels listed")
        return FigureSpec(
            panels=tuple(panels),
            output=str(data["output"]),
            colormap=str(data.get("colormap", "viridis")),
            shared_scale=bool(data.get("shared_scale", False)),
        )


@dataclass(frozen=True)
class RenderResult:
    output: str
    n_panels: int
    panel_times: tuple[float, ...]


def render_heatmap_grid(spec: FigureSpec) -> RenderResult:
    """Render the spec's snapshots as one image, panels in spec order.

    Panels flow left to right, top to bottom on a near-square grid.  All
    snapshots must share one grid; color scales are per panel unless
    shared_scale is set.
    """
    snaps: list[Snapshot] = []
    for path, _ in spec.panels:
        if not Path(path).exists():
            raise FileNotFoundError(f"snapshot not found: {path}")
        snaps.append(read_snapshot(path))
    key = snaps[0].grid_key()
    for (path, _), snap in zip(spec.panels, snaps):
        if snap.grid_key() != key:
            raise GridMismatchError(f"{path}: snapshot grid differs from the first panel")

    n = len(snaps)
    ncols = math.ceil(math.sqrt(n))
    nrows = math.ceil(n / ncols)
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(4.0 * ncols, 3.4 * nrows), squeeze=False
    )
    vmin = min(float(s.values.min()) for s in snaps) if spec.shared_scale else None
    vmax = max(float(s.values.max()) for s in snaps) if spec.shared_scale else None
    for ax in axes.flat[n:]:
        ax.set_axis_off()
    for idx, ((_, title), snap) in enumerate(zip(spec.panels, snaps)):
        ax = axes.flat[idx]
        im = ax.imshow(
            snap.values,
            origin="lower",
            extent=snap.extent,
            cmap=spec.colormap,
            vmin=vmin,
            vmax=vmax,
            interpolation="nearest",
        )
        label = title or f"{snap.name} at t = {snap.t:g}"
        ax.set_title(f"{label}  (t = {snap.t:g})" if title else label, fontsize=10)
        fig.colorbar(im, ax=ax, shrink=0.85)
    fig.tight_layout()
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=130)
    plt.close(fig)
    return RenderResult(str(out), n, tuple(s.t for s in snaps))


def read_diagnostics_csv(path) -> dict[str, np.ndarray]:
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].strip():
        raise ColumnError(f"{path}: empty diagnostics file")
    header = [h.strip() for h in lines[0].split(",")]
    rows = [line.split(",") for line in lines[1:] if line.strip()]
    if not rows:
        raise ColumnError(f"{path}: no data rows")
    cols = {name: np.array([float(r[i]) for r in rows]) for i, name in enumerate(header)}
    return cols


def render_monitors(
    csv_path,
    quantities: list[str],
    output,
    log_scale: bool = False,
) -> RenderResult:
    """Line plots of the requested diagnostics columns against time."""
    cols = read_diagnostics_csv(csv_path)
    if "t" not in cols:
        raise ColumnError(f"{csv_path}: no 't' column")
    missing = [q for q in quantities if q not in cols]
    if missing:
        raise ColumnError(f"{csv_path}: unknown columns {', '.join(missing)}")
    if not quantities:
        raise ColumnError("no quantities requested")
    t = cols["t"]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for q in quantities:
        ax.plot(t, cols[q], label=q, lw=1.4)
    ax.set_xlabel("t")
    if log_scale:
        ax.set_yscale("log")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    out = Path(output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=130)
    plt.close(fig)
    return RenderResult(str(out), len(quantities), tuple())
