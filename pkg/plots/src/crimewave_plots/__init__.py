"""Offline figure generation for simulator run directories.

Consumes the CWF1 binary snapshot format and the diagnostics CSV exactly
as the simulator emits them; nothing here imports the simulator.
"""

__version__ = "0.1.0"

from .figures import (
    ColumnError,
    FigureSpec,
    FigureSpecError,
    GridMismatchError,
    RenderResult,
    render_heatmap_grid,
    render_monitors,
)
from .snapshots import Snapshot, SnapshotFormatError, read_snapshot

__all__ = [
    "__version__",
    "ColumnError",
    "FigureSpec",
    "FigureSpecError",
    "GridMismatchError",
    "RenderResult",
    "Snapshot",
    "SnapshotFormatError",
    "read_snapshot",
    "render_heatmap_grid",
    "render_monitors",
]
