"""Standalone reader for CWF1 field snapshots.

The format is an ASCII header (magic line ``CWF1``, then ``nx``, ``ny``,
``x_min``, ``x_max``, ``y_min``, ``y_max``, ``t``, ``name`` lines, then a
``data`` marker) followed by nx*ny little-endian float64 values in
row-major cell order.  This module deliberately re-implements the parser
so the plotting tool depends only on the byte format, not on the
simulator package.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

MAGIC = b"CWF1"


class SnapshotFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Snapshot:
    nx: int
    ny: int
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    t: float
    name: str
    values: np.ndarray  # shape (ny, nx)

    @property
    def extent(self) -> tuple[float, float, float, float]:
        return (self.x_min, self.x_max, self.y_min, self.y_max)

    def grid_key(self) -> tuple:
        return (self.nx, self.ny, self.x_min, self.x_max, self.y_min, self.y_max)


def read_snapshot(path) -> Snapshot:
    raw = Path(path).read_bytes()
    nl = raw.find(b"\n")
    if nl < 0 or raw[:nl] != MAGIC:
        raise SnapshotFormatError(f"{path}: missing CWF1 magic")
    pos = nl + 1
    header: dict[str, str] = {}
    while True:
        nl = raw.find(b"\n", pos)
        if nl < 0:
            raise SnapshotFormatError(f"{path}: truncated header")
        line = raw[pos:nl].decode("utf-8", errors="replace")
        pos = nl + 1
        if line == "data":
            break
        key, _, value = line.partition(" ")
        header[key] = value
    try:
        nx = int(header["nx"])
        ny = int(header["ny"])
        bounds = [float(header[k]) for k in ("x_min", "x_max", "y_min", "y_max")]
        t = float(header["t"])
    except (KeyError, ValueError) as err:
        raise SnapshotFormatError(f"{path}: bad header ({err})") from None
    expected = 8 * nx * ny
    payload = raw[pos:]
    if len(payload) != expected:
        raise SnapshotFormatError(
            f"{path}: payload is {len(payload)} bytes, expected {expected}"
        )
    values = np.frombuffer(payload, dtype="<f8").reshape(ny, nx).copy()
    return Snapshot(nx, ny, *bounds, t, header.get("name", ""), values)
