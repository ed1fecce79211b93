"""Self-describing binary field snapshots (format tag CWF1).

Layout: an ASCII header of newline-terminated lines

    CWF1
    nx <int>
    ny <int>
    x_min <float>  x_max <float>  y_min <float>  y_max <float>   (one per line)
    t <float>
    name <string>
    data

followed by nx*ny little-endian IEEE-754 float64 values in row-major cell
order.  Header floats are written with repr(), which round-trips exactly,
and the payload is copied bit for bit, so read(write(f)) == f bitwise.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidDimensionError,
    MagicMismatchError,
    TruncationError,
)
from .grid import Field, Grid

MAGIC = b"CWF1"

_HEADER_FLOATS = ("x_min", "x_max", "y_min", "y_max", "t")


def write_snapshot(field: Field, path, *, t: float = 0.0, name: str = "field") -> None:
    """Write one field to path; t and name go into the header."""
    if "\n" in name or "\r" in name:
        raise InvalidDimensionError("snapshot name must be a single line")
    g = field.grid
    lines = [
        MAGIC,
        b"nx %d" % g.nx,
        b"ny %d" % g.ny,
        f"x_min {g.x_min!r}".encode(),
        f"x_max {g.x_max!r}".encode(),
        f"y_min {g.y_min!r}".encode(),
        f"y_max {g.y_max!r}".encode(),
        f"t {float(t)!r}".encode(),
        f"name {name}".encode(),
        b"data",
    ]
    payload = np.ascontiguousarray(field.values, dtype="<f8").tobytes()
    with open(path, "wb") as fh:
        fh.write(b"\n".join(lines) + b"\n")
        fh.write(payload)


def read_snapshot_meta(path) -> tuple[Field, float, str]:
    """Read a snapshot file; returns (field, t, name)."""
    raw = Path(path).read_bytes()
    nl = raw.find(b"\n")
    if nl < 0 or raw[:nl] != MAGIC:
        raise MagicMismatchError(f"{path}: not a CWF1 snapshot")
    pos = nl + 1
    header: dict[str, str] = {}
    while True:
        nl = raw.find(b"\n", pos)
        if nl < 0:
            raise TruncationError(f"{path}: header ended before the data marker")
        line = raw[pos:nl].decode("utf-8", errors="replace")
        pos = nl + 1
        if line == "data":
            break
        key, _, value = line.partition(" ")
        if not value and key != "name":
            raise TruncationError(f"{path}: malformed header line {line!r}")
        header[key] = value
    try:
        nx = int(header["nx"])
        ny = int(header["ny"])
        floats = {k: float(header[k]) for k in _HEADER_FLOATS}
    except (KeyError, ValueError) as err:
        raise TruncationError(f"{path}: incomplete or unparsable header ({err})") from None
    if nx < 2 or ny < 2:
        raise DimensionMismatchError(f"{path}: invalid cell counts nx={nx}, ny={ny}")
    expected = 8 * nx * ny
    payload = raw[pos:]
    if len(payload) < expected:
        raise TruncationError(
            f"{path}: payload has {len(payload)} bytes, expected {expected}"
        )
    if len(payload) > expected:
        raise DimensionMismatchError(
            f"{path}: payload has {len(payload)} bytes, expected exactly {expected}"
        )
    values = np.frombuffer(payload, dtype="<f8").copy()
    try:
        grid = Grid(floats["x_min"], floats["x_max"], floats["y_min"], floats["y_max"], nx, ny)
    except InvalidDimensionError as err:
        raise DimensionMismatchError(f"{path}: {err}") from None
    return Field(grid, values), floats["t"], header.get("name", "")


def read_snapshot(path) -> Field:
    field, _, _ = read_snapshot_meta(path)
    return field
