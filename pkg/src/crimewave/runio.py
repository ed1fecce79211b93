"""On-disk run artifacts: snapshots, the diagnostics CSV and the manifest."""
from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .diagnostics import DIAG_COLUMNS, DiagnosticsRecord
from .errors import ScenarioValidationError
from .integrator import Trajectory
from .scenario import Scenario, run_scenario_in_memory
from .snapshots import write_snapshot

MANIFEST_NAME = "manifest.json"
DIAGNOSTICS_NAME = "diagnostics.csv"


def write_diagnostics_csv(rec: DiagnosticsRecord, path) -> None:
    """One header row then one comma-separated row per recorded time.

    Floats are written with repr(), the shortest decimal that parses back
    to the identical double.
    """
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(DIAG_COLUMNS) + "\n")
        for i in range(rec.n_rows):
            row = rec.row(i)
            fh.write(",".join(repr(row[name]) for name in DIAG_COLUMNS) + "\n")


def read_diagnostics_csv(path, m: float) -> DiagnosticsRecord:
    text = Path(path).read_text(encoding="utf-8").splitlines()
    if not text:
        raise ScenarioValidationError(f"{path}: empty diagnostics file")
    header = text[0].split(",")
    if tuple(header) != DIAG_COLUMNS:
        raise ScenarioValidationError(
            f"{path}: unexpected diagnostics columns {header!r}"
        )
    columns: dict[str, list[float]] = {name: [] for name in DIAG_COLUMNS}
    for lineno, line in enumerate(text[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != len(DIAG_COLUMNS):
            raise ScenarioValidationError(f"{path}:{lineno}: ragged row")
        for name, part in zip(DIAG_COLUMNS, parts):
            columns[name].append(float(part))
    return DiagnosticsRecord.from_columns(m, {k: np.asarray(v) for k, v in columns.items()})


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass(frozen=True)
class RunManifest:
    scenario: dict
    code_version: str
    wall_time_s: float
    final_status: str
    files: dict  # relative path -> sha256
    stats: dict

    def to_json(self) -> str:
        return json.dumps(
            {
                "scenario": self.scenario,
                "code_version": self.code_version,
                "wall_time_s": self.wall_time_s,
                "final_status": self.final_status,
                "files": self.files,
                "stats": self.stats,
            },
            indent=2,
            sort_keys=True,
        )


def load_manifest(run_dir) -> RunManifest:
    path = Path(run_dir) / MANIFEST_NAME
    data = json.loads(path.read_text(encoding="utf-8"))
    return RunManifest(
        scenario=data["scenario"],
        code_version=data["code_version"],
        wall_time_s=data["wall_time_s"],
        final_status=data["final_status"],
        files=data["files"],
        stats=data["stats"],
    )


def snapshot_filename(prefix: str, t: float) -> str:
    return f"{prefix}_t{t:.6f}.cwf"


def run_scenario(s: Scenario, out_dir) -> RunManifest:
    """Execute a scenario and write snapshots, diagnostics and a manifest.

    The manifest is written last, so it only exists if every other output
    was written; a run that stops at suspected blow-up still succeeds and
    records its status.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    probe = out / ".write_probe"
    probe.write_bytes(b"")  # fail before simulating if the directory is read-only
    probe.unlink()

    t0 = time.perf_counter()
    traj: Trajectory = run_scenario_in_memory(s)
    wall = time.perf_counter() - t0

    files: dict[str, str] = {}
    for t_snap, u_f, v_f in traj.snapshots:
        for prefix, f in (("u", u_f), ("v", v_f)):
            fname = snapshot_filename(prefix, t_snap)
            write_snapshot(f, out / fname, t=t_snap, name=prefix)
            files[fname] = _sha256(out / fname)
    write_diagnostics_csv(traj.diagnostics, out / DIAGNOSTICS_NAME)
    files[DIAGNOSTICS_NAME] = _sha256(out / DIAGNOSTICS_NAME)

    stats = {
        "steps": traj.steps,
        "peak_linf_u": traj.peak_linf_u,
        "v0_min": _initial_min_v(traj),
        "clipped_mass_total": traj.clipped_mass_total,
        "mass_initial_u": traj.mass_initial_u,
        "mass_change_u": traj.mass_change_u,
        "reaction_mass_integral": traj.reaction_mass_integral,
        "max_flux_defect_rel": traj.max_flux_defect_rel,
        "last_unit_rel_change": traj.last_unit_rel_change,
        "termination": traj.termination,
        "n_snapshots": len(traj.snapshots),
        "n_diagnostic_rows": traj.diagnostics.n_rows,
    }

    manifest = RunManifest(
        scenario=s.raw_dict(),
        code_version=__version__,
        wall_time_s=wall,
        final_status=traj.final_status.value,
        files=files,
        stats=stats,
    )
    (out / MANIFEST_NAME).write_text(manifest.to_json(), encoding="utf-8")
    return manifest


def _initial_min_v(traj: Trajectory) -> float:
    # the first diagnostics row is always recorded at the initial state
    min_v0 = traj.diagnostics.column("min_v")
    return float(min_v0[0]) if len(min_v0) else float("nan")
