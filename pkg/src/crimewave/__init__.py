"""Finite-volume simulator for a two-species crime hotspot model.

An offender density u spreads by density-dependent diffusion with exponent
m and drifts up the gradient of an attractiveness field v, which diffuses
linearly, grows with the crime rate u*v and decays at unit rate.  The
package integrates the pair on rectangles with no-flux boundaries, audits
discrete mass and positivity ledgers while it runs, and ships scenario,
snapshot and diagnostics tooling for reproducible experiments.
"""

__version__ = "0.1.0"

from .diagnostics import (
    DIAG_COLUMNS,
    BoundednessReport,
    ClassificationLabel,
    DiagnosticsRecord,
    boundedness_audit,
    min_v_lower_bound_check,
    record,
    refinement_blowup_classifier,
)
from .grid import Field, Grid, cell_integral, central_gradient, discrete_norm, make_grid
from .integrator import RunStatus, StepControl, Trajectory, run, stable_dt, step
from .model import (
    ModelParams,
    SimState,
    SimStatus,
    SourceTerm,
    eval_source,
    gaussian_ic,
    homogeneous_steady_state,
    initial_state,
)
from .operators import RhsPair, chemotaxis_div, laplacian_neumann, porous_diffusion_div, rhs_eval
from .scenario import Scenario, bundled_scenario_path, load_scenario, run_scenario_in_memory
from .snapshots import read_snapshot, read_snapshot_meta, write_snapshot
from .weakform import WeakResidualReport, seeded_test_functions, weak_residual

__all__ = [
    "__version__",
    "DIAG_COLUMNS",
    "BoundednessReport",
    "ClassificationLabel",
    "DiagnosticsRecord",
    "Field",
    "Grid",
    "ModelParams",
    "RhsPair",
    "RunStatus",
    "Scenario",
    "SimState",
    "SimStatus",
    "SourceTerm",
    "StepControl",
    "Trajectory",
    "WeakResidualReport",
    "boundedness_audit",
    "bundled_scenario_path",
    "cell_integral",
    "central_gradient",
    "chemotaxis_div",
    "discrete_norm",
    "eval_source",
    "gaussian_ic",
    "homogeneous_steady_state",
    "initial_state",
    "laplacian_neumann",
    "load_scenario",
    "make_grid",
    "min_v_lower_bound_check",
    "porous_diffusion_div",
    "read_snapshot",
    "read_snapshot_meta",
    "record",
    "refinement_blowup_classifier",
    "rhs_eval",
    "run",
    "run_scenario_in_memory",
    "seeded_test_functions",
    "stable_dt",
    "step",
    "weak_residual",
    "write_snapshot",
]
