"""Scenario files: a flat key = value format describing one simulation.

Example::

    name = hotspot_relaxation
    grid.nx = 128
    grid.ny = 128
    model.m = 3.0
    model.chi = 10.0
    ic.kind = gaussian
    ic.sigma = 0.25
    t_end = 10.0
    output_times = [0.95, 1.2, 1.95, 9.95]

Lines hold one dotted key, an equals sign and a value; '#' starts a
comment.  Values are parsed as int, float, true/false, [comma lists] or
bare/quoted strings.  Unknown keys are rejected so typos cannot silently
change a run.
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import ScenarioParseError, ScenarioValidationError
from .grid import Grid, make_grid
from .integrator import StepControl, Trajectory, run
from .model import ModelParams, SimState, SourceTerm, gaussian_ic, initial_state
from .snapshots import read_snapshot

_GRID_DEFAULTS = {"grid.x_min": -3.0, "grid.x_max": 3.0, "grid.y_min": -3.0, "grid.y_max": 3.0}

_KNOWN_KEYS = {
    "name": str,
    "grid.x_min": float,
    "grid.x_max": float,
    "grid.y_min": float,
    "grid.y_max": float,
    "grid.nx": int,
    "grid.ny": int,
    "model.m": float,
    "model.chi": float,
    "model.eps": float,
    "model.b1": float,
    "model.b2": float,
    "model.regularized_reaction": bool,
    "ic.kind": str,
    "ic.sigma": float,
    "ic.u_path": str,
    "ic.v_path": str,
    "ic.u0": float,
    "ic.v0": float,
    "control.cfl_safety": float,
    "control.dt_min": float,
    "control.dt_max": float,
    "control.positivity_floor_v": float,
    "control.blowup_linf_threshold": float,
    "control.equilibrium_tol": float,
    "t_end": float,
    "output_times": list,
    "diagnostics.stride": int,
}

_REQUIRED_KEYS = ("name", "grid.nx", "grid.ny", "model.m", "model.chi", "t_end")


@dataclass(frozen=True)
class Scenario:
    """Validated description of one run; see load_scenario."""

    name: str
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int
    m: float
    chi: float
    eps: float
    b1: float
    b2: float
    regularized_reaction: bool
    ic_kind: str
    ic_sigma: float | None
    ic_u_path: str | None
    ic_v_path: str | None
    ic_u0: float | None
    ic_v0: float | None
    control_overrides: tuple[tuple[str, float], ...]
    t_end: float
    output_times: tuple[float, ...]
    diag_stride: int
    raw: tuple[tuple[str, object], ...]

    def raw_dict(self) -> dict:
        return {k: v for k, v in self.raw}


def _parse_value(text: str, lineno: int):
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise ScenarioParseError(f"line {lineno}: unclosed list {text!r}")
        inner = text[1:-1].strip()
        if not inner:
            return []
        return [_parse_value(part, lineno) for part in inner.split(",")]
    if text in ("true", "True"):
        return True
    if text in ("false", "False"):
        return False
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "'\"":
        return text[1:-1]
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    if not text:
        raise ScenarioParseError(f"line {lineno}: empty value")
    return text


def parse_scenario_text(text: str) -> dict:
    """Parse the key = value syntax into a raw dict; no schema checks yet."""
    out: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ScenarioParseError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if not key:
            raise ScenarioParseError(f"line {lineno}: missing key before '='")
        if key in out:
            raise ScenarioParseError(f"line {lineno}: duplicate key {key!r}")
        out[key] = _parse_value(value, lineno)
    return out


def _coerce(key: str, value, expected) -> object:
    if expected is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if expected is int and isinstance(value, int) and not isinstance(value, bool):
        return value
    if expected is bool and isinstance(value, bool):
        return value
    if expected is str and isinstance(value, str):
        return value
    if expected is list and isinstance(value, list):
        bad = [x for x in value if isinstance(x, bool) or not isinstance(x, (int, float))]
        if bad:
            raise ScenarioValidationError(f"field {key!r}: list entries must be numbers")
        return [float(x) for x in value]
    raise ScenarioValidationError(
        f"field {key!r}: expected {expected.__name__}, got {value!r}"
    )


def scenario_from_dict(data: dict) -> Scenario:
    """Validate a raw key dict and build a Scenario.

    Rejects unknown keys, missing required keys and values outside the
    ranges the downstream modules accept.
    """
    unknown = sorted(set(data) - set(_KNOWN_KEYS))
    if unknown:
        raise ScenarioValidationError(f"unknown scenario keys: {', '.join(unknown)}")
    for key in _REQUIRED_KEYS:
        if key not in data:
            raise ScenarioValidationError(f"missing required field {key!r}")
    values = dict(_GRID_DEFAULTS)
    values.update({k: _coerce(k, v, _KNOWN_KEYS[k]) for k, v in data.items()})

    m = values["model.m"]
    if m < 1.0:
        raise ScenarioValidationError(f"field 'model.m': must be >= 1, got {m}")
    chi = values["model.chi"]
    if not chi > 0.0:
        raise ScenarioValidationError(f"field 'model.chi': must be > 0, got {chi}")
    eps = values.get("model.eps", 1e-6)
    if eps < 0.0:
        raise ScenarioValidationError(f"field 'model.eps': must be >= 0, got {eps}")
    for src_key in ("model.b1", "model.b2"):
        if values.get(src_key, 1.0) < 0.0:
            raise ScenarioValidationError(f"field {src_key!r}: must be >= 0")
    nx, ny = values["grid.nx"], values["grid.ny"]
    if nx < 2 or ny < 2:
        raise ScenarioValidationError(f"field 'grid.nx/ny': need at least 2 cells, got {nx}x{ny}")
    if not values["grid.x_max"] > values["grid.x_min"]:
        raise ScenarioValidationError("field 'grid.x_max': must exceed grid.x_min")
    if not values["grid.y_max"] > values["grid.y_min"]:
        raise ScenarioValidationError("field 'grid.y_max': must exceed grid.y_min")

    ic_kind = values.get("ic.kind", "gaussian")
    if ic_kind not in ("gaussian", "file", "constant"):
        raise ScenarioValidationError(
            f"field 'ic.kind': expected gaussian, file or constant, got {ic_kind!r}"
        )
    if ic_kind == "gaussian":
        if "ic.sigma" not in values:
            raise ScenarioValidationError("field 'ic.sigma': required for gaussian initial data")
        if not values["ic.sigma"] > 0.0:
            raise ScenarioValidationError("field 'ic.sigma': must be > 0")
    if ic_kind == "file":
        for need in ("ic.u_path", "ic.v_path"):
            if need not in values:
                raise ScenarioValidationError(f"field {need!r}: required for file initial data")
    if ic_kind == "constant":
        for need in ("ic.u0", "ic.v0"):
            if need not in values:
                raise ScenarioValidationError(f"field {need!r}: required for constant initial data")
        if values["ic.u0"] < 0.0:
            raise ScenarioValidationError("field 'ic.u0': must be >= 0")
        if not values["ic.v0"] > 0.0:
            raise ScenarioValidationError("field 'ic.v0': must be > 0")

    t_end = values["t_end"]
    if not t_end > 0.0:
        raise ScenarioValidationError(f"field 't_end': must be > 0, got {t_end}")
    output_times = [float(x) for x in values.get("output_times", [])]
    if output_times != sorted(output_times):
        raise ScenarioValidationError("field 'output_times': must be sorted ascending")
    if output_times and (output_times[0] < 0.0 or output_times[-1] > t_end):
        raise ScenarioValidationError("field 'output_times': entries must lie in [0, t_end]")
    stride = values.get("diagnostics.stride", 1)
    if stride < 1:
        raise ScenarioValidationError(f"field 'diagnostics.stride': must be >= 1, got {stride}")

    control = tuple(
        (key.split(".", 1)[1], float(values[key]))
        for key in sorted(values)
        if key.startswith("control.")
    )
    # constructing the control object surfaces invalid override combinations
    try:
        StepControl(**dict(control))
    except Exception as err:
        raise ScenarioValidationError(f"field 'control.*': {err}") from None

    return Scenario(
        name=values["name"],
        x_min=values["grid.x_min"],
        x_max=values["grid.x_max"],
        y_min=values["grid.y_min"],
        y_max=values["grid.y_max"],
        nx=nx,
        ny=ny,
        m=m,
        chi=chi,
        eps=eps,
        b1=values.get("model.b1", 1.0),
        b2=values.get("model.b2", 1.0),
        regularized_reaction=values.get("model.regularized_reaction", False),
        ic_kind=ic_kind,
        ic_sigma=values.get("ic.sigma"),
        ic_u_path=values.get("ic.u_path"),
        ic_v_path=values.get("ic.v_path"),
        ic_u0=values.get("ic.u0"),
        ic_v0=values.get("ic.v0"),
        control_overrides=control,
        t_end=t_end,
        output_times=tuple(output_times),
        diag_stride=stride,
        raw=tuple(sorted(values.items())),
    )


def load_scenario(path) -> Scenario:
    path = Path(path)
    if not path.exists():
        raise ScenarioValidationError(f"scenario file not found: {path}")
    return scenario_from_dict(parse_scenario_text(path.read_text()))


def apply_overrides(scenario: Scenario, overrides: dict) -> Scenario:
    """Rebuild a scenario with raw keys replaced (values given as strings or numbers)."""
    data = scenario.raw_dict()
    for key, value in overrides.items():
        if isinstance(value, str):
            value = _parse_value(value, 0)
        data[key] = value
    return scenario_from_dict(data)


def build_grid(s: Scenario, nx: int | None = None, ny: int | None = None) -> Grid:
    return make_grid(s.x_min, s.x_max, s.y_min, s.y_max, nx or s.nx, ny or s.ny)


def build_params(s: Scenario) -> ModelParams:
    return ModelParams(
        m=s.m,
        chi=s.chi,
        eps=s.eps,
        b1=SourceTerm.const(s.b1),
        b2=SourceTerm.const(s.b2),
        regularized_reaction=s.regularized_reaction,
    )


def build_control(s: Scenario) -> StepControl:
    return StepControl(**dict(s.control_overrides))


def build_initial_state(s: Scenario, grid: Grid) -> SimState:
    if s.ic_kind == "gaussian":
        bump = gaussian_ic(grid, s.ic_sigma)
        return initial_state(grid, bump, bump)
    if s.ic_kind == "constant":
        return initial_state(grid, s.ic_u0, s.ic_v0)
    u0 = read_snapshot(s.ic_u_path)
    v0 = read_snapshot(s.ic_v_path)
    if u0.grid != grid or v0.grid != grid:
        raise ScenarioValidationError(
            "initial-data snapshots do not match the scenario grid"
        )
    return initial_state(grid, u0, v0)


def run_scenario_in_memory(
    s: Scenario, nx: int | None = None, ny: int | None = None
) -> Trajectory:
    """Execute a scenario and return the trajectory without touching disk."""
    grid = build_grid(s, nx, ny)
    params = build_params(s)
    ctrl = build_control(s)
    state = build_initial_state(s, grid)
    return run(
        state,
        params,
        ctrl,
        s.t_end,
        list(s.output_times),
        diag_stride=s.diag_stride,
    )


def bundled_scenario_path(name: str) -> Path:
    """Path of a scenario shipped with the package (name without extension)."""
    ref = resources.files("crimewave").joinpath("scenarios", f"{name}.scn")
    with resources.as_file(ref) as p:
        if not p.exists():
            raise ScenarioValidationError(f"no bundled scenario named {name!r}")
        return Path(p)


def bundled_scenario_names() -> list[str]:
    base = resources.files("crimewave").joinpath("scenarios")
    return sorted(p.name[:-4] for p in base.iterdir() if p.name.endswith(".scn"))
