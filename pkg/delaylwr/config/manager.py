#!/usr/bin/env python3
"""
Run configuration management: parse, validate and serialize YAML run configs.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import yaml

from delaylwr.config.base import (
    BOUNDARY_KINDS,
    DEFAULTS,
    DT_KINDS,
    FEASIBILITY_POLICIES,
    INITIAL_KINDS,
    STOP_KINDS,
    VELOCITY_KINDS,
)
from delaylwr.config.logging import get_logger
from delaylwr.core.exceptions import ConfigurationError, LoggedError, OutputError
from delaylwr.core.grid import DensityField, grid_new
from delaylwr.experiments.initial import (
    CellPerturbation,
    Constant,
    InitialCondition,
    Riemann,
    Sinusoidal,
)
from delaylwr.model.velocity import CutPiecewise, Greenshields, VelocityModel, validate_velocity_model
from delaylwr.solver.models import (
    AdaptiveStep,
    Dirichlet,
    Feasibility,
    FinalTime,
    FixedStep,
    MaxSteps,
    Periodic,
    SolverConfig,
)

logger = get_logger(__name__)

TOP_LEVEL_KEYS = {
    "name", "grid", "bc", "delay_steps", "dt", "stop", "feasibility",
    "velocity", "initial", "snapshot_every", "force_undelayed",
}
SECTION_KEYS = {
    "grid": {"a", "b", "nx"},
    "bc": {"kind", "left", "right"},
    "dt": {"kind", "value", "safety"},
    "stop": {"kind", "value"},
    "velocity": {"kind", "v_max", "rho_max", "rho_f", "rho_c", "alpha"},
    "initial": {"kind", "k", "left", "right", "x_jump", "ambient", "bump", "lo", "hi", "value"},
}
INITIAL_FIELDS = {
    "sinusoidal": ("k",),
    "riemann": ("left", "right", "x_jump"),
    "perturbation": ("ambient", "bump", "lo", "hi"),
    "constant": ("value",),
}


@dataclass(frozen=True, slots=True)
class RunConfig:
    """A fully resolved run: solver settings, velocity closure and initial rule."""

    solver: SolverConfig
    velocity: VelocityModel
    initial: InitialCondition
    snapshot_every: int = DEFAULTS['snapshot_every']
    name: Optional[str] = None

    def initial_field(self) -> DensityField:
        return self.initial.build(self.solver.grid)


def _reject(message: str, value: Any = None, rule: Optional[str] = None):
    LoggedError.log_and_raise(logger, ConfigurationError, message, invalid_value=value, validation_rule=rule)


def _check_keys(section: str, data: Mapping[str, Any], allowed: set) -> None:
    unknown = sorted(set(data) - allowed)
    if unknown:
        where = f"in '{section}'" if section else "at top level"
        _reject(f"unknown configuration key(s) {where}: {', '.join(unknown)}", unknown,
                f"allowed: {', '.join(sorted(allowed))}")


def _section(data: Mapping[str, Any], key: str, required: bool = False) -> Dict[str, Any]:
    value = data.get(key)
    if value is None:
        if required:
            _reject(f"missing required section '{key}'", None, f"'{key}' is required")
        return {}
    if not isinstance(value, Mapping):
        _reject(f"'{key}' must be a mapping, got {type(value).__name__}", value)
    _check_keys(key, value, SECTION_KEYS[key])
    return dict(value)


def _number(path: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _reject(f"'{path}' must be a number, got {value!r}", value)
    return float(value)


def _integer(path: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        if isinstance(value, float) and value.is_integer():
            return int(value)
        _reject(f"'{path}' must be an integer, got {value!r}", value)
    return int(value)


def _choice(path: str, value: Any, choices: list) -> str:
    if value not in choices:
        _reject(f"'{path}' must be one of {', '.join(choices)}, got {value!r}", value)
    return value


def _require(section: str, data: Mapping[str, Any], key: str) -> Any:
    if key not in data:
        _reject(f"missing required key '{section}.{key}'", None, f"'{section}.{key}' is required")
    return data[key]


def _velocity_from(data: Mapping[str, Any]) -> VelocityModel:
    kind = _choice("velocity.kind", data.get("kind", "greenshields"), VELOCITY_KINDS)
    v_max = _number("velocity.v_max", data.get("v_max", DEFAULTS['v_max']))
    rho_max = _number("velocity.rho_max", data.get("rho_max", DEFAULTS['rho_max']))
    if kind == "greenshields":
        extra = sorted({"rho_f", "rho_c", "alpha"} & set(data))
        if extra:
            _reject(f"greenshields velocity does not take {', '.join(extra)}", extra)
        model: VelocityModel = Greenshields(v_max=v_max, rho_max=rho_max)
    else:
        rho_f = _number("velocity.rho_f", _require("velocity", data, "rho_f"))
        rho_c = _number("velocity.rho_c", _require("velocity", data, "rho_c"))
        alpha = data.get("alpha", "auto")
        if alpha == "auto":
            model = CutPiecewise.continuous(v_max, rho_f, rho_c, rho_max=rho_max)
        else:
            model = CutPiecewise(v_max=v_max, rho_f=rho_f, rho_c=rho_c,
                                 alpha=_number("velocity.alpha", alpha), rho_max=rho_max)
    return validate_velocity_model(model)


def _initial_from(data: Mapping[str, Any]) -> InitialCondition:
    kind = _choice("initial.kind", _require("initial", data, "kind"), INITIAL_KINDS)
    extra = sorted(set(data) - {"kind", *INITIAL_FIELDS[kind]})
    if extra:
        _reject(f"initial kind '{kind}' does not take {', '.join(extra)}", extra)
    values = {key: _require("initial", data, key) for key in INITIAL_FIELDS[kind]}
    if kind == "sinusoidal":
        return Sinusoidal(k=_integer("initial.k", values["k"]))
    numbers = {key: _number(f"initial.{key}", value) for key, value in values.items()}
    if kind == "riemann":
        return Riemann(**numbers)
    if kind == "perturbation":
        return CellPerturbation(**numbers)
    return Constant(**numbers)


def config_from_mapping(data: Mapping[str, Any]) -> RunConfig:
    """Build and fully validate a RunConfig from a parsed mapping.

    A run manifest is accepted too: its ``config`` member is unwrapped.

    Raises:
        ConfigurationError: Unknown keys, wrong types or a violated invariant
    """
    if not isinstance(data, Mapping):
        _reject("configuration root must be a mapping", data)
    if "config" in data and "tool_version" in data:
        data = data["config"]
        if not isinstance(data, Mapping):
            _reject("manifest 'config' member must be a mapping", data)
    _check_keys("", data, TOP_LEVEL_KEYS)

    grid_data = _section(data, "grid", required=True)
    grid = grid_new(_number("grid.a", _require("grid", grid_data, "a")),
                    _number("grid.b", _require("grid", grid_data, "b")),
                    _integer("grid.nx", _require("grid", grid_data, "nx")))

    bc_data = _section(data, "bc")
    bc_kind = _choice("bc.kind", bc_data.get("kind", "periodic"), BOUNDARY_KINDS)
    if bc_kind == "periodic":
        if {"left", "right"} & set(bc_data):
            _reject("periodic boundary does not take left/right values", bc_data)
        bc = Periodic()
    else:
        bc = Dirichlet(left_value=_number("bc.left", _require("bc", bc_data, "left")),
                       right_value=_number("bc.right", _require("bc", bc_data, "right")))

    dt_data = _section(data, "dt")
    dt_kind = _choice("dt.kind", dt_data.get("kind", "fixed"), DT_KINDS)
    if dt_kind == "fixed":
        if "safety" in dt_data:
            _reject("fixed dt does not take 'dt.safety'", dt_data["safety"])
        dt_policy = FixedStep(dt=_number("dt.value", _require("dt", dt_data, "value")))
    else:
        if "value" in dt_data:
            _reject("adaptive dt does not take 'dt.value'", dt_data["value"])
        dt_policy = AdaptiveStep(safety=_number("dt.safety", dt_data.get("safety", DEFAULTS['safety'])))

    stop_data = _section(data, "stop")
    stop_kind = _choice("stop.kind", stop_data.get("kind", "time"), STOP_KINDS)
    if stop_kind == "steps":
        stop = MaxSteps(n=_integer("stop.value", _require("stop", stop_data, "value")))
    else:
        stop = FinalTime(t_f=_number("stop.value", stop_data.get("value", DEFAULTS['t_final'])))

    feasibility = Feasibility(_choice("feasibility", data.get("feasibility", DEFAULTS['feasibility']),
                                      FEASIBILITY_POLICIES))
    force_undelayed = data.get("force_undelayed", False)
    if not isinstance(force_undelayed, bool):
        _reject(f"'force_undelayed' must be a boolean, got {force_undelayed!r}", force_undelayed)

    solver = SolverConfig(
        grid=grid,
        bc=bc,
        t_delay_steps=_integer("delay_steps", data.get("delay_steps", 0)),
        dt_policy=dt_policy,
        stop=stop,
        feasibility=feasibility,
        force_undelayed=force_undelayed,
    )
    velocity = _velocity_from(_section(data, "velocity"))
    initial = _initial_from(_section(data, "initial", required=True))
    snapshot_every = _integer("snapshot_every", data.get("snapshot_every", DEFAULTS['snapshot_every']))
    if snapshot_every < 1:
        _reject(f"'snapshot_every' must be >= 1, got {snapshot_every}", snapshot_every)
    name = data.get("name")
    if name is not None and not isinstance(name, str):
        _reject(f"'name' must be a string, got {name!r}", name)

    run_config = RunConfig(solver=solver, velocity=velocity, initial=initial,
                           snapshot_every=snapshot_every, name=name)
    solver.validate(run_config.initial_field(), velocity)
    return run_config


def config_to_mapping(config: RunConfig) -> Dict[str, Any]:
    """Fully resolved mapping (defaults expanded) that config_from_mapping reads back identically."""
    solver = config.solver
    mapping: Dict[str, Any] = {
        "name": config.name,
        "grid": {"a": solver.grid.a, "b": solver.grid.b, "nx": solver.grid.nx},
        "bc": solver.bc.to_mapping(),
        "delay_steps": solver.t_delay_steps,
        "dt": solver.dt_policy.to_mapping(),
        "stop": solver.stop.to_mapping(),
        "feasibility": solver.feasibility.value,
        "force_undelayed": solver.force_undelayed,
        "velocity": config.velocity.to_mapping(),
        "initial": config.initial.to_mapping(),
        "snapshot_every": config.snapshot_every,
    }
    if config.name is None:
        del mapping["name"]
    return mapping


def parse_config_text(text: str, source: str = "<string>") -> RunConfig:
    """Parse YAML text into a validated RunConfig.

    Raises:
        ConfigurationError: Parse errors (with line number) or validation errors
    """
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise ConfigurationError(f"cannot parse {source}{where}", original_error=exc) from exc
    if data is None:
        _reject(f"{source} is empty")
    return config_from_mapping(data)


def parse_config(path: Union[str, Path]) -> RunConfig:
    """Read and validate a YAML run configuration (or a run manifest).

    Raises:
        ConfigurationError: Missing file, parse error or violated invariant
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read configuration file {path}", original_error=exc) from exc
    config = parse_config_text(text, source=str(path))
    logger.info(f"Configuration loaded from {path}")
    return config


def serialize_config(config: RunConfig) -> str:
    return yaml.safe_dump(config_to_mapping(config), sort_keys=False)


def atomic_write_text(path: Path, text: str) -> None:
    """Write text to a temporary sibling and move it into place."""
    temp_file = path.with_suffix(path.suffix + '.tmp')
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(temp_file, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        temp_file.replace(path)
    except OSError as exc:
        if temp_file.exists():
            temp_file.unlink()
        logger.error(f"Failed to write {path}: {exc}")
        raise OutputError(f"cannot write {path}", path=str(path), original_error=exc) from exc


def save_config(config: RunConfig, path: Union[str, Path]) -> Path:
    """Save the fully resolved configuration atomically as YAML."""
    path = Path(path)
    atomic_write_text(path, serialize_config(config))
    logger.info(f"Configuration saved to {path}")
    return path
