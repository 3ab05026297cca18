"""Result files: density and diagnostics CSVs, sweep/comparison tables and the run manifest."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Sequence, Union

from delaylwr import __version__
from delaylwr.config.base import (
    COMPARISON_COLUMNS,
    CSV_FLOAT_FORMAT,
    DEFAULTS,
    DIAGNOSTICS_COLUMNS,
    OUTPUT_FILES,
    SWEEP_COLUMNS,
)
from delaylwr.config.logging import get_logger
from delaylwr.config.manager import RunConfig, atomic_write_text, config_to_mapping
from delaylwr.core.exceptions import OutputError
from delaylwr.core.grid import GridSpec, sup_norm
from delaylwr.diagnostics.horizon import (
    estimate_time_derivative_sup,
    guaranteed_horizon_geometric,
    horizon_partial_sum_delay,
    linf_delay_bound_slack,
)
from delaylwr.diagnostics.metrics import amplitude, count_waves, total_mass
from delaylwr.solver.models import Trajectory

logger = get_logger(__name__)

PathLike = Union[str, Path]


def fmt(value: Any) -> str:
    """Locale-independent text for one CSV cell."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value
    return format(float(value), CSV_FLOAT_FORMAT)


def _write_rows(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(value) for value in row])
    path = Path(path)
    atomic_write_text(path, buffer.getvalue())
    logger.debug(f"Wrote {path}")
    return path


def write_density_csv(traj: Trajectory, grid: GridSpec, path: PathLike) -> Path:
    """Header ``t,x0,...`` with the cell centers, then one row per snapshot.

    Raises:
        OutputError: On an empty trajectory or a failed write
    """
    if not traj.snapshots:
        raise OutputError("cannot write an empty trajectory", path=str(path))
    header = ["t", *(fmt(x) for x in grid.centers)]
    rows = ([t, *field_values] for t, field_values in traj.snapshots)
    return _write_rows(path, header, rows)


def write_diagnostics_csv(traj: Trajectory, path: PathLike) -> Path:
    rows = (
        (d.step, d.time, d.dt, d.mass, d.rho_min, d.rho_max_val, d.tv_space,
         d.tv_time_increment, d.linf_ok, d.tv_space_ok, d.overshoot, d.positive, d.tv_time_ok)
        for d in traj.diagnostics
    )
    return _write_rows(path, DIAGNOSTICS_COLUMNS, rows)


def write_sweep_csv(records: Iterable[Any], path: PathLike) -> Path:
    """One row per sweep record, ordered as given."""
    rows = (
        (r.delay_steps, r.final_amplitude, r.wave_count, r.overshoot_step, r.sg_flag, r.status)
        for r in records
    )
    return _write_rows(path, SWEEP_COLUMNS, rows)


def write_comparison_csv(report: Any, path: PathLike) -> Path:
    return _write_rows(path, COMPARISON_COLUMNS, report.amplitude_rows())


def _horizon_metrics(run_config: RunConfig, traj: Trajectory) -> Dict[str, Any]:
    """Guaranteed horizons and the delay-dependent L-infinity bound margin; report-only."""
    solver = run_config.solver
    grid = solver.grid
    rho0_sup = sup_norm(traj.initial_field)
    dt_rho_sup = estimate_time_derivative_sup(traj, grid.nx)
    geometric = guaranteed_horizon_geometric(grid.dx, rho0_sup)
    metrics: Dict[str, Any] = {
        "horizon_geometric": geometric if math.isfinite(geometric) else None,
        "dt_rho_sup": dt_rho_sup,
        "horizon_delay": None,
        "linf_delay_bound_slack": None,
    }
    # the physical delay is undefined under the adaptive policy
    delay_time = solver.delay_time
    if delay_time is None or traj.steps_taken < 1 or rho0_sup <= 0:
        return metrics
    delay_steps = solver.t_delay_steps
    if solver.force_undelayed:
        delay_steps, delay_time = 0, 0.0
    metrics["horizon_delay"] = horizon_partial_sum_delay(grid.dx, rho0_sup, dt_rho_sup, delay_time,
                                                         traj.steps_taken)
    metrics["linf_delay_bound_slack"] = linf_delay_bound_slack(traj, delay_steps, delay_time, dt_rho_sup)
    return metrics


@dataclass(slots=True)
class RunManifest:
    """Self-describing record of a run directory.

    ``config`` is the fully resolved configuration; feeding the manifest back
    to ``run --config`` reproduces the run.
    """

    config: Dict[str, Any]
    artifacts: Dict[str, str]
    termination: Dict[str, Any]
    metrics: Dict[str, Any]
    tool_version: str = __version__

    @classmethod
    def from_run(cls, run_config: RunConfig, traj: Trajectory,
                 artifacts: Optional[Dict[str, str]] = None,
                 min_prominence: float = DEFAULTS['wave_prominence']) -> "RunManifest":
        final = traj.final_field
        return cls(
            config=config_to_mapping(run_config),
            artifacts=dict(artifacts or {}),
            termination={"status": traj.termination.kind.value, "step": traj.termination.step},
            metrics={
                "steps": traj.steps_taken,
                "final_time": traj.final_time,
                "final_mass": total_mass(final, run_config.solver.grid),
                "final_amplitude": amplitude(final),
                "wave_count": count_waves(final, min_prominence),
                "first_overshoot_step": traj.first_overshoot_step,
                **_horizon_metrics(run_config, traj),
            },
        )

    def to_mapping(self) -> Dict[str, Any]:
        return asdict(self)


def write_manifest(manifest: RunManifest, path: PathLike) -> Path:
    path = Path(path)
    atomic_write_text(path, json.dumps(manifest.to_mapping(), indent=2) + "\n")
    logger.debug(f"Wrote {path}")
    return path


def write_run(run_config: RunConfig, traj: Trajectory, out_dir: PathLike) -> RunManifest:
    """Write density CSV, diagnostics CSV and manifest into ``out_dir``."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create output directory {out_dir}", path=str(out_dir),
                          original_error=exc) from exc
    write_density_csv(traj, run_config.solver.grid, out_dir / OUTPUT_FILES['density'])
    write_diagnostics_csv(traj, out_dir / OUTPUT_FILES['diagnostics'])
    artifacts = {key: OUTPUT_FILES[key] for key in ("density", "diagnostics")}
    manifest = RunManifest.from_run(run_config, traj, artifacts)
    write_manifest(manifest, out_dir / OUTPUT_FILES['manifest'])
    logger.info(f"Results written to {out_dir}")
    return manifest

