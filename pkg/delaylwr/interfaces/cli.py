#!/usr/bin/env python3
# cli.py
"""Command-line entry point for the delayed LWR simulator."""

import sys
from pathlib import Path
from typing import List, NoReturn, Optional

from rich.console import Console
from rich.table import Table

try:
    import typer
    from typer import Argument, Option
except ImportError:
    print("Typer is required. Install with: pip install typer[all]")
    sys.exit(1)

# recent typer releases bundle their own copy of click
try:
    from typer._click.exceptions import Abort, ClickException
except ImportError:
    from click.exceptions import Abort, ClickException

from delaylwr.config.base import EXIT_CODES, OUTPUT_FILES
from delaylwr.config.logging import SimulationLogger, get_log_info, get_logger
from delaylwr.config.manager import RunConfig, parse_config
from delaylwr.core.exceptions import SimulationException
from delaylwr.experiments.analysis import (
    compare_delayed_undelayed,
    delay_sweep,
    parse_delay_range,
)
from delaylwr.experiments.presets import Preset, default_store
from delaylwr.interfaces.output import (
    write_comparison_csv,
    write_run,
    write_sweep_csv,
)
from delaylwr.solver.models import Termination, TerminationKind, Trajectory
from delaylwr.solver.runner import SimulationRunner

console = Console()
err_console = Console(stderr=True)
logger = get_logger(__name__)

app = typer.Typer(
    name="delaylwr",
    help="Delayed LWR traffic simulator (altered Lax-Friedrichs scheme)",
    add_completion=False,
)


def exit_code_for(termination: Termination) -> int:
    if termination.kind is TerminationKind.FEASIBILITY_ABORT:
        return EXIT_CODES['feasibility_abort']
    if termination.kind is TerminationKind.CFL_COLLAPSE:
        return EXIT_CODES['cfl_collapse']
    return EXIT_CODES['completed']


def _enable_debug() -> None:
    SimulationLogger.set_debug_mode(True)
    log_file = get_log_info()["log_file"]
    logger.debug(f"Debug logging enabled, log file: {log_file or 'console only'}")


def _fail(exc: Exception) -> NoReturn:
    logger.debug(f"Command failed: {exc}")
    err_console.print(f"[red]Error: {exc}[/red]")
    raise typer.Exit(EXIT_CODES['usage'])


def _simulate(run_config: RunConfig) -> Trajectory:
    runner = SimulationRunner(run_config.solver, run_config.velocity, run_config.snapshot_every)
    return runner.run(run_config.initial_field())


def _report_run(label: str, trajectory: Trajectory, out_dir: Path) -> None:
    status = trajectory.termination.describe()
    style = "green" if trajectory.termination.completed else "yellow"
    console.print(f"[{style}]{label}: {status}[/{style}] after {trajectory.steps_taken} steps, "
                  f"t = {trajectory.final_time:.6g} -> {out_dir}")
    if trajectory.first_overshoot_step is not None:
        err_console.print(f"[yellow]Density exceeded rho_max first at step "
                          f"{trajectory.first_overshoot_step}[/yellow]")


def _run_and_write(run_config: RunConfig, out: Path, label: str) -> int:
    trajectory = _simulate(run_config)
    write_run(run_config, trajectory, out)
    _report_run(label, trajectory, out)
    return exit_code_for(trajectory.termination)


def _load_preset(name: str, t_final: Optional[float] = None, delay: Optional[int] = None) -> Preset:
    selected = default_store().get(name)
    if delay is not None:
        selected = selected.with_delay(delay)
    if t_final is not None:
        selected = selected.with_final_time(t_final)
    return selected


@app.callback()
def callback():
    """
    Simulate the delayed Lighthill-Whitham-Richards traffic model.

    \b
    delaylwr run --config run.yaml --out results/
    delaylwr preset test0 --out results/ [--t-final 3] [--delay 15]
    delaylwr compare --preset test0 --out results/
    delaylwr sweep --preset test2 --delays 4..12 --out results/
    delaylwr presets

    Exit codes: 0 completed, 1 usage or configuration error,
    2 feasibility abort (density above rho_max), 3 time step collapse.
    """


@app.command()
def run(
    config: Path = Option(..., "--config", "-c", help="YAML run configuration or a run manifest"),
    out: Path = Option(..., "--out", "-o", help="Output directory"),
    debug: bool = Option(False, "--debug", help="Enable debug logging"),
) -> None:
    """Run a simulation described by a configuration file."""
    if debug:
        _enable_debug()
    try:
        run_config = parse_config(config)
        code = _run_and_write(run_config, out, run_config.name or config.stem)
    except SimulationException as exc:
        _fail(exc)
    raise typer.Exit(code)


@app.command()
def preset(
    name: str = Argument(..., help="Preset name, see `delaylwr presets`"),
    out: Path = Option(..., "--out", "-o", help="Output directory"),
    t_final: Optional[float] = Option(None, "--t-final", help="Override the final time"),
    delay: Optional[int] = Option(None, "--delay", help="Override the delay in steps"),
    debug: bool = Option(False, "--debug", help="Enable debug logging"),
) -> None:
    """Run a named experiment preset."""
    if debug:
        _enable_debug()
    try:
        selected = _load_preset(name, t_final, delay)
        code = _run_and_write(selected.run_config, out, selected.name)
    except SimulationException as exc:
        _fail(exc)
    raise typer.Exit(code)


@app.command()
def compare(
    preset_name: str = Option(..., "--preset", "-p", help="Preset to compare with its undelayed twin"),
    out: Path = Option(..., "--out", "-o", help="Output directory"),
    debug: bool = Option(False, "--debug", help="Enable debug logging"),
) -> None:
    """Run a preset and its delay-free twin and compare their amplitudes."""
    if debug:
        _enable_debug()
    try:
        base = _load_preset(preset_name)
        report = compare_delayed_undelayed(base)
        write_run(base.run_config, report.delayed, out / "delayed")
        write_run(base.with_delay(0).run_config, report.undelayed, out / "undelayed")
        write_comparison_csv(report, out / OUTPUT_FILES['comparison'])
    except SimulationException as exc:
        _fail(exc)

    table = Table(title=f"{base.name}: delayed vs undelayed")
    table.add_column("Run", style="cyan")
    table.add_column("Final amplitude", justify="right")
    table.add_column("Status")
    table.add_row("initial", f"{report.initial_amplitude:.6g}", "")
    table.add_row(f"delay {report.delay_steps}", f"{report.final_amplitude_delayed:.6g}",
                  report.delayed.termination.describe())
    table.add_row("delay 0", f"{report.final_amplitude_undelayed:.6g}",
                  report.undelayed.termination.describe())
    console.print(table)
    console.print(f"Amplitude ratio delayed/undelayed: {report.ratio:.6g}")

    codes = [exit_code_for(t.termination) for t in (report.delayed, report.undelayed)]
    raise typer.Exit(next((c for c in codes if c), EXIT_CODES['completed']))


@app.command()
def sweep(
    preset_name: str = Option(..., "--preset", "-p", help="Preset to sweep"),
    delays: str = Option(..., "--delays", "-d", help="Delays in steps, K1..K2 or K1,K2,..."),
    out: Path = Option(..., "--out", "-o", help="Output directory"),
    workers: Optional[int] = Option(None, "--workers", help="Parallel runs"),
    debug: bool = Option(False, "--debug", help="Enable debug logging"),
) -> None:
    """Run a preset once per delay; per-run failures are recorded, not fatal."""
    if debug:
        _enable_debug()
    try:
        base = _load_preset(preset_name)
        records = delay_sweep(base, parse_delay_range(delays), max_workers=workers)
        for record in records:
            if record.trajectory is not None:
                write_run(base.with_delay(record.delay_steps).run_config, record.trajectory,
                          out / f"delay_{record.delay_steps}")
        write_sweep_csv(records, out / OUTPUT_FILES['sweep'])
    except SimulationException as exc:
        _fail(exc)

    table = Table(title=f"Delay sweep of {base.name}")
    for column in ("Delay", "Final amplitude", "Waves", "Overshoot step", "S&G", "Status"):
        table.add_column(column)
    for record in records:
        table.add_row(
            str(record.delay_steps),
            f"{record.final_amplitude:.6g}",
            "" if record.wave_count is None else str(record.wave_count),
            "" if record.overshoot_step is None else str(record.overshoot_step),
            "yes" if record.sg_flag else "no",
            record.status if record.error is None else f"error: {record.error}",
        )
    console.print(table)
    raise typer.Exit(EXIT_CODES['completed'])


@app.command("presets")
def list_presets(
    debug: bool = Option(False, "--debug", help="Enable debug logging"),
) -> None:
    """List the available experiment presets."""
    if debug:
        _enable_debug()
    table = Table(title="Experiment presets")
    table.add_column("Name", style="cyan")
    table.add_column("Delay", justify="right")
    table.add_column("Description")
    for item in default_store().load_all():
        table.add_row(item.name, str(item.solver_config.t_delay_steps), item.description)
    console.print(table)


def cli_main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI on ``argv`` and return the process exit code."""
    try:
        result = app(args=argv, prog_name="delaylwr", standalone_mode=False)
    except ClickException as exc:
        exc.show(file=sys.stderr)
        return EXIT_CODES['usage']
    except Abort:
        err_console.print("[red]Aborted[/red]")
        return EXIT_CODES['usage']
    return result if isinstance(result, int) else EXIT_CODES['completed']


def main() -> None:
    sys.exit(cli_main())


if __name__ == '__main__':
    main()
