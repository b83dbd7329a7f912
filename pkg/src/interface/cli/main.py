"""Command-line entry point: simulate, theory, sweep, check and figure."""

import functools
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import click

from compboot import __version__
from src.application.experiment_service import (
    DEFAULT_OUTPUTS,
    AggregateResult,
    ExperimentPlan,
    Simulator,
    Statistic,
    run_plan,
)
from src.application.figures import FIGURE_HEADER, Figure, figure_data, write_figure_csv
from src.application.theorem_checks import Suite, SuiteReport, theorem_checks
from src.domain.chain.simulator import run_chain
from src.domain.exact.simulator import run_exact
from src.domain.models.errors import (
    BudgetExceeded,
    CapExceeded,
    ConfigError,
    DomainError,
    HardInvariantViolation,
    TrackingDisabled,
)
from src.domain.models.params import Regime, RegimeSpec
from src.domain.models.results import ModeSpec, RunMode, StopKind, StopRule
from src.domain.theory.prediction import predict, theory_table
from src.infrastructure.config import get_settings, reset_settings
from src.infrastructure.config_file import RunConfig, load_config
from src.infrastructure.export import (
    provenance,
    result_payload,
    write_json,
    write_rows,
    write_trajectory_csv,
)

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# Errors caused by the invocation rather than by the program.
USAGE_ERRORS = (
    ConfigError,
    HardInvariantViolation,
    DomainError,
    BudgetExceeded,
    CapExceeded,
    TrackingDisabled,
    FileNotFoundError,
)


def setup_logging(verbosity: int) -> None:
    """0 -> CB_LOG_LEVEL (WARNING), 1 -> INFO, 2-3 -> DEBUG; 3 also turns on audits."""
    if verbosity >= 3:
        os.environ["CB_AUDIT"] = "1"
        reset_settings()
    if verbosity == 0:
        level = getattr(logging, get_settings().log_level.upper(), logging.WARNING)
    else:
        level = logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def parse_stop_rule(text: Optional[str]) -> Optional[StopRule]:
    """Parse ``KIND:VALUE`` (time, step or red_count) into a StopRule.

    Raises:
        click.BadParameter: If the text is malformed
    """
    if text is None:
        return None
    kind, sep, value = text.partition(":")
    try:
        return StopRule(StopKind(kind.strip()), float(value))
    except ValueError as e:
        if not sep:
            raise click.BadParameter(f"expected KIND:VALUE, got {text!r}") from e
        raise click.BadParameter(f"bad stop rule {text!r}: {e}") from e


def build_mode(mode: str, stop: Optional[str]) -> ModeSpec:
    rule = parse_stop_rule(stop)
    if mode == RunMode.STOPPED.value:
        if rule is None:
            raise click.BadParameter("--mode stopped needs --stop KIND:VALUE")
        return ModeSpec.stopped(rule)
    if rule is not None:
        raise click.BadParameter("--stop only applies to --mode stopped")
    return ModeSpec.prolonged() if mode == RunMode.PROLONGED.value else ModeSpec.standard()


def parse_floats(text: str) -> Tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as e:
        raise click.BadParameter(f"expected comma-separated numbers, got {text!r}") from e


def reports_errors(command: Callable) -> Callable:
    """Map usage errors to exit 2 and anything unexpected to exit 1."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except USAGE_ERRORS as e:
            click.secho(f"Error: {e}", fg="red", err=True)
            sys.exit(2)
        except click.ClickException:
            raise
        except Exception as e:
            logger.exception("Unexpected error")
            click.secho(f"Unexpected error: {e}", fg="red", err=True)
            sys.exit(1)

    return wrapper


def config_options(command: Callable) -> Callable:
    """Options shared by every subcommand that reads a run configuration."""
    options = [
        click.option(
            "--config",
            "config_path",
            type=click.Path(path_type=Path, dir_okay=False),
            help="Flat key = value config file",
        ),
        click.option(
            "--set",
            "overrides",
            multiple=True,
            metavar="KEY=VALUE",
            help="Override a config key (repeatable, last wins)",
        ),
        click.option("--n", type=int, help="Number of nodes"),
        click.option("--p", type=float, help="Edge probability"),
        click.option("--r", type=int, help="Activation threshold"),
        click.option("--a_r", "a_r", type=int, help="Red seeds"),
        click.option("--a_b", "a_b", type=int, help="Black seeds"),
        click.option("--seed", type=int, help="Master seed"),
        click.option(
            "--regime",
            type=click.Choice([regime.value for regime in Regime]),
            help="Scaling of q",
        ),
        click.option("--alpha_r", "alpha_r", type=float, help="Red seed density a_R/q"),
        click.option("--alpha_b", "alpha_b", type=float, help="Black seed density a_B/q"),
        click.option("--q", type=float, help="Time-scale q"),
        click.option(
            "--out-dir",
            type=click.Path(path_type=Path, file_okay=False),
            default=Path("compboot_out"),
            show_default=True,
            help="Directory for every output file",
        ),
        click.option(
            "-v", "--verbose", "verbosity", count=True, help="-v INFO, -vv DEBUG, -vvv audits"
        ),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def resolve_config(options: Dict[str, Any]) -> RunConfig:
    """Config file, then --set overrides, then direct flags."""
    setup_logging(min(options.pop("verbosity"), 3))
    flags = {
        "n": options.pop("n"),
        "p": options.pop("p"),
        "r": options.pop("r"),
        "a_R": options.pop("a_r"),
        "a_B": options.pop("a_b"),
        "seed": options.pop("seed"),
        "regime": options.pop("regime"),
        "alpha_R": options.pop("alpha_r"),
        "alpha_B": options.pop("alpha_b"),
        "q": options.pop("q"),
    }
    return load_config(options.pop("config_path"), options.pop("overrides"), flags)


@click.group()
@click.version_option(version=__version__, prog_name="compboot")
def cli():
    """Competing red/black bootstrap percolation on G(n, p).

    Examples:

        # One chain run of the canonical subcritical instance
        compboot simulate --n 100000 --p 1e-4 --regime q_equals_g --alpha_r 0.8 --alpha_b 0.5

        # Limits for r = 2, alpha_R = 2, alpha_B = 0.75
        compboot theory --regime q_equals_g --alpha_r 2 --alpha_b 0.75

        # Acceptance suite at a tenth of the replications
        compboot check --suite subcritical --scale 0.1
    """


@cli.command()
@config_options
@click.option(
    "--simulator",
    type=click.Choice([s.value for s in Simulator]),
    default=Simulator.CHAIN.value,
    show_default=True,
)
@click.option(
    "--mode",
    type=click.Choice([m.value for m in RunMode]),
    default=RunMode.STANDARD.value,
    show_default=True,
)
@click.option("--stop", metavar="KIND:VALUE", help="Stop rule: time, step or red_count")
@click.option("--trajectory", is_flag=True, help="Also write trajectory.csv")
@click.option("--stride", type=click.IntRange(min=1), help="Trajectory stride (chain)")
@click.option("--max-steps", type=click.IntRange(min=1), help="Truncate after this many steps")
@reports_errors
def simulate(simulator, mode, stop, trajectory, stride, max_steps, **options):
    """Run one instance and write result.json (and trajectory.csv)."""
    out_dir: Path = options.pop("out_dir")
    config = resolve_config(options)
    params = config.model_params()
    regime = config.regime_spec()
    mode_spec = build_mode(mode, stop)

    if simulator == Simulator.EXACT.value:
        result = run_exact(
            params,
            mode=mode_spec,
            trajectory=trajectory,
            trajectory_stride=stride or 1,
            max_steps=max_steps,
        )
    else:
        result = run_chain(
            params,
            mode=mode_spec,
            regime=regime,
            trajectory=trajectory,
            stride=stride,
            max_steps=max_steps,
        )
    if config.seed_rounding():
        result.metadata["seed_rounding"] = config.seed_rounding()

    plan = {"command": "simulate", "simulator": simulator, "config": config.to_dict()}
    plan["mode"] = mode
    if stop:
        plan["stop"] = stop
    payload = result_payload(result, plan)
    write_json(payload, out_dir / "result.json")
    if trajectory and result.trajectory is not None:
        write_trajectory_csv(
            result.trajectory, out_dir / "trajectory.csv", payload["provenance"]
        )
    summary = {
        "A_R*": result.a_r_star,
        "A_B*": result.a_b_star,
        "K*": result.k_star,
        "T_K*": result.t_k_star,
    }
    click.echo(json.dumps(summary))


@cli.command()
@config_options
@click.option("--table", is_flag=True, help="Print the kappa_f / limit table row instead")
@reports_errors
def theory(table, **options):
    """Print the asymptotic prediction for a regime."""
    out_dir: Path = options.pop("out_dir")
    config = resolve_config(options)
    if not config.has_regime:
        raise ConfigError("theory needs regime, alpha_R and alpha_B")
    if config.n is not None and config.p is not None:
        spec = config.regime_spec()
    else:
        spec = RegimeSpec(config.regime, config.alpha_r, config.alpha_b, config.q or 1.0)

    if table:
        rows = theory_table([spec], config.r)
        for key, value in rows[0].items():
            click.echo(f"{key} = {value}")
        data = {"table": rows}
    else:
        prediction = predict(spec, config.r, config.n, config.p)
        data = prediction.to_dict()
        for key, value in data.items():
            click.echo(f"{key} = {value}")
    data["provenance"] = provenance(config.seed, {"command": "theory", "config": config.to_dict()})
    write_json(data, out_dir / "theory.json")


def _plan_from_config(
    config: RunConfig,
    replications: int,
    simulator: str,
    mode: ModeSpec,
    stats: Tuple[str, ...],
    kappa: float,
) -> ExperimentPlan:
    outputs = tuple(Statistic(s) for s in stats) if stats else DEFAULT_OUTPUTS
    sweep = tuple((name, tuple(values)) for name, values in config.sweep.items())
    return ExperimentPlan(
        base=config.model_params(),
        regime=config.regime_spec(),
        sweep=sweep,
        replications=replications,
        simulator=Simulator(simulator),
        mode=mode,
        outputs=outputs,
        kappa=kappa,
    )


def write_aggregate(result: AggregateResult, out_dir: Path, stem: str) -> None:
    data = result.to_dict()
    write_rows(
        out_dir / f"{stem}.csv",
        AggregateResult.CSV_HEADER,
        result.rows(),
        data["provenance"],
    )
    write_json(data, out_dir / f"{stem}.json")


@cli.command()
@config_options
@click.option("--replications", type=click.IntRange(min=1), default=100, show_default=True)
@click.option(
    "--simulator",
    type=click.Choice([s.value for s in Simulator]),
    default=Simulator.CHAIN.value,
    show_default=True,
)
@click.option(
    "--mode",
    type=click.Choice([m.value for m in RunMode]),
    default=RunMode.STANDARD.value,
    show_default=True,
)
@click.option("--stop", metavar="KIND:VALUE", help="Stop rule: time, step or red_count")
@click.option(
    "--stat",
    "stats",
    multiple=True,
    type=click.Choice([s.value for s in Statistic]),
    help="Statistic to aggregate (repeatable)",
)
@click.option("--kappa", type=float, default=1.0, show_default=True, help="kappa for eta_T_kappa")
@click.option("--workers", type=click.IntRange(min=1), help="Process count (default CB_THREADS)")
@reports_errors
def sweep(replications, simulator, mode, stop, stats, kappa, workers, **options):
    """Run a plan over the config's sweep.<param> axes; writes sweep.csv and sweep.json."""
    out_dir: Path = options.pop("out_dir")
    config = resolve_config(options)
    plan = _plan_from_config(config, replications, simulator, build_mode(mode, stop), stats, kappa)
    result = run_plan(plan, workers)
    write_aggregate(result, out_dir, "sweep")
    for point in result.points:
        for statistic, summary in point.stats.items():
            theory_text = f" theory={summary.theory:.6g}" if summary.theory is not None else ""
            click.echo(
                f"[{point.index}] {statistic.value}: mean={summary.mean:.6g} "
                f"count={summary.count}{theory_text}"
            )


@cli.command()
@click.option(
    "--suite",
    "suites",
    multiple=True,
    required=True,
    type=click.Choice([s.value for s in Suite] + ["all"]),
    help="Suite to run (repeatable; 'all' runs every suite)",
)
@click.option(
    "--scale",
    type=click.FloatRange(min=0.0, max=1.0, min_open=True),
    default=1.0,
    show_default=True,
    help="Replication multiplier for smoke runs",
)
@click.option("--workers", type=click.IntRange(min=1), help="Process count (default CB_THREADS)")
@config_options
@reports_errors
def check(suites, scale, workers, **options):
    """Run check suites; exit 1 if any check fails."""
    out_dir: Path = options.pop("out_dir")
    config = resolve_config(options)
    selected: List[Suite] = (
        list(Suite) if "all" in suites else [Suite(name) for name in dict.fromkeys(suites)]
    )
    failed = []
    for suite in selected:
        report: SuiteReport = theorem_checks(suite, scale=scale, seed=config.seed, workers=workers)
        data = report.to_dict()
        write_rows(
            out_dir / f"check_{suite.value}.csv",
            SuiteReport.CSV_HEADER,
            report.rows(),
            data["provenance"],
        )
        write_json(data, out_dir / f"check_{suite.value}.json")
        for result in report.checks:
            click.echo(f"  {suite.value}: {result.name} ... ", nl=False)
            click.secho("PASS" if result.passed else "FAIL", fg="green" if result.passed else "red")
        if not report.passed:
            failed.append(suite.value)

    if failed:
        click.secho(f"Failed suites: {', '.join(failed)}", fg="red", err=True)
        sys.exit(1)


@cli.command()
@click.option("--which", type=click.Choice([f.value for f in Figure]), required=True)
@click.option(
    "--alpha-r-values",
    required=True,
    help="Comma-separated alpha_R grid",
)
@click.option(
    "--alpha-b-values",
    required=True,
    help="Comma-separated alpha_B grid",
)
@click.option(
    "--replications",
    type=click.IntRange(min=0),
    default=0,
    show_default=True,
    help="Chain runs per grid point (0 writes the theory curve only)",
)
@click.option("--workers", type=click.IntRange(min=1), help="Process count (default CB_THREADS)")
@config_options
@reports_errors
def figure(which, alpha_r_values, alpha_b_values, replications, workers, **options):
    """Write <which>.csv: alpha_R, alpha_B, theory_limit, sim_mean, sim_ci_lo, sim_ci_hi."""
    out_dir: Path = options.pop("out_dir")
    config = resolve_config(options)
    if replications > 0 and (config.n is None or config.p is None):
        raise ConfigError("simulated figure columns need n and p")
    rows = figure_data(
        Figure(which),
        parse_floats(alpha_r_values),
        parse_floats(alpha_b_values),
        config.n or 0,
        config.p or 0.0,
        replications=replications,
        seed=config.seed,
        workers=workers,
    )
    plan = {
        "command": "figure",
        "which": which,
        "alpha_R": list(parse_floats(alpha_r_values)),
        "alpha_B": list(parse_floats(alpha_b_values)),
        "replications": replications,
        "config": config.to_dict(),
    }
    block = provenance(config.seed, plan)
    write_figure_csv(rows, out_dir / f"{which}.csv", block)
    write_json(
        {"provenance": block, "columns": list(FIGURE_HEADER)},
        out_dir / f"{which}.json",
    )
    for row in rows:
        click.echo(",".join("" if value is None else repr(value) for value in row.as_row()))


def main():
    """Entry point for the CLI."""
    cli()


if __name__ == "__main__":
    main()
