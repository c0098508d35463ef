"""Command-line entry point: ``aware-stl``.

Exit codes: 0 success or satisfied, 1 violated or infeasible, 2 usage,
parse or validation error, 3 solver limit reached.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import NoReturn, Optional

import click
from pydantic import ValidationError

from aware_stl.config import Config
from aware_stl.configs import default_config_file
from aware_stl.exceptions import (
    AwareStlError,
    EncodingError,
    InvalidFormulaError,
    MonitorError,
    MonitorMismatchError,
    ParseError,
    SynthesisError,
)
from aware_stl.milp import MilpModel, SolveStatus, export_lp, read_lp
from aware_stl.monitor import Signal, robustness
from aware_stl.parser import parse
from aware_stl.reporting import (
    comparison_table,
    format_per_node,
    format_robustness,
    write_synthesis_outputs,
)
from aware_stl.synthesis import (
    SynthesisResult,
    Variant,
    build,
    case_study_problem,
    load_problem,
    synthesize,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3


def _fail(message: str, code: int) -> NoReturn:
    click.echo(f"error: {message}" if not message.startswith("error:") else message, err=True)
    raise SystemExit(code)


def _read_formula(spec_path: Optional[str], formula: Optional[str]):
    if (spec_path is None) == (formula is None):
        _fail("give exactly one of --spec or --formula", EXIT_USAGE)
    text = formula if formula is not None else Path(spec_path).read_text()
    try:
        return parse(text)
    except ParseError as exc:
        _fail(exc.annotate(text), EXIT_USAGE)


def _exit_code(status: SolveStatus) -> int:
    if status == SolveStatus.OPTIMAL:
        return EXIT_OK
    if status.is_limit:
        return EXIT_LIMIT
    return EXIT_FAILED


def _solver_options(func):
    func = click.option("--big-m", type=float, default=None, help="Big-M constant (default from config)")(func)
    func = click.option("--node-limit", type=int, default=None, help="Branch-and-bound node limit")(func)
    func = click.option("--time-limit", type=float, default=None, help="Solver time limit in seconds")(func)
    func = click.option(
        "--backend", type=click.Choice(["builtin", "highs"]), default=None, help="MILP engine"
    )(func)
    return func


def _config(ctx: click.Context, **overrides) -> Config:
    try:
        return ctx.obj.with_overrides(**overrides)
    except ValidationError as exc:
        _fail(f"invalid option: {exc.errors()[0]['msg']}", EXIT_USAGE)


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Debug logging")
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="YAML config overriding the bundled defaults",
)
@click.pass_context
def cli(ctx: click.Context, verbose: bool, config_path: Optional[str]) -> None:
    """STL monitoring and MILP trajectory synthesis with integral and derivative predicates."""
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    try:
        ctx.obj = Config.load(config_path or default_config_file())
    except (ValidationError, OSError) as exc:
        _fail(f"cannot load config: {exc}", EXIT_USAGE)


@cli.command()
@click.option("--signal", "signal_path", required=True, type=click.Path(exists=True, dir_okay=False), help="CSV with header t,<dims>")
@click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False), help="Formula file")
@click.option("--formula", help="Formula text")
@click.option("--step", "-k", default=0, show_default=True, type=int, help="Evaluation step")
@click.option("--per-node", is_flag=True, help="Print robustness of every subformula")
def monitor(
    signal_path: str,
    spec_path: Optional[str],
    formula: Optional[str],
    step: int,
    per_node: bool,
) -> None:
    """Robustness of a recorded signal; exit 0 iff satisfied."""
    parsed = _read_formula(spec_path, formula)
    try:
        signal = Signal.from_csv(signal_path)
        report = robustness(signal, parsed, step, per_node=per_node)
    except (MonitorError, InvalidFormulaError) as exc:
        _fail(str(exc), EXIT_USAGE)
    click.echo(format_robustness(report))
    if per_node:
        click.echo(format_per_node(report))
    raise SystemExit(EXIT_OK if report.satisfied else EXIT_FAILED)


def _load_problem(system_path: str, spec_path: Optional[str], horizon: Optional[int]):
    try:
        problem = load_problem(system_path)
    except ValidationError as exc:
        _fail(f"invalid problem file {system_path}: {exc}", EXIT_USAGE)
    except ParseError as exc:
        _fail(str(exc), EXIT_USAGE)
    if spec_path is not None:
        problem = replace(problem, spec=_read_formula(spec_path, None))
    if horizon is not None:
        problem = replace(problem, horizon=horizon)
    return problem


@cli.command()
@click.option("--system", "system_path", required=True, type=click.Path(exists=True, dir_okay=False), help="YAML problem file")
@click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False), help="Formula file replacing the problem's")
@click.option("--horizon", type=int, default=None, help="Override the number of steps H")
@click.option("--export-lp", "export_path", type=click.Path(dir_okay=False), default=None, help="Also write the model as LP text")
@click.option("--out-dir", type=click.Path(file_okay=False), default=None, help="Write trajectory.csv and summary.json here")
@_solver_options
@click.pass_context
def synth(
    ctx: click.Context,
    system_path: str,
    spec_path: Optional[str],
    horizon: Optional[int],
    export_path: Optional[str],
    out_dir: Optional[str],
    big_m: Optional[float],
    node_limit: Optional[int],
    time_limit: Optional[float],
    backend: Optional[str],
) -> None:
    """Minimum-input trajectory satisfying the problem's formula."""
    config = _config(ctx, big_m=big_m, node_limit=node_limit, time_limit=time_limit, backend=backend)
    problem = _load_problem(system_path, spec_path, horizon)
    if big_m is not None:
        problem = replace(problem, big_m=big_m)
    try:
        result = synthesize(problem, config, export_path=export_path)
    except MonitorMismatchError as exc:
        _fail(str(exc), EXIT_FAILED)
    except (SynthesisError, InvalidFormulaError, EncodingError) as exc:
        _fail(str(exc), EXIT_USAGE)
    except AwareStlError as exc:
        _fail(str(exc), EXIT_FAILED)
    _echo_result(result)
    if out_dir is not None:
        write_synthesis_outputs(result, Path(out_dir))
    raise SystemExit(_exit_code(result.status))


def _echo_result(result: SynthesisResult) -> None:
    click.echo(f"status: {result.status.value}")
    if result.cost is not None:
        click.echo(f"cost: {result.cost:.6f}")
    if result.robustness is not None:
        click.echo(f"monitor: {format_robustness(result.robustness)}")
    click.echo(f"nodes: {result.stats.nodes}  time: {result.stats.wall_time:.2f}s")


@cli.command("export-lp")
@click.option("--system", "system_path", type=click.Path(exists=True, dir_okay=False), help="YAML problem file")
@click.option("--variant", type=click.Choice([v.value for v in Variant]), default=None, help="Built-in case-study formula")
@click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False), help="Formula file replacing the problem's")
@click.option("--horizon", type=int, default=None, help="Override the number of steps H")
@click.option("--big-m", type=float, default=None, help="Big-M constant")
@click.option("--out", "-o", "out_path", type=click.Path(dir_okay=False), default=None, help="Output file (default stdout)")
@click.option("--check", is_flag=True, help="Read the written text back and compare sizes")
@click.pass_context
def export_lp_command(
    ctx: click.Context,
    system_path: Optional[str],
    variant: Optional[str],
    spec_path: Optional[str],
    horizon: Optional[int],
    big_m: Optional[float],
    out_path: Optional[str],
    check: bool,
) -> None:
    """Write the synthesis MILP in CPLEX LP format for external solvers."""
    if (system_path is None) == (variant is None):
        _fail("give exactly one of --system or --variant", EXIT_USAGE)
    config = _config(ctx, big_m=big_m)
    if variant is not None:
        problem = case_study_problem(variant, big_m=big_m)
        if horizon is not None:
            problem = replace(problem, horizon=horizon)
    else:
        problem = _load_problem(system_path, spec_path, horizon)
    try:
        model = build(problem, config)
    except (SynthesisError, InvalidFormulaError, EncodingError) as exc:
        _fail(str(exc), EXIT_USAGE)
    text = export_lp(model)
    if out_path is None:
        click.echo(text, nl=False)
    else:
        Path(out_path).write_text(text)
        click.echo(f"wrote {out_path}: {len(model.variables)} variables, {len(model.constraints)} rows", err=True)
    if check:
        same = _shape(read_lp(text)) == _shape(model)
        click.echo(f"check: {'ok' if same else 'MISMATCH'}", err=True)
        if not same:
            raise SystemExit(EXIT_FAILED)


def _shape(model: MilpModel) -> tuple[list[tuple], int]:
    return sorted((v.name, v.kind, v.lo, v.hi) for v in model.variables), len(model.constraints)


def _run_variant(variant: Variant, config: Config) -> SynthesisResult:
    return synthesize(case_study_problem(variant, big_m=config.encoder.big_m), config)


@cli.command("case-study")
@click.option(
    "--variant",
    type=click.Choice([v.value for v in Variant] + ["all"]),
    default="full",
    show_default=True,
)
@click.option("--out-dir", type=click.Path(file_okay=False), default="case_study_out", show_default=True)
@click.option("--parallel", is_flag=True, help="Solve variants in separate processes")
@_solver_options
@click.pass_context
def case_study(
    ctx: click.Context,
    variant: str,
    out_dir: str,
    parallel: bool,
    big_m: Optional[float],
    node_limit: Optional[int],
    time_limit: Optional[float],
    backend: Optional[str],
) -> None:
    """Solve the built-in double-integrator mission and write plot-ready CSVs."""
    config = _config(ctx, big_m=big_m, node_limit=node_limit, time_limit=time_limit, backend=backend)
    variants = list(Variant) if variant == "all" else [Variant(variant)]
    root = Path(out_dir)
    try:
        if parallel and len(variants) > 1:
            with ProcessPoolExecutor(max_workers=len(variants)) as pool:
                results = dict(zip(variants, pool.map(_run_variant, variants, [config] * len(variants))))
        else:
            results = {v: _run_variant(v, config) for v in variants}
    except MonitorMismatchError as exc:
        _fail(str(exc), EXIT_FAILED)
    except AwareStlError as exc:
        _fail(str(exc), EXIT_FAILED)

    for v, result in results.items():
        write_synthesis_outputs(result, root / v.value, motion=True)
        click.echo(f"[{v.value}]")
        _echo_result(result)
    table = comparison_table(results)
    (root / "table.txt").write_text(table)
    click.echo(table, nl=False)
    codes = [_exit_code(result.status) for result in results.values()]
    raise SystemExit(EXIT_LIMIT if EXIT_LIMIT in codes else max(codes))


def main() -> None:  # pragma: no cover
    cli()


if __name__ == "__main__":  # pragma: no cover
    main()
