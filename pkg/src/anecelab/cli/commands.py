import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, TextIO

from anecelab.config import Config
from anecelab.pilots import write_matrix
from anecelab.schemes import SweepAxisError
from anecelab.verify.compare import COMPARISON_COLUMNS
from anecelab.verify.runner import all_as_expected, apply_tamper, run_suite

from .emit import (
    CHECK_COLUMNS,
    check_rows,
    open_output,
    union_columns,
    write_csv,
    write_json,
)
from .router import EXIT_CHECK_FAILED, EXIT_OK, CommandRouter
from .scenario import ScenarioError, ScenarioFile

log = logging.getLogger(__name__)

MIN_MC_SAMPLES = 100

router = CommandRouter()


@dataclass
class CommandContext:
    """
    Attributes
    ----------
    scenario: ScenarioFile
        The parsed scenario with command-line overrides applied.
    config: Config
        Process configuration from the environment.
    stdout: TextIO
        Where command output goes when no --out is given.
    out: str, optional
        Output path.
    allow_low_samples: bool
        Permit verify runs below MIN_MC_SAMPLES.
    axis: str, optional
        Sweep axis.
    values: str, optional
        Sweep values, "a..b" or "a,b,c".
    """

    scenario: ScenarioFile
    config: Config
    stdout: TextIO
    out: Optional[str] = None
    allow_low_samples: bool = False
    axis: Optional[str] = None
    values: Optional[str] = None


def parse_values(text: str) -> List[int]:
    """Sweep values as an inclusive range "a..b" or a list "a,b,c"."""
    try:
        if ".." in text:
            start, stop = (int(v) for v in text.split("..", 1))
            values = list(range(start, stop + 1))
        else:
            values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise SweepAxisError(f"cannot read sweep values {text!r}")
    if not values:
        raise SweepAxisError(f"sweep values {text!r} are empty")
    return values


def pilot_paths(out: str, names: List[str]) -> List[Path]:
    """One matrix keeps the given path; several get the matrix name before the suffix."""
    path = Path(out)
    if len(names) == 1:
        return [path]
    return [path.with_name(f"{path.stem}.{name}{path.suffix}") for name in names]


@router.register("formula", help="print every applicable closed form as JSON")
def cmd_formula(ctx: CommandContext) -> int:
    report = ctx.scenario.build_scheme().formula()
    with open_output(ctx.out, ctx.stdout) as stream:
        write_json(stream, report)
    return EXIT_OK


@router.register("verify", help="run the numeric checks and report them as CSV")
def cmd_verify(ctx: CommandContext) -> int:
    scenario = ctx.scenario
    if scenario.mc_samples < MIN_MC_SAMPLES and not ctx.allow_low_samples:
        raise ScenarioError(
            f"mc_samples = {scenario.mc_samples} is below {MIN_MC_SAMPLES}; "
            "slope checks become unreliable, pass --allow-low-samples to run anyway"
        )

    tasks = scenario.build_scheme().check_tasks(
        scenario.snr_grid, scenario.mc_samples, scenario.seed, scenario.rank_draws
    )
    log.info(
        "Starting verification",
        extra={
            "scheme": scenario.scheme.value,
            "tasks": len(tasks),
            "workers": ctx.config.workers,
            "seed": scenario.seed,
        },
    )
    results = run_suite(tasks, workers=ctx.config.workers)
    results = apply_tamper(results, ctx.config.tamper_prefixes)

    with open_output(ctx.out, ctx.stdout) as stream:
        write_csv(stream, CHECK_COLUMNS, check_rows(results))

    return EXIT_OK if all_as_expected(results) else EXIT_CHECK_FAILED


@router.register("sweep", help="tabulate the closed forms along one parameter")
def cmd_sweep(ctx: CommandContext) -> int:
    if ctx.axis is None or ctx.values is None:
        raise SweepAxisError("sweep needs --axis and --values")
    rows = ctx.scenario.build_scheme().sweep(ctx.axis, parse_values(ctx.values))
    with open_output(ctx.out, ctx.stdout) as stream:
        write_csv(stream, union_columns(rows), rows)
    return EXIT_OK


@router.register("pilots", help="write the pilot matrices and print their rank audit")
def cmd_pilots(ctx: CommandContext) -> int:
    if ctx.out is None:
        raise ScenarioError("pilots needs --out for the matrix file")

    audit = ctx.scenario.build_scheme().pilots(ctx.scenario.seed)
    names = list(audit.matrices)
    for name, path in zip(names, pilot_paths(ctx.out, names)):
        write_matrix(path, audit.matrices[name])
        log.info("Wrote pilot matrix", extra={"matrix": name, "path": str(path)})

    for line in audit.lines:
        ctx.stdout.write(line + "\n")
    return EXIT_OK if audit.ok else EXIT_CHECK_FAILED


@router.register("compare", help="compare DoF and slot use across schemes as CSV")
def cmd_compare(ctx: CommandContext) -> int:
    table = ctx.scenario.build_scheme().compare()
    with open_output(ctx.out, ctx.stdout) as stream:
        write_csv(stream, COMPARISON_COLUMNS, (row.as_dict() for row in table.rows))
    return EXIT_OK
