import argparse
import json
import logging
import logging.config
import os
import sys
from typing import Optional, Sequence, TextIO

from anecelab import __version__
from anecelab.config import Config, ConfigError

from .commands import CommandContext, router
from .router import EXIT_USAGE
from .scenario import ScenarioError, parse_scenario

log = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", required=True, help="scenario YAML file")
    common.add_argument("--out", help="output file, standard output when omitted")
    common.add_argument("--seed", type=int, help="override the scenario seed")
    common.add_argument(
        "--mc-samples", type=int, help="override the scenario Monte Carlo sample count"
    )
    common.add_argument(
        "--allow-low-samples",
        action="store_true",
        help="let verify run with fewer than 100 Monte Carlo samples",
    )

    parser = argparse.ArgumentParser(
        prog="anecelab",
        description="Secure degrees of freedom of anti-eavesdropping channel estimation.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subparsers = parser.add_subparsers(dest="command", required=True)

    for name in router.names:
        sub = subparsers.add_parser(name, parents=[common], help=router.help(name))
        if name == "sweep":
            sub.add_argument(
                "--axis", required=True, help="n_eve, k2 or m; k for modified_two_user"
            )
            sub.add_argument(
                "--values", required=True, help='inclusive range "a..b" or list "a,b,c"'
            )

    return parser


def setup_logging(conf: Config) -> None:
    """
    Apply the dictConfig document named by the config, or plain INFO
    logging on stderr when no such file exists.
    """
    path = conf.logging_config_path
    if not os.path.exists(path):
        logging.basicConfig(level=logging.INFO)
        return

    try:
        with open(path) as f:
            document = json.load(f)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Logging config {path} is not valid JSON: {exc}")

    try:
        logging.config.dictConfig(document)
    # dictConfig reports bad documents through any of these
    except (ValueError, TypeError, AttributeError, ImportError) as exc:
        raise ConfigError(f"Logging config {path} was rejected: {exc}")


def run(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None) -> int:
    args = build_parser().parse_args(argv)

    try:
        conf = Config()
        setup_logging(conf)
    except ConfigError as exc:
        log.error(exc)
        return EXIT_USAGE

    try:
        scenario = parse_scenario(args.scenario).with_overrides(
            seed=args.seed, mc_samples=args.mc_samples
        )
    except ScenarioError as exc:
        log.error("Invalid scenario", extra={"error": str(exc)})
        return EXIT_USAGE

    ctx = CommandContext(
        scenario=scenario,
        config=conf,
        stdout=stdout or sys.stdout,
        out=args.out,
        allow_low_samples=args.allow_low_samples,
        axis=getattr(args, "axis", None),
        values=getattr(args, "values", None),
    )
    return router.dispatch(args.command, ctx)


def main():
    sys.exit(run())
