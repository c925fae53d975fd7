"""Command-line scenario runner.

    python -m degenwave eigen --config scenario.cfg
    python -m degenwave solve --config scenario.cfg --engine fd --output-dir out/
    python -m degenwave observe --config scenario.cfg --jobs 4

Exit codes: 0 success, 2 unsupported alpha regime, 3 invalid config or
under-resolved grid, 1 any other numerical failure.
"""

import argparse
import sys
from pathlib import Path

from degenwave import __version__
from degenwave.core.config import load_scenario
from degenwave.core.errors import ConfigError, DegenwaveError, ResolutionError, UnsupportedRegimeError
from degenwave.core.logging import logger, setup_logging, timed
from degenwave.models.schemas import Scenario
from degenwave.services import artifacts, scenarios

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_UNSUPPORTED = 2
EXIT_CONFIG = 3


def exit_code_for(error: DegenwaveError) -> int:
    if isinstance(error, UnsupportedRegimeError):
        return EXIT_UNSUPPORTED
    if isinstance(error, (ConfigError, ResolutionError)):
        return EXIT_CONFIG
    return EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="degenwave",
        description="Spectral, observability and boundary-control experiments for w_tt - (x^alpha w_x)_x = 0.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="overrides LOG_LEVEL (DEBUG, INFO, WARNING)")
    sub = parser.add_subparsers(dest="command", required=True)

    helps = {
        "eigen": "eigenvalue table (n, j_mu_n, lambda_n, flux_L)",
        "solve": "free evolution with the modal and FD engines",
        "observe": "observability report and Gram sweep",
        "control": "null control synthesis and FD verification",
        "counterexample": "alpha >= 2 translated-bump quotients",
    }
    for name in scenarios.COMMANDS:
        cmd = sub.add_parser(name, help=helps[name])
        cmd.add_argument("--config", type=Path, default=None, help="scenario file (key = value lines)")
        cmd.add_argument("--output-dir", type=Path, default=None, help="overrides the scenario output_dir")
        if name == "solve":
            cmd.add_argument("--engine", choices=scenarios.ENGINES, default="modal")
        if name in ("observe", "counterexample"):
            cmd.add_argument("--jobs", type=int, default=None, help="worker processes for sweep points")
    return parser


def run_command(command: str, scenario: Scenario, out: Path, engine: str = "modal", jobs: int | None = None) -> list[Path]:
    """Run one subcommand and write its artifacts under `out`."""
    name = scenario.name
    if command == "eigen":
        return artifacts.write_eigen(out, name, scenarios.run_eigen(scenario))
    if command == "solve":
        return artifacts.write_solve(out, name, engine, scenarios.run_solve(scenario, engine))
    if command == "observe":
        report, sweep = scenarios.run_observe(scenario, jobs)
        print(f"T_alpha = {report.t_alpha:.17g}")
        return artifacts.write_observe(out, name, report, sweep)
    if command == "control":
        signal, report = scenarios.run_control(scenario)
        if report.below_threshold:
            print(f"warning: T = {report.horizon_t:.6g} <= T_alpha = {report.t_alpha:.6g}", file=sys.stderr)
        return artifacts.write_control(out, name, signal, report)
    if command == "counterexample":
        return artifacts.write_counterexample(out, name, scenarios.run_counterexample(scenario, jobs))
    raise ConfigError(f"cli: unknown command {command!r}")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        scenario = load_scenario(args.config)
        out = args.output_dir or Path(scenario.output_dir)
        with timed(args.command):
            paths = run_command(
                args.command,
                scenario,
                out,
                engine=getattr(args, "engine", "modal"),
                jobs=getattr(args, "jobs", None),
            )
    except DegenwaveError as e:
        code = exit_code_for(e)
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return code
    logger.info(f"{args.command} done: {len(paths)} files in {out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
