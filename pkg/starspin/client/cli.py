#!/usr/bin/env python3
"""
starspin CLI

Command-line runner for star-register experiments: reads a configuration
file, runs one experiment and writes its CSV and metadata; renders result
tables as SVG plots.
"""

import argparse
import dataclasses
import logging
import sys
from pathlib import Path
from typing import List, Optional

from .. import __version__
from ..utils.constants import BACKENDS, MOLECULE_PRESETS
from ..utils.errors import ConfigError, SimulationError
from ..utils.style import StarStyle, console, print_header, print_info, print_rule, print_success, print_warning
from .config import ExperimentConfig, parse_config
from .plotting import PLOT_KINDS, emit_plot
from .runner import read_result, run_experiment

log = logging.getLogger("starspin")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SIMULATION = 2

USAGE = [
    {"command": "run <config>", "description": "Run the experiment described by a config file", "example": "starspin run dtc.cfg --seed 7"},
    {"command": "plot <csv> --kind <kind>", "description": "Render a result table as SVG (line, heatmap, sticks)", "example": "starspin plot results/chaos.csv --kind heatmap"},
    {"command": "presets", "description": "List the built-in molecule presets", "example": "starspin presets"},
    {"command": "--version", "description": "Show the installed version", "example": "starspin --version"},
]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="starspin", description="Star-topology spin-register simulator")
    parser.add_argument("--version", action="version", version=f"starspin {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command")
    # -v is also accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    run = sub.add_parser("run", parents=[common], help="run one experiment")
    run.add_argument("config", type=Path, help="experiment configuration file")
    run.add_argument("--output", help="output directory (overrides the config)")
    run.add_argument("--seed", type=int, help="master seed (overrides the config)")
    run.add_argument("--backend", choices=BACKENDS, help="state backend (overrides the config)")
    run.add_argument("--jobs", type=int, help="worker processes for sweep points")
    run.add_argument("--quiet", action="store_true", help="skip the result preview")

    plot = sub.add_parser("plot", parents=[common], help="render a result CSV as SVG")
    plot.add_argument("csv", type=Path, help="result table written by 'starspin run'")
    plot.add_argument("--kind", required=True, choices=PLOT_KINDS)
    plot.add_argument("--output", type=Path, help="SVG path (default: next to the CSV)")
    plot.add_argument("--title")

    sub.add_parser("presets", help="list molecule presets")
    return parser


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s [starspin] %(levelname)s %(message)s",
        datefmt="%H:%M:%S",
    )
    logging.getLogger("starspin").setLevel(logging.DEBUG if verbose else logging.INFO)


def _show_error(title: str, error: Exception, suggestion: str = "") -> None:
    console.print(StarStyle.create_error_panel(title, str(error), suggestion))


def _print_usage() -> None:
    print_header("starspin", "Star-topology spin-register simulator")
    print_rule("Command Usage", "secondary")
    console.print(StarStyle.create_help_table(USAGE))
    print_info("Run [command]starspin <command> --help[/command] for the options of a command")


def apply_overrides(config: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
    """Command-line flags win over the values in the file."""
    changes = {
        name: getattr(args, name)
        for name in ("output", "seed", "backend", "jobs")
        if getattr(args, name, None) is not None
    }
    if not changes:
        return config
    log.debug(f"command-line overrides: {changes}")
    config = dataclasses.replace(config, **changes)
    config.validate()
    return config


def cmd_run(args: argparse.Namespace) -> int:
    try:
        text = args.config.read_text(encoding="utf-8")
    except OSError as e:
        _show_error("Cannot Read Config", e, "Check the path to the configuration file")
        return EXIT_CONFIG
    try:
        config = apply_overrides(parse_config(text), args)
        existing = Path(config.output) / f"{config.experiment}.csv"
        if existing.exists():
            print_warning(f"Overwriting {existing}")
        with StarStyle.create_status(f"Running {config.experiment}"):
            result, paths = run_experiment(config)
    except ConfigError as e:
        _show_error("Configuration Error", e, "See docs/CONFIG_REFERENCE.md for the accepted keys")
        return EXIT_CONFIG
    except SimulationError as e:
        _show_error("Simulation Failed", e, f"Experiment '{config.experiment}' stopped; no files were written")
        return EXIT_SIMULATION

    console.print(StarStyle.create_run_summary(config.experiment, paths, len(result.rows), config.seed))
    if not args.quiet:
        console.print(StarStyle.create_result_table(config.experiment, result.columns, result.rows))
    return EXIT_OK


def cmd_plot(args: argparse.Namespace) -> int:
    try:
        result = read_result(args.csv)
    except (OSError, ValueError) as e:
        _show_error("Cannot Read Result", e, "Pass a CSV written by 'starspin run'")
        return EXIT_CONFIG
    target = args.output or args.csv.with_suffix(".svg")
    try:
        path = emit_plot(result, args.kind, target, args.title)
    except ConfigError as e:
        _show_error("Plot Error", e, f"Columns available: {', '.join(result.columns) or 'none'}")
        return EXIT_CONFIG
    print_success(f"Wrote {path}")
    return EXIT_OK


def cmd_presets(args: argparse.Namespace) -> int:
    rows = []
    for name, preset in MOLECULE_PRESETS.items():
        rows.append({
            "command": name,
            "description": f"{preset['label']}: N={preset['n_total']}, {preset['central']} centre, "
                           f"{preset['ancilla']} ancillas, J={preset['j_ca']} Hz",
            "example": f"preset = {name}",
        })
    console.print(StarStyle.create_help_table(rows))
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "plot": cmd_plot,
    "presets": cmd_presets,
}


def run_cli(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv`` and run the chosen command; returns the exit code."""
    argv = sys.argv[1:] if argv is None else argv
    if not argv:
        _print_usage()
        return EXIT_CONFIG
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    if args.command is None:
        _print_usage()
        return EXIT_CONFIG
    return COMMANDS[args.command](args)


def main() -> None:
    """Main entry point."""
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
