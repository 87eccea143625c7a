from __future__ import annotations

import argparse
import sys
import time
from typing import TYPE_CHECKING

from quicktalk_sim.cli import help as help_module
from quicktalk_sim.errors import ConfigurationError, SimulationError
from quicktalk_sim.shared.utility_discovery import discover_utilities

if TYPE_CHECKING:
    from quicktalk_sim.utils.base_utility import BaseUtility

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SIMULATION = 2


class _ArgumentParser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; here 2 means a failed simulation."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _run_utility_with_timing(utility: BaseUtility, *args, **kwargs) -> int:
    """Run a utility, map its failures to exit codes and report the time taken."""
    t0 = time.perf_counter()
    try:
        result = utility.run(*args, **kwargs)
    except (SimulationError, AssertionError):
        return EXIT_SIMULATION
    except (ConfigurationError, ValueError, OSError):
        return EXIT_USAGE
    dt = time.perf_counter() - t0
    utility.log_info(f"Done. {utility.result_label}: {result}. Took {dt:.2f}s.")
    return EXIT_OK


def _add_help_parser(subparsers: argparse._SubParsersAction) -> argparse.ArgumentParser:
    p = subparsers.add_parser(
        "help",
        help="Show detailed help for a specific command",
        description="Display detailed information about available commands.",
    )
    p.add_argument(
        "subcommand",
        nargs="?",
        help="Command to show help for (e.g. 'run', 'batch'), or 'keys' for scenario keys",
    )
    return p


def main(argv: list[str] | None = None) -> int:
    utilities = discover_utilities()

    parser = _ArgumentParser(
        prog="quicktalk-sim",
        description="Simulate QuickTalk IR pinpointing and broadcast WiFi transactions.",
    )
    subparsers = parser.add_subparsers(dest="command")

    command_map = {}
    for command_name, utility_class in utilities.items():
        utility_class.add_parser(subparsers)
        command_map[command_name] = utility_class
    _add_help_parser(subparsers)

    parsed_argv = sys.argv[1:] if argv is None else list(argv)
    valid_commands = set(command_map) | {"help"}
    if parsed_argv and not parsed_argv[0].startswith("-") and parsed_argv[0] not in valid_commands:
        # tolerate a leading program name, as when argv is passed through verbatim
        if len(parsed_argv) > 1 and parsed_argv[1] in valid_commands:
            parsed_argv = parsed_argv[1:]

    try:
        args = parser.parse_args(parsed_argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.command in command_map:
        utility_class = command_map[args.command]
        util = utility_class(log_level=args.log_level)
        pos_args, kwargs = utility_class.prepare_process_args(args)
        return _run_utility_with_timing(util, *pos_args, **kwargs)

    if args.command == "help":
        return help_module.main(args.subcommand)

    parser.print_help()
    return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
