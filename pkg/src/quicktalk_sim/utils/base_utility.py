from __future__ import annotations

from abc import ABC, abstractmethod
import argparse
from dataclasses import dataclass
from pathlib import Path
import sys
from typing import Any, Callable

from loguru import logger

from quicktalk_sim.shared import parse_override


@dataclass
class BaseOptions:
    # numeric or human-readable log level (e.g. 20 or "info")
    log_level: int | str = "INFO"


@dataclass
class ParameterInfo:
    """Metadata for a command-line parameter."""
    name: str
    required: bool
    description: str
    default: Any = None
    type: Callable[[str], Any] | None = None
    action: str | None = None
    metavar: str | None = None


SCENARIO_PARAMETER = ParameterInfo(
    name="scenario",
    required=True,
    description="Path to a scenario file (key = value lines)",
    type=Path,
)

OVERRIDE_PARAMETER = ParameterInfo(
    name="--set",
    required=False,
    description="Override a scenario key after the file is read; repeatable",
    type=parse_override,
    action="append",
    metavar="KEY=VALUE",
)

LOG_LEVEL_PARAMETER = ParameterInfo(
    name="--log-level",
    required=False,
    description="Log level name or number",
    default="info",
)


class BaseUtility(ABC):
    """Base class for the quicktalk-sim subcommands.

    Subclasses define ``command``, ``brief_description`` and ``parameters``;
    ``add_parser`` turns that metadata into an argparse subparser and
    ``process`` does the work. Every subcommand also accepts ``--log-level``.

    Results that should be shown as a table go into ``statistics``, a mapping
    of category -> column -> value, for example::

        {
            "seed 1": {"txns": "500", "success": "98.20%", "e2e p50": "0.444s"},
            "pooled": {"txns": "1000", "success": "98.10%", "e2e p50": "0.444s"},
        }

    ``increment_stat`` counts into it, ``set_stat`` stores a preformatted
    cell and ``log_statistics`` prints it.
    """

    command: str
    brief_description: str
    parameters: list[ParameterInfo]

    result_label: str = "Items processed"

    @classmethod
    def add_parser(cls, subparsers: argparse._SubParsersAction) -> argparse.ArgumentParser:
        """Create and add an argparse subparser for this utility."""
        parser = subparsers.add_parser(
            cls.command,
            help=cls.brief_description,
            description=cls.brief_description,
        )

        for param in [*cls.parameters, LOG_LEVEL_PARAMETER]:
            kwargs: dict[str, Any] = {}

            if param.type is not None:
                kwargs["type"] = param.type
            if param.action is not None:
                kwargs["action"] = param.action
            if param.metavar is not None:
                kwargs["metavar"] = param.metavar

            if param.default is not None:
                if isinstance(param.default, bool):
                    kwargs["action"] = "store_true"
                else:
                    if isinstance(param.default, int) and "type" not in kwargs:
                        kwargs["type"] = int
                    kwargs["default"] = param.default
            if param.name.startswith("-") and param.required:
                kwargs["required"] = True

            help_text = param.description
            if param.default is not None and not isinstance(param.default, bool):
                help_text += f" (default: {param.default})"
            kwargs["help"] = help_text

            parser.add_argument(param.name, **kwargs)

        return parser

    @classmethod
    def prepare_process_args(cls, args: argparse.Namespace) -> tuple[tuple, dict]:
        """Convert the argparse Namespace into arguments for process().

        ``scenario`` becomes the single positional argument; every other
        non-None option is passed by keyword. ``--set`` arrives as
        ``overrides``.
        """
        args_dict = vars(args)
        excluded_keys = {"command", "log_level"}

        positional: tuple = ()
        if "scenario" in args_dict:
            positional = (args_dict["scenario"],)
            excluded_keys = excluded_keys | {"scenario"}
        kwargs = {k: v for k, v in args_dict.items() if k not in excluded_keys and v is not None}
        if "set" in kwargs:
            kwargs["overrides"] = kwargs.pop("set")
        return positional, kwargs

    statistics: dict[str, dict[str, Any]]

    def __init__(self, *, log_level: int | str = "INFO") -> None:
        self.opts = BaseOptions(log_level=log_level)
        self.statistics = {}

        # Configure loguru once per process; later instances reuse the sink.
        if not getattr(logger, "_quicktalk_configured", False):
            logger.remove()
            level = self._normalize_level(self.log_level)
            # messages already carry the emoji prefixes from the helpers below
            fmt = (
                "<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | "
                "<level>{level: <8}</level> | {message}"
            )
            logger.add(sys.stderr, level=level, format=fmt)
            setattr(logger, "_quicktalk_configured", True)

    @property
    def log_level(self) -> int | str:
        return self.opts.log_level

    def _normalize_level(self, level: int | str) -> int | str:
        """Accept numeric levels or names such as 'debug', 'Warn', 'fatal'."""
        if isinstance(level, int):
            return level
        if not isinstance(level, str):
            raise TypeError("log_level must be int or str")
        name = level.strip().upper()
        if name.isdigit():
            return int(name)
        mapping = {
            "TRACE": "TRACE",
            "DEBUG": "DEBUG",
            "INFO": "INFO",
            "SUCCESS": "SUCCESS",
            "WARNING": "WARNING",
            "WARN": "WARNING",
            "ERROR": "ERROR",
            "CRITICAL": "CRITICAL",
            "FATAL": "CRITICAL",
        }
        return mapping.get(name, name)

    def log_error(self, msg: str, /) -> None:
        logger.error(f"❌ ERROR: {msg}")

    def log_warning(self, msg: str, /) -> None:
        logger.warning(f"⚠️ WARN: {msg}")

    def log_info(self, msg: str, /) -> None:
        logger.info(f"ℹ️ {msg}")

    def log_debug(self, msg: str, /) -> None:
        logger.debug(f"🐛 DEBUG: {msg}")

    def log_verbose(self, msg: str, /) -> None:
        logger.trace(f"🔍 VERBOSE: {msg}")

    def run(self, *args: Any, **kwargs: Any) -> Any:
        """Stable entrypoint: delegates to process() and logs whatever escapes it."""
        try:
            return self.process(*args, **kwargs)
        except Exception as e:
            self.log_error(str(e))
            raise

    def increment_stat(self, stat: str, step: str, value: int = 1) -> None:
        if not isinstance(value, int):
            raise TypeError("value must be an int")
        cat = self.statistics.setdefault(stat, {})
        cat[step] = cat.get(step, 0) + value

    def set_stat(self, stat: str, step: str, value: Any) -> None:
        self.statistics.setdefault(stat, {})[step] = value

    def log_statistics(self, format: str = "table") -> None:
        """Log collected statistics in either 'table' or 'steps' format.

        Columns keep the order in which they were first recorded.
        """
        if format not in ("table", "steps"):
            raise ValueError("format must be 'table' or 'steps'")

        if not self.statistics:
            self.log_info("No statistics to show.")
            return

        steps: list[str] = []
        for cat_map in self.statistics.values():
            steps.extend(s for s in cat_map if s not in steps)

        if format == "steps":
            for category, cat_map in self.statistics.items():
                self.log_info(f"{category}")
                for step in steps:
                    self.log_info(f" - {step}: {cat_map.get(step, '-')} ")
            return

        cat_col = "Category"
        col_widths = [max(len(cat_col), max((len(c) for c in self.statistics), default=0))]
        for step in steps:
            widest = max((len(str(m.get(step, "-"))) for m in self.statistics.values()), default=0)
            col_widths.append(max(len(step), widest))

        header_cols = [cat_col] + steps
        self.log_info(" | ".join(h.ljust(w) for h, w in zip(header_cols, col_widths)))

        for category, cat_map in self.statistics.items():
            row = [category.ljust(col_widths[0])]
            for i, step in enumerate(steps, start=1):
                row.append(str(cat_map.get(step, "-")).rjust(col_widths[i]))
            self.log_info(" | ".join(row))

    @abstractmethod
    def process(self, *args: Any, **kwargs: Any) -> Any:
        raise NotImplementedError()
