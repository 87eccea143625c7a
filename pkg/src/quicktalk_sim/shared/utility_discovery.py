"""Find the subcommands of quicktalk-sim.

Every public module in ``quicktalk_sim.utils`` is imported and each
BaseUtility subclass found in it is registered under its ``command`` name.
"""
from __future__ import annotations

import importlib
import pkgutil
from typing import TYPE_CHECKING

from loguru import logger

if TYPE_CHECKING:
    from quicktalk_sim.utils.base_utility import BaseUtility


def discover_utilities() -> dict[str, type[BaseUtility]]:
    """Map command names to utility classes, sorted by command name."""
    from quicktalk_sim.utils.base_utility import BaseUtility
    import quicktalk_sim.utils

    utilities: dict[str, type[BaseUtility]] = {}

    for _, module_name, ispkg in pkgutil.iter_modules(quicktalk_sim.utils.__path__):
        if module_name.startswith("_") or ispkg or module_name == "base_utility":
            continue

        try:
            module = importlib.import_module(f"quicktalk_sim.utils.{module_name}")
        except ImportError as exc:
            logger.debug("skipping utils.{}: {}", module_name, exc)
            continue

        for attr in vars(module).values():
            if isinstance(attr, type) and issubclass(attr, BaseUtility) and attr is not BaseUtility:
                command_name = getattr(attr, "command", None)
                if command_name:
                    utilities[command_name] = attr

    return dict(sorted(utilities.items()))
