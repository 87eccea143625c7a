"""Exception types raised by quicktalk-sim.

All of them derive from builtin exceptions so callers that only care about
"bad value" or "runtime failure" can keep catching ``ValueError`` and
``RuntimeError``.
"""
from __future__ import annotations

from pathlib import Path


class FrameWidthError(ValueError):
    """An IR frame field does not fit its bit width."""


class MalformedFilterError(ValueError):
    """A device-type filter violates its widths or the wildcard prefix rule."""


class ConfigurationError(ValueError):
    """Invalid topology or knob value (duplicate node, channel out of range, ...)."""


class ScenarioError(ConfigurationError):
    """A scenario file could not be loaded.

    Carries the source path and the 1-based line number so the CLI can point
    at the offending line.
    """

    def __init__(self, message: str, *, path: Path | str | None = None, line: int | str | None = None) -> None:
        self.message = message
        self.path = path
        self.line = line
        super().__init__(self.__str__())

    def __str__(self) -> str:
        where = str(self.path) if self.path is not None else "<scenario>"
        if self.line is not None:
            where = f"{where}:{self.line}"
        return f"{where}: {self.message}"


class SimulationError(RuntimeError):
    """An internal invariant was breached while a simulation was running."""


class MalformedPayloadError(ValueError):
    """A captured WiFi payload could not be parsed."""


class DeviceBusyError(RuntimeError):
    """A user device was asked to start a transaction while one is in flight."""
