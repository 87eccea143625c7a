"""Hierarchical device-type filter carried in the IR pinpointing frame.

A filter has three levels of 4, 4 and 6 bits. Code 0 at a level is a
wildcard, and once a level is a wildcard every deeper level must be one too
(``DISPLAY:*:*`` is fine, ``*:AD-DISPLAY:*`` is not).

Layout of the 14-bit code::

    bit 13..10  level1
    bit  9..6   level2
    bit  5..0   level3
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
import re

from loguru import logger

from quicktalk_sim.errors import ConfigurationError, MalformedFilterError

LEVEL_WIDTHS = (4, 4, 6)
FILTER_BITS = sum(LEVEL_WIDTHS)
WILDCARD = 0

_REGISTRY_LINE = re.compile(r"^([A-Z][A-Z0-9-]*)\s*=\s*(\d+)\.(\d+)\.(\d+)$")
_TRIPLE = re.compile(r"^(\d+)\.(\d+)\.(\d+)$")


def _check_widths(levels: tuple[int, int, int], error: type[ValueError]) -> None:
    for index, (value, width) in enumerate(zip(levels, LEVEL_WIDTHS), start=1):
        if not isinstance(value, int) or not 0 <= value < (1 << width):
            raise error(f"level{index} must fit {width} bits, got {value!r}")


@dataclass(frozen=True, order=True)
class DeviceTypeFilter:
    level1: int = WILDCARD
    level2: int = WILDCARD
    level3: int = WILDCARD

    def __post_init__(self) -> None:
        levels = self.levels
        _check_widths(levels, MalformedFilterError)
        if levels[0] == WILDCARD and (levels[1] or levels[2]):
            raise MalformedFilterError(f"wildcard level1 requires deeper wildcards, got {self}")
        if levels[1] == WILDCARD and levels[2]:
            raise MalformedFilterError(f"wildcard level2 requires a wildcard level3, got {self}")

    @property
    def levels(self) -> tuple[int, int, int]:
        return (self.level1, self.level2, self.level3)

    @property
    def is_concrete(self) -> bool:
        return WILDCARD not in self.levels

    def __str__(self) -> str:
        return ".".join(str(v) for v in self.levels)


ANY_FILTER = DeviceTypeFilter()


@dataclass(frozen=True, order=True)
class DeviceType:
    """The concrete type of an IoT device; no level may be a wildcard."""

    level1: int
    level2: int
    level3: int

    def __post_init__(self) -> None:
        _check_widths(self.levels, ConfigurationError)
        if WILDCARD in self.levels:
            raise ConfigurationError(f"device type levels must all be non-zero, got {self}")

    @property
    def levels(self) -> tuple[int, int, int]:
        return (self.level1, self.level2, self.level3)

    def as_filter(self) -> DeviceTypeFilter:
        return DeviceTypeFilter(*self.levels)

    def __str__(self) -> str:
        return ".".join(str(v) for v in self.levels)


def encode_filter(f: DeviceTypeFilter) -> int:
    """Pack a filter into its 14-bit code."""
    # re-validate: frozen dataclasses can still be forged via object.__setattr__
    DeviceTypeFilter(*f.levels)
    return (f.level1 << 10) | (f.level2 << 6) | f.level3


def decode_filter(code: int) -> DeviceTypeFilter:
    """Unpack a 14-bit code; raises MalformedFilterError on discipline violations."""
    if not isinstance(code, int) or not 0 <= code < (1 << FILTER_BITS):
        raise MalformedFilterError(f"filter code must fit {FILTER_BITS} bits, got {code!r}")
    return DeviceTypeFilter((code >> 10) & 0xF, (code >> 6) & 0xF, code & 0x3F)


def matches(filter: DeviceTypeFilter, device: DeviceType) -> bool:
    """True iff every filter level is a wildcard or equals the device's level."""
    return all(f == WILDCARD or f == d for f, d in zip(filter.levels, device.levels))


class DeviceTypeRegistry:
    """Name -> filter table loaded from ``NAME = l1.l2.l3`` lines.

    Names that resolve to a concrete triple can be used as device types; any
    name can be used as a filter. ``ANY`` is always available as the full
    wildcard.
    """

    def __init__(self, entries: dict[str, DeviceTypeFilter] | None = None, *, version: str = "") -> None:
        self._entries: dict[str, DeviceTypeFilter] = dict(entries or {})
        self.version = version

    @classmethod
    def parse(cls, text: str, *, source: str = "<registry>") -> DeviceTypeRegistry:
        entries: dict[str, DeviceTypeFilter] = {}
        version = ""
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if line.startswith("#"):
                if line[1:].strip().lower().startswith("version"):
                    version = line[1:].strip().split(None, 1)[-1].lstrip(":= ").strip()
                continue
            if not line:
                continue
            m = _REGISTRY_LINE.match(line)
            if not m:
                raise ConfigurationError(f"{source}:{lineno}: expected 'NAME = l1.l2.l3', got {raw!r}")
            name = m.group(1)
            if name in entries:
                raise ConfigurationError(f"{source}:{lineno}: duplicate device type {name}")
            try:
                entries[name] = DeviceTypeFilter(*(int(m.group(i)) for i in (2, 3, 4)))
            except MalformedFilterError as exc:
                raise ConfigurationError(f"{source}:{lineno}: {exc}") from None
        logger.debug("Loaded {} device types from {} (version {})", len(entries), source, version or "?")
        return cls(entries, version=version)

    @classmethod
    def load(cls, path: Path | None = None) -> DeviceTypeRegistry:
        """Load a registry file, or the packaged default when ``path`` is None."""
        if path is None:
            text = resources.files("quicktalk_sim.ir").joinpath("device_types.txt").read_text(encoding="utf8")
            return cls.parse(text, source="device_types.txt")
        return cls.parse(Path(path).read_text(encoding="utf8"), source=str(path))

    def names(self) -> list[str]:
        return sorted(self._entries)

    def items(self) -> list[tuple[str, DeviceTypeFilter]]:
        return sorted(self._entries.items(), key=lambda kv: (kv[1].levels, kv[0]))

    def resolve_filter(self, text: str) -> DeviceTypeFilter:
        """Resolve a registry name, ``ANY`` or a literal ``l1.l2.l3`` triple."""
        token = text.strip()
        if token.upper() == "ANY":
            return ANY_FILTER
        m = _TRIPLE.match(token)
        if m:
            try:
                return DeviceTypeFilter(*(int(g) for g in m.groups()))
            except MalformedFilterError as exc:
                raise ConfigurationError(str(exc)) from None
        try:
            return self._entries[token.upper()]
        except KeyError:
            raise ConfigurationError(f"unknown device type {token!r}") from None

    def resolve_type(self, text: str) -> DeviceType:
        f = self.resolve_filter(text)
        if not f.is_concrete:
            raise ConfigurationError(f"{text!r} is a partial type ({f}); a device needs a concrete type")
        return DeviceType(*f.levels)

    def name_of(self, f: DeviceTypeFilter) -> str | None:
        for name, entry in self._entries.items():
            if entry == f:
                return name
        return None
