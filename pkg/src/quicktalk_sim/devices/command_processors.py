"""Application stubs behind ``processCommand`` on the IoT side."""
from __future__ import annotations

from typing import Protocol

from quicktalk_sim.errors import ConfigurationError
from quicktalk_sim.wifi.payloads import Status


class CommandProcessor(Protocol):
    name: str

    def process(self, body: bytes) -> tuple[Status, bytes]: ...


class EchoProcessor:
    name = "echo"

    def process(self, body: bytes) -> tuple[Status, bytes]:
        return Status.OK, body


class BulbProcessor:
    """ON / OFF / TOGGLE / STATUS against a single lamp state."""

    name = "bulb"

    def __init__(self, on: bool = False) -> None:
        self.on = on

    def process(self, body: bytes) -> tuple[Status, bytes]:
        verb = body.strip().upper()
        if verb == b"ON":
            self.on = True
        elif verb == b"OFF":
            self.on = False
        elif verb == b"TOGGLE":
            self.on = not self.on
        elif verb != b"STATUS":
            return Status.BAD_REQUEST, b"unknown bulb command"
        return Status.OK, b"ON" if self.on else b"OFF"


class SensorProcessor:
    """READ returns a deterministic reading that advances per read."""

    name = "sensor"

    def __init__(self, base: float = 21.5, step: float = 0.1) -> None:
        self.base = base
        self.step = step
        self.reads = 0

    def process(self, body: bytes) -> tuple[Status, bytes]:
        if body.strip().upper() != b"READ":
            return Status.BAD_REQUEST, b"sensor only supports READ"
        value = self.base + self.step * (self.reads % 10)
        self.reads += 1
        return Status.OK, f"{value:.1f}C".encode("ascii")


PROCESSORS: dict[str, type] = {
    EchoProcessor.name: EchoProcessor,
    BulbProcessor.name: BulbProcessor,
    SensorProcessor.name: SensorProcessor,
}


def make_processor(name: str) -> CommandProcessor:
    try:
        return PROCESSORS[name]()
    except KeyError:
        raise ConfigurationError(f"unknown command processor {name!r}; choose from {sorted(PROCESSORS)}") from None
