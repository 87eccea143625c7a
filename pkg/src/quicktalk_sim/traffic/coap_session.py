"""Periodic CoAP-style request/response exchanges through the AP.

Sessions are load generators: the request leaves the AP every interval and
the response follows after the request airtime plus processing, whether or
not either frame was delivered. QuickTalk traffic therefore couples to a
session only through channel occupancy.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from loguru import logger

from quicktalk_sim.engine.sim_engine import EventHandle, SimEngine
from quicktalk_sim.errors import ConfigurationError
from quicktalk_sim.shared import TICKS_PER_S, ms_to_ticks
from quicktalk_sim.wifi.wifi_medium import FrameKind, WifiMedium

AP_NODE = "ap"


@dataclass
class CoapConfig:
    iot_node: str
    interval_s: float
    request_bytes: int = 64
    response_bytes: int = 64
    offset_ms: float = 0.0

    def __post_init__(self) -> None:
        if self.interval_s <= 0:
            raise ConfigurationError(f"CoAP interval must be > 0, got {self.interval_s}")
        if self.request_bytes <= 0 or self.response_bytes <= 0:
            raise ConfigurationError("CoAP frame sizes must be > 0")
        if self.offset_ms < 0:
            raise ConfigurationError(f"CoAP offset must be >= 0, got {self.offset_ms}")


@dataclass
class CoapSession:
    config: CoapConfig
    engine: SimEngine
    medium: WifiMedium
    ap_node: str = AP_NODE
    requests_sent: int = 0
    responses_sent: int = 0
    send_times: list[int] = field(default_factory=list)
    _handle: EventHandle | None = None
    _stop_at: int | None = None

    @property
    def interval_ticks(self) -> int:
        return round(self.config.interval_s * TICKS_PER_S)

    def start(self, stop_at: int | None = None) -> None:
        self._stop_at = stop_at
        self._handle = self.engine.schedule(ms_to_ticks(self.config.offset_ms), self._tick, label="coap.request")

    def stop(self) -> None:
        if self._handle is not None:
            self._handle.cancel()
            self._handle = None

    def _tick(self) -> None:
        now = self.engine.now
        if self._stop_at is not None and now >= self._stop_at:
            self._handle = None
            return
        request = self.medium.make_frame(self.ap_node, FrameKind.BACKGROUND,
                                         bytes(self.config.request_bytes), self.config.iot_node)
        self.medium.broadcast(request, now)
        self.requests_sent += 1
        self.send_times.append(now)
        delay = request.airtime_ticks + ms_to_ticks(self.medium.config.processing_ms)
        self.engine.schedule(delay, self._respond, label="coap.response")
        self._handle = self.engine.schedule(self.interval_ticks, self._tick, label="coap.request")

    def _respond(self) -> None:
        now = self.engine.now
        response = self.medium.make_frame(self.config.iot_node, FrameKind.BACKGROUND,
                                          bytes(self.config.response_bytes), self.ap_node)
        self.medium.broadcast(response, now)
        self.responses_sent += 1
        self.send_times.append(now)


def run_coap_session(config: CoapConfig, engine: SimEngine, medium: WifiMedium, *,
                     ap_node: str = AP_NODE, stop_at: int | None = None) -> CoapSession:
    """Start a session on the engine; both endpoints must already be attached."""
    session = CoapSession(config, engine, medium, ap_node)
    ap_channel = medium.attachment(ap_node).current_channel
    node_channel = medium.attachment(config.iot_node).current_channel
    if ap_channel != node_channel:
        raise ConfigurationError(
            f"CoAP node {config.iot_node} is on channel {node_channel}, the AP on {ap_channel}")
    session.start(stop_at)
    logger.debug("CoAP session {} every {} s on channel {}", config.iot_node, config.interval_s, ap_channel)
    return session
