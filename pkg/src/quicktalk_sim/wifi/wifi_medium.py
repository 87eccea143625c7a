"""Simulated 11-channel 2.4 GHz broadcast medium.

Nodes attach on a channel and receive every broadcast sent on it (and, in
MONITOR mode, unicast frames for other nodes too). Loss is drawn per receiver
with probability ``clamp(p0 + k * load, 0, 0.99)`` where ``load`` is the
share of airtime used on the channel over the trailing window. There is no
DCF, capture effect or hidden terminal; frames simply occupy airtime.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from enum import Enum
import math
from typing import Callable

from loguru import logger

from quicktalk_sim.engine.sim_engine import SimEngine
from quicktalk_sim.errors import ConfigurationError, SimulationError
from quicktalk_sim.shared import TICKS_PER_US, ms_to_ticks, ticks_to_ms

CHANNELS = range(1, 12)
MAX_PAYLOAD = 1500
MAC_OVERHEAD_BYTES = 28
DSSS_PREAMBLE_US = 192
OFDM_PREAMBLE_US = 20
MAX_LOSS = 0.99


class FrameKind(Enum):
    BEACON = "BEACON"
    ACK = "ACK"
    COMMAND = "COMMAND"
    RESPONSE = "RESPONSE"
    BACKGROUND = "BACKGROUND"


class RadioMode(Enum):
    MONITOR = "MONITOR"
    NORMAL = "NORMAL"


def check_channel(channel: int) -> int:
    if not isinstance(channel, int) or channel not in CHANNELS:
        raise ConfigurationError(f"channel must be within 1..11, got {channel!r}")
    return channel


def frame_airtime_ticks(size_bytes: int, rate_mbps: float) -> int:
    """Airtime of one frame: PHY preamble plus MAC header and payload at ``rate_mbps``.

    Rates up to 11 Mbps use the long DSSS preamble, faster ones the OFDM one.
    """
    if rate_mbps <= 0:
        raise ConfigurationError(f"rate must be > 0, got {rate_mbps}")
    preamble = DSSS_PREAMBLE_US if rate_mbps <= 11 else OFDM_PREAMBLE_US
    airtime_us = preamble + (size_bytes + MAC_OVERHEAD_BYTES) * 8 / rate_mbps
    return math.ceil(airtime_us * TICKS_PER_US)


@dataclass(frozen=True)
class BroadcastFrame:
    src_id: str
    channel: int
    kind: FrameKind
    payload: bytes
    airtime_ticks: int
    dst_id: str | None = None

    def __post_init__(self) -> None:
        check_channel(self.channel)
        if self.airtime_ticks <= 0:
            raise ValueError(f"airtime must be > 0, got {self.airtime_ticks}")
        if len(self.payload) > MAX_PAYLOAD:
            raise ValueError(f"payload of {len(self.payload)} bytes exceeds {MAX_PAYLOAD}")

    @property
    def airtime_us(self) -> float:
        return self.airtime_ticks / TICKS_PER_US


@dataclass
class MediumConfig:
    switch_delay_ms: float = 40.0
    p0: float = 0.0
    k: float = 0.3
    rssi: dict[int, float] = field(default_factory=dict)
    processing_ms: float = 3.0
    basic_rate_mbps: float = 1.0
    payload_rate_mbps: float = 54.0
    load_window_ms: float = 1000.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.p0 < 1.0:
            raise ConfigurationError(f"p0 must be within [0, 1), got {self.p0}")
        if self.k < 0:
            raise ConfigurationError(f"k must be >= 0, got {self.k}")
        if self.switch_delay_ms <= 0:
            raise ConfigurationError(f"switch delay must be > 0, got {self.switch_delay_ms}")
        if self.processing_ms < 0 or self.load_window_ms <= 0:
            raise ConfigurationError("processing time must be >= 0 and the load window > 0")
        for channel in self.rssi:
            check_channel(channel)

    def frame_airtime_ticks(self, kind: FrameKind, size_bytes: int) -> int:
        """Control broadcasts go at the basic rate, background traffic at the payload rate."""
        rate = self.payload_rate_mbps if kind is FrameKind.BACKGROUND else self.basic_rate_mbps
        return frame_airtime_ticks(size_bytes, rate)

    def loss_probability(self, load: float) -> float:
        return min(MAX_LOSS, max(0.0, self.p0 + self.k * load))


FrameHandler = Callable[[BroadcastFrame, int], None]


@dataclass
class NodeAttachment:
    node_id: str
    current_channel: int
    mode: RadioMode
    switching_until: int | None = None
    handlers: list[FrameHandler] = field(default_factory=list)

    def is_listening(self, at: int) -> bool:
        return self.switching_until is None or at >= self.switching_until


class WifiMedium:
    """Owned by one SimEngine; all mutation happens inside engine events."""

    def __init__(self, engine: SimEngine, config: MediumConfig | None = None) -> None:
        self.engine = engine
        self.config = config or MediumConfig()
        self._nodes: dict[str, NodeAttachment] = {}
        self._airtime: dict[int, deque[tuple[int, int]]] = defaultdict(deque)
        self._ambient: dict[int, float] = defaultdict(float)
        self.sent: dict[str, int] = defaultdict(int)
        self.sent_by_kind: dict[tuple[str, FrameKind], int] = defaultdict(int)
        self.delivered: int = 0
        self.observers: list[Callable[[BroadcastFrame, int], None]] = []

    @property
    def switch_delay_ticks(self) -> int:
        return ms_to_ticks(self.config.switch_delay_ms)

    @property
    def load_window_ticks(self) -> int:
        return ms_to_ticks(self.config.load_window_ms)

    def attach(self, node_id: str, channel: int, mode: RadioMode = RadioMode.NORMAL,
               handler: FrameHandler | None = None) -> NodeAttachment:
        if node_id in self._nodes:
            raise ConfigurationError(f"node {node_id!r} is already attached")
        attachment = NodeAttachment(node_id, check_channel(channel), mode)
        if handler is not None:
            attachment.handlers.append(handler)
        self._nodes[node_id] = attachment
        logger.debug("attach {} on channel {} ({})", node_id, channel, mode.value)
        return attachment

    def attachment(self, node_id: str) -> NodeAttachment:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise ConfigurationError(f"node {node_id!r} is not attached") from None

    def add_listener(self, node_id: str, handler: FrameHandler) -> None:
        self.attachment(node_id).handlers.append(handler)

    def set_mode(self, node_id: str, mode: RadioMode) -> None:
        self.attachment(node_id).mode = mode

    def set_channel(self, node_id: str, channel: int, now: int) -> int:
        """Retune a node; it is deaf and mute until the returned timestamp.

        Switching to the current channel costs the full delay as well.
        """
        att = self.attachment(node_id)
        att.current_channel = check_channel(channel)
        att.switching_until = now + self.switch_delay_ticks
        logger.trace("{} switching to channel {} until {:.3f} ms", node_id, channel, ticks_to_ms(att.switching_until))
        return att.switching_until

    def airtime_ticks(self, kind: FrameKind, size_bytes: int) -> int:
        return self.config.frame_airtime_ticks(kind, size_bytes)

    def make_frame(self, src_id: str, kind: FrameKind, payload: bytes, dst_id: str | None = None) -> BroadcastFrame:
        channel = self.attachment(src_id).current_channel
        return BroadcastFrame(src_id, channel, kind, payload, self.airtime_ticks(kind, len(payload)), dst_id)

    def add_ambient_load(self, channel: int, fraction: float) -> None:
        """Constant occupancy from traffic that is not simulated frame by frame."""
        self._ambient[check_channel(channel)] += fraction

    def channel_load(self, channel: int, now: int, window: int | None = None) -> float:
        """Share of airtime occupied on ``channel`` during [now - window, now].

        Frames are kept for ``load_window_ms`` only, so ``window`` may not be
        longer than that. Raise ``medium.load_window_ms`` to look further back.
        """
        window = self.load_window_ticks if window is None else window
        if window <= 0 or window > self.load_window_ticks:
            raise ValueError(
                f"window must be within (0, {self.load_window_ticks}] ticks (medium.load_window_ms), got {window}"
            )
        start = now - window
        busy = 0
        for begin, end in self._airtime.get(channel, ()):
            overlap = min(end, now) - max(begin, start)
            if overlap > 0:
                busy += overlap
        return min(1.0, busy / window + self._ambient.get(channel, 0.0))

    def _account(self, frame: BroadcastFrame, now: int) -> None:
        log = self._airtime[frame.channel]
        log.append((now, now + frame.airtime_ticks))
        horizon = now - self.load_window_ticks
        while log and log[0][1] < horizon:
            log.popleft()

    def broadcast(self, frame: BroadcastFrame, now: int) -> list[tuple[str, bool]]:
        """Send ``frame``; returns (receiver, delivered) for every node that could hear it.

        Loss is drawn at send time from the sender's own random stream, so one
        node's traffic never shifts another node's loss draws. Delivery happens
        ``airtime`` later and is re-checked against the receiver's channel and
        switching state at that moment.
        """
        sender = self.attachment(frame.src_id)
        if sender.current_channel != frame.channel:
            raise SimulationError(f"{frame.src_id} sends on {frame.channel} but is tuned to {sender.current_channel}")
        if not sender.is_listening(now):
            raise SimulationError(f"{frame.src_id} cannot transmit while switching channels")

        p_loss = self.config.loss_probability(self.channel_load(frame.channel, now))
        self._account(frame, now)
        self.sent[frame.src_id] += 1
        self.sent_by_kind[(frame.src_id, frame.kind)] += 1
        for observer in self.observers:
            observer(frame, now)

        rng = self.engine.rng_stream(f"wifi.{frame.src_id}")
        deliver_at = now + frame.airtime_ticks
        outcomes: list[tuple[str, bool]] = []
        for node_id, att in self._nodes.items():
            if node_id == frame.src_id or att.current_channel != frame.channel:
                continue
            if frame.dst_id is not None and att.mode is RadioMode.NORMAL and node_id != frame.dst_id:
                continue
            lost = rng.random() < p_loss
            outcomes.append((node_id, not lost and att.is_listening(deliver_at)))

        receivers = [node_id for node_id, ok in outcomes if ok]
        if receivers:
            self.engine.schedule(frame.airtime_ticks, self._deliver, frame, receivers, label=f"deliver.{frame.kind.value}")
        logger.trace("{} {} on ch{} p_loss={:.3f} -> {}", frame.src_id, frame.kind.value, frame.channel, p_loss, outcomes)
        return outcomes

    def _deliver(self, frame: BroadcastFrame, receivers: list[str]) -> None:
        now = self.engine.now
        for node_id in receivers:
            att = self._nodes[node_id]
            if att.current_channel != frame.channel or not att.is_listening(now):
                continue
            self.delivered += 1
            for handler in list(att.handlers):
                handler(frame, now)

    def scan_rssi(self, node_id: str) -> list[tuple[int, float]]:
        """Known AP channels, strongest first (ties broken by channel number)."""
        self.attachment(node_id)
        return sorted(self.config.rssi.items(), key=lambda item: (-item[1], item[0]))
