"""IoT side of QuickTalk.

The IR receiver is always on. A decodable frame whose filter matches the
device type wakes the WiFi side, which broadcasts the captured user id on the
device's current channel until the user acknowledges (or the sweep timeout
passes) and then answers that user's commands until the session goes quiet.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from loguru import logger

from quicktalk_sim.devices.command_processors import CommandProcessor, EchoProcessor
from quicktalk_sim.engine.sim_engine import EventHandle, SimEngine
from quicktalk_sim.errors import ConfigurationError, MalformedPayloadError
from quicktalk_sim.ir.device_filter import DeviceType, matches
from quicktalk_sim.ir.ir_codec import DecodeResult
from quicktalk_sim.shared import TICKS_PER_S, ms_to_ticks, ticks_to_ms
from quicktalk_sim.wifi.payloads import Ack, Beacon, Command, Response, Status
from quicktalk_sim.wifi.wifi_medium import BroadcastFrame, FrameKind, RadioMode, WifiMedium

UNREGISTERED_CHANNEL = 1


class IotPhase(Enum):
    DORMANT = "DORMANT"
    BEACONING = "BEACONING"
    SESSION = "SESSION"
    DORMANT_AGAIN = "DORMANT_AGAIN"


ACTIVE_PHASES = (IotPhase.BEACONING, IotPhase.SESSION)


class GateDecision(Enum):
    TRIGGERED = "triggered"
    NOT_DECODABLE = "not_decodable"
    TYPE_MISMATCH = "type_mismatch"


@dataclass
class IotConfig:
    beacon_ms: float = 50.0
    sweep_timeout_ms: float = 5000.0
    session_timeout_ms: float = 10000.0
    ir_receiver_mw: float = 15.8
    wifi_active_mw: float = 1100.0


@dataclass(frozen=True)
class EnergySnapshot:
    elapsed_ms: dict[IotPhase, float]
    energy_mj: dict[IotPhase, float]
    ir_receiver_mw: float = 0.0

    @property
    def total_mj(self) -> float:
        return sum(self.energy_mj.values())

    @property
    def ir_share(self) -> float:
        """Fraction of the total energy spent by the IR receiver."""
        total = self.total_mj
        if total == 0:
            return 0.0
        ir_mj = sum(self.elapsed_ms.values()) / 1000 * self.ir_receiver_mw
        return ir_mj / total


@dataclass
class EnergyLedger:
    """Accumulates time per phase; energy = sum(phase power x phase time)."""

    ir_receiver_mw: float = 15.8
    wifi_active_mw: float = 1100.0
    phase: IotPhase = IotPhase.DORMANT
    since: int = 0
    elapsed: dict[IotPhase, int] = field(default_factory=lambda: {p: 0 for p in IotPhase})

    def power_mw(self, phase: IotPhase) -> float:
        if phase in ACTIVE_PHASES:
            return self.ir_receiver_mw + self.wifi_active_mw
        return self.ir_receiver_mw

    def enter(self, phase: IotPhase, now: int) -> None:
        self.elapsed[self.phase] += now - self.since
        self.phase = phase
        self.since = now

    def snapshot(self, now: int) -> EnergySnapshot:
        elapsed = dict(self.elapsed)
        elapsed[self.phase] += now - self.since
        elapsed_ms = {p: ticks_to_ms(t) for p, t in elapsed.items()}
        # mW x s = mJ
        energy = {p: self.power_mw(p) * elapsed[p] / TICKS_PER_S for p in elapsed}
        return EnergySnapshot(elapsed_ms, energy, self.ir_receiver_mw)


@dataclass
class _Session:
    responses: dict[int, Response] = field(default_factory=dict)


class IotDevice:
    def __init__(
        self,
        engine: SimEngine,
        medium: WifiMedium,
        device_id: str,
        device_type: DeviceType,
        *,
        home_channel: int | None = None,
        registered: bool = False,
        config: IotConfig | None = None,
        processor: CommandProcessor | None = None,
    ) -> None:
        self.engine = engine
        self.medium = medium
        self.node_id = device_id
        self.device_id = device_id
        self.device_type = device_type
        if registered and home_channel is None:
            raise ConfigurationError(f"{device_id}: a registered device needs the channel of its AP")
        self.registered = registered
        self.home_channel = home_channel if home_channel is not None else UNREGISTERED_CHANNEL
        self.config = config or IotConfig()
        self.processor = processor or EchoProcessor()
        self.phase = IotPhase.DORMANT
        self.captured_user_id: int | None = None
        self.energy = EnergyLedger(self.config.ir_receiver_mw, self.config.wifi_active_mw, since=engine.now)
        self.beacons_sent = 0
        self.responses_sent = 0
        self.commands_received = 0
        self.triggers = 0
        self._sessions: dict[int, _Session] = {}
        self._beacon_handle: EventHandle | None = None
        self._beacon_deadline = 0
        self._session_handle: EventHandle | None = None
        self.medium.attach(device_id, self.home_channel, RadioMode.NORMAL, self.on_frame)

    @property
    def processing_ticks(self) -> int:
        return ms_to_ticks(self.medium.config.processing_ms)

    def _enter(self, phase: IotPhase) -> None:
        if phase is self.phase:
            return
        logger.debug("{} {} -> {} at {:.3f} ms", self.device_id, self.phase.value, phase.value, ticks_to_ms(self.engine.now))
        self.energy.enter(phase, self.engine.now)
        self.phase = phase
        self.medium.set_mode(self.device_id, RadioMode.MONITOR if phase in ACTIVE_PHASES else RadioMode.NORMAL)

    # IR service

    def on_ir_frame(self, result: DecodeResult, now: int) -> GateDecision:
        """Parity and type gate; a pass starts (or restarts) beaconing for the sender."""
        if not result.is_decodable:
            logger.trace("{} ignores IR reception: {}", self.device_id, result.outcome.value)
            return GateDecision.NOT_DECODABLE
        frame = result.frame
        if not matches(frame.filter, self.device_type):
            logger.trace("{} ({}) filtered out by {}", self.device_id, self.device_type, frame.filter)
            return GateDecision.TYPE_MISMATCH

        self.triggers += 1
        self.captured_user_id = frame.user_id
        if self._beacon_handle is not None:
            self._beacon_handle.cancel()
        self._enter(IotPhase.BEACONING)
        self._beacon_deadline = now + ms_to_ticks(self.config.sweep_timeout_ms)
        self._beacon_handle = self.engine.schedule(self.processing_ticks, self.beacon_loop, label="iot.beacon")
        return GateDecision.TRIGGERED

    # WiFi service

    def beacon_loop(self) -> IotPhase:
        """One beacon period: send, then re-arm until the sweep timeout."""
        now = self.engine.now
        if self.phase is not IotPhase.BEACONING:
            return self.phase
        if now >= self._beacon_deadline:
            self._beacon_handle = None
            logger.debug("{} sweep timeout after {} beacons", self.device_id, self.beacons_sent)
            self._enter(IotPhase.SESSION if self._sessions else IotPhase.DORMANT)
            return self.phase
        beacon = Beacon(self.captured_user_id, self.device_id)
        self.medium.broadcast(self.medium.make_frame(self.device_id, FrameKind.BEACON, beacon.pack()), now)
        self.beacons_sent += 1
        self._beacon_handle = self.engine.schedule(ms_to_ticks(self.config.beacon_ms), self.beacon_loop, label="iot.beacon")
        return self.phase

    def on_frame(self, frame: BroadcastFrame, now: int) -> None:
        if frame.kind is FrameKind.ACK:
            try:
                ack = Ack.unpack(frame.payload)
            except MalformedPayloadError as exc:
                logger.warning("{} dropped malformed ACK: {}", self.device_id, exc)
                return
            if ack.device_id == self.device_id:
                self._acknowledged(ack.user_id, now)
        elif frame.kind is FrameKind.COMMAND:
            try:
                command = Command.unpack(frame.payload)
            except MalformedPayloadError as exc:
                logger.warning("{} dropped malformed COMMAND: {}", self.device_id, exc)
                return
            if command.device_id != self.device_id:
                return
            # a command from the user being beaconed doubles as its acknowledgement
            self._acknowledged(command.user_id, now)
            self.serve_commands(command, now)

    def _acknowledged(self, user_id: int, now: int) -> None:
        if self.phase is not IotPhase.BEACONING or user_id != self.captured_user_id:
            return
        if self._beacon_handle is not None:
            self._beacon_handle.cancel()
            self._beacon_handle = None
        self._sessions.setdefault(user_id, _Session())
        self._enter(IotPhase.SESSION)
        self._touch_session(now)

    def serve_commands(self, command: Command, now: int) -> Response | None:
        """Answer one captured command; duplicates get the cached response again."""
        session = self._sessions.get(command.user_id)
        if session is None:
            return None
        self.commands_received += 1
        response = session.responses.get(command.txn_id)
        if response is None:
            status, body = self.processor.process(command.body)
            response = Response(command.user_id, self.device_id, command.txn_id, status, body)
            session.responses[command.txn_id] = response
            if status is not Status.OK:
                logger.debug("{} answers txn {} with {}", self.device_id, command.txn_id, status.name)
        self._touch_session(now)
        self.engine.schedule(self.processing_ticks, self._send_response, response, label="iot.response")
        return response

    def _send_response(self, response: Response) -> None:
        frame = self.medium.make_frame(self.device_id, FrameKind.RESPONSE, response.pack())
        self.medium.broadcast(frame, self.engine.now)
        self.responses_sent += 1

    def _touch_session(self, now: int) -> None:
        if self._session_handle is not None:
            self._session_handle.cancel()
        self._session_handle = self.engine.schedule(
            ms_to_ticks(self.config.session_timeout_ms), self._session_expired, label="iot.session_timeout")

    def _session_expired(self) -> None:
        self._session_handle = None
        self._sessions.clear()
        if self.phase is IotPhase.SESSION:
            self._enter(IotPhase.DORMANT_AGAIN)

    def energy_report(self, now: int | None = None) -> EnergySnapshot:
        return self.energy.snapshot(self.engine.now if now is None else now)
