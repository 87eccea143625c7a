"""User side of QuickTalk.

A transaction is: emit the IR frame, switch to WiFi, sweep channels until a
beacon carrying our user id turns up, acknowledge it, then send the command
on that channel (retransmitting on a fixed interval) until the response
arrives or the command timeout passes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from loguru import logger
import numpy as np

from quicktalk_sim.engine.metrics import MetricsSink, TransactionRecord
from quicktalk_sim.engine.sim_engine import EventHandle, SimEngine
from quicktalk_sim.errors import ConfigurationError, DeviceBusyError, MalformedPayloadError
from quicktalk_sim.ir.device_filter import ANY_FILTER, DeviceTypeFilter
from quicktalk_sim.ir.ir_codec import PulseTrain, encode_frame, frame_to_pulses
from quicktalk_sim.ir.ir_link import IrSpace
from quicktalk_sim.shared import ms_to_ticks, ticks_to_ms
from quicktalk_sim.wifi.payloads import Ack, Beacon, Command, Response
from quicktalk_sim.wifi.wifi_medium import CHANNELS, BroadcastFrame, FrameKind, RadioMode, WifiMedium


class UserPhase(Enum):
    IDLE = "IDLE"
    IR_SENT = "IR_SENT"
    SWEEPING = "SWEEPING"
    COMMANDING = "COMMANDING"
    DONE = "DONE"
    FAILED = "FAILED"


TERMINAL_PHASES = (UserPhase.IDLE, UserPhase.DONE, UserPhase.FAILED)


@dataclass
class UserConfig:
    k_top: int = 4
    rounds: int = 3
    dwell_ms: float = 50.0
    retx_ms: float = 250.0
    command_timeout_ms: float = 5000.0
    ctx_switch_ms: float = 3.0

    def __post_init__(self) -> None:
        if not 1 <= self.k_top <= len(CHANNELS):
            raise ConfigurationError(f"k_top must be within 1..{len(CHANNELS)}, got {self.k_top}")
        if self.rounds < 1:
            raise ConfigurationError(f"rounds must be >= 1, got {self.rounds}")
        if self.dwell_ms <= 0 or self.command_timeout_ms <= 0:
            raise ConfigurationError("dwell and command timeout must be > 0")
        if self.retx_ms < 0 or self.ctx_switch_ms < 0:
            raise ConfigurationError("retransmission interval and context switch must be >= 0")


@dataclass(frozen=True)
class SweepPlan:
    channels: tuple[int, ...]
    rounds: int

    @property
    def order(self) -> tuple[int, ...]:
        return self.channels * self.rounds

    def __len__(self) -> int:
        return len(self.channels) * self.rounds


def build_sweep_plan(rssi: list[tuple[int, float]], rng: np.random.Generator,
                     k_top: int = 4, rounds: int = 3) -> SweepPlan:
    """Top-k channels by RSSI rotated from a random start, then the rest ascending.

    ``rssi`` must already be strongest first. The same round is repeated
    ``rounds`` times.
    """
    top = [channel for channel, _ in rssi[:k_top]]
    if top:
        start = int(rng.integers(len(top)))
        top = top[start:] + top[:start]
    rest = [channel for channel in CHANNELS if channel not in top]
    return SweepPlan(tuple(top + rest), rounds)


@dataclass
class _Transaction:
    txn_id: int
    body: bytes
    started: int
    ir_ticks: int
    wifi_start: int = 0
    plan: SweepPlan | None = None
    index: int = 0
    channel: int | None = None
    device_id: str | None = None
    t_search: int = 0
    first_command_at: int = 0
    deadline: int = 0
    retx_count: int = 0
    handles: list[EventHandle] = field(default_factory=list)


class UserDevice:
    def __init__(
        self,
        engine: SimEngine,
        medium: WifiMedium,
        ir_space: IrSpace,
        node_id: str,
        user_id: int,
        *,
        config: UserConfig | None = None,
        sink: MetricsSink | None = None,
    ) -> None:
        self.engine = engine
        self.medium = medium
        self.ir_space = ir_space
        self.node_id = node_id
        self.user_id = user_id
        self.config = config or UserConfig()
        self.sink = sink if sink is not None else MetricsSink()
        self.phase = UserPhase.IDLE
        self.completion_listeners: list[Callable[[TransactionRecord], None]] = []
        self._rng = engine.rng_stream(f"user.{node_id}.sweep")
        self._next_txn = 1
        self._txn: _Transaction | None = None
        self.last_response: Response | None = None
        scan = medium.config.rssi
        initial = max(scan, key=lambda ch: (scan[ch], -ch)) if scan else 1
        medium.attach(node_id, initial, RadioMode.MONITOR, self.on_frame)

    @property
    def transaction(self) -> _Transaction | None:
        return self._txn

    def _visit_ticks(self) -> int:
        return self.medium.switch_delay_ticks + ms_to_ticks(self.config.dwell_ms)

    def _after(self, delay: int, action: Callable, *args, label: str) -> EventHandle:
        handle = self.engine.schedule(delay, action, *args, label=label)
        self._txn.handles.append(handle)
        return handle

    def start_quicktalk(self, command: bytes = b"TOGGLE", filter: DeviceTypeFilter = ANY_FILTER) -> int:
        """Emit the IR frame for ``filter`` now; returns the new transaction id."""
        if self.phase not in TERMINAL_PHASES:
            raise DeviceBusyError(f"{self.node_id} is busy ({self.phase.value})")
        now = self.engine.now
        frame = encode_frame(self.user_id, filter)
        train = frame_to_pulses(frame)
        self._txn = _Transaction(self._next_txn, command, now, train.duration_ticks)
        self._next_txn += 1
        self.phase = UserPhase.IR_SENT
        logger.debug("{} txn {} IR {} ({:.3f} ms)", self.node_id, self._txn.txn_id, frame.hex, train.duration_ms)
        self._after(train.duration_ticks, self._ir_done, train, label="user.ir_done")
        return self._txn.txn_id

    def _ir_done(self, train: PulseTrain) -> None:
        self.ir_space.deliver(train, self.engine.now)
        self._after(ms_to_ticks(self.config.ctx_switch_ms), self._start_sweep, label="user.ctx_switch")

    def _start_sweep(self) -> None:
        txn = self._txn
        txn.wifi_start = self.engine.now
        txn.plan = build_sweep_plan(self.medium.scan_rssi(self.node_id), self._rng,
                                    self.config.k_top, self.config.rounds)
        self.phase = UserPhase.SWEEPING
        self.sweep_tick()

    def sweep_tick(self) -> int | None:
        """Move to the next planned channel; returns when the next tick fires."""
        txn = self._txn
        if self.phase is not UserPhase.SWEEPING:
            return None
        now = self.engine.now
        if txn.index >= len(txn.plan):
            txn.t_search = now - txn.wifi_start
            logger.debug("{} txn {} found no beacon after {} visits", self.node_id, txn.txn_id, len(txn.plan))
            timeout = ms_to_ticks(self.config.command_timeout_ms)
            self._finish(False, t_command=timeout, t_e2e=txn.ir_ticks + ms_to_ticks(self.config.ctx_switch_ms)
                         + txn.t_search + timeout)
            return None
        channel = txn.plan.order[txn.index]
        txn.index += 1
        self.medium.set_channel(self.node_id, channel, now)
        handle = self._after(self._visit_ticks(), self.sweep_tick, label="user.sweep")
        return handle.timestamp

    def on_frame(self, frame: BroadcastFrame, now: int) -> None:
        if self.phase is UserPhase.SWEEPING and frame.kind is FrameKind.BEACON:
            try:
                beacon = Beacon.unpack(frame.payload)
            except MalformedPayloadError as exc:
                logger.warning("{} dropped malformed beacon: {}", self.node_id, exc)
                return
            if beacon.user_id == self.user_id:
                self._detected(frame.channel, beacon.device_id, now)
        elif self.phase is UserPhase.COMMANDING and frame.kind is FrameKind.RESPONSE:
            try:
                response = Response.unpack(frame.payload)
            except MalformedPayloadError as exc:
                logger.warning("{} dropped malformed response: {}", self.node_id, exc)
                return
            txn = self._txn
            if (response.user_id, response.device_id, response.txn_id) == (self.user_id, txn.device_id, txn.txn_id):
                self.last_response = response
                self._finish(True, t_command=now - txn.first_command_at, t_e2e=now - txn.started)

    def _detected(self, channel: int, device_id: str, now: int) -> None:
        txn = self._txn
        self._cancel_pending()
        txn.channel = channel
        txn.device_id = device_id
        txn.t_search = now - txn.wifi_start
        self.phase = UserPhase.COMMANDING
        logger.debug("{} txn {} found {} on channel {} after {:.3f} ms",
                     self.node_id, txn.txn_id, device_id, channel, ticks_to_ms(txn.t_search))
        self._after(ms_to_ticks(self.medium.config.processing_ms), self._send_ack, label="user.ack")

    def _send_ack(self) -> None:
        txn = self._txn
        ack = self.medium.make_frame(self.node_id, FrameKind.ACK, Ack(self.user_id, txn.device_id).pack(), txn.device_id)
        self.medium.broadcast(ack, self.engine.now)
        self._after(ack.airtime_ticks, self.command_loop, label="user.command")

    def command_loop(self) -> None:
        """First command transmission; arms the retransmit timer and the timeout."""
        txn = self._txn
        if self.phase is not UserPhase.COMMANDING:
            return
        now = self.engine.now
        txn.first_command_at = now
        txn.deadline = now + ms_to_ticks(self.config.command_timeout_ms)
        self._send_command()
        self._arm_retransmit()
        self._after(txn.deadline - now, self._command_timeout, label="user.timeout")

    def _send_command(self) -> None:
        txn = self._txn
        payload = Command(self.user_id, txn.device_id, txn.txn_id, txn.body).pack()
        self.medium.broadcast(self.medium.make_frame(self.node_id, FrameKind.COMMAND, payload, txn.device_id),
                              self.engine.now)

    def _arm_retransmit(self) -> None:
        retx = ms_to_ticks(self.config.retx_ms)
        if retx > 0 and self.engine.now + retx < self._txn.deadline:
            self._after(retx, self._retransmit, label="user.retx")

    def _retransmit(self) -> None:
        if self.phase is not UserPhase.COMMANDING:
            return
        self._txn.retx_count += 1
        self._send_command()
        self._arm_retransmit()

    def _command_timeout(self) -> None:
        if self.phase is not UserPhase.COMMANDING:
            return
        txn = self._txn
        logger.debug("{} txn {} command timed out after {} retransmissions", self.node_id, txn.txn_id, txn.retx_count)
        self._finish(False, t_command=txn.deadline - txn.first_command_at, t_e2e=self.engine.now - txn.started)

    def _cancel_pending(self) -> None:
        for handle in self._txn.handles:
            handle.cancel()
        self._txn.handles.clear()

    def _finish(self, success: bool, *, t_command: int, t_e2e: int) -> TransactionRecord:
        txn = self._txn
        self._cancel_pending()
        self.phase = UserPhase.DONE if success else UserPhase.FAILED
        record = TransactionRecord(
            txn_id=txn.txn_id,
            user=self.node_id,
            seed=self.engine.seed,
            t_ir_ms=ticks_to_ms(txn.ir_ticks),
            t_search_ms=ticks_to_ms(txn.t_search),
            t_command_ms=ticks_to_ms(t_command),
            t_e2e_ms=ticks_to_ms(t_e2e),
            retx_count=txn.retx_count,
            success=success,
            channel=txn.channel,
            started_ms=ticks_to_ms(txn.started),
        )
        self.sink.add(record)
        for listener in self.completion_listeners:
            listener(record)
        return record
