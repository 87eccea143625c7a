"""Build a simulated world from a Scenario and run its transactions."""
from __future__ import annotations

from dataclasses import dataclass, field

from loguru import logger

from quicktalk_sim.devices.command_processors import make_processor
from quicktalk_sim.devices.iot_device import EnergySnapshot, IotDevice
from quicktalk_sim.devices.user_device import UserDevice
from quicktalk_sim.engine.metrics import MetricsSink, RunSummary, TransactionRecord, summarize
from quicktalk_sim.engine.sim_engine import SimEngine
from quicktalk_sim.ir.ir_link import IrSpace
from quicktalk_sim.scenario.scenario import Scenario
from quicktalk_sim.shared import TICKS_PER_S, ms_to_ticks, ticks_to_ms
from quicktalk_sim.traffic.coap_session import AP_NODE, CoapSession, run_coap_session
from quicktalk_sim.traffic.download_flow import DownloadFlow
from quicktalk_sim.wifi.wifi_medium import WifiMedium

# the longest IR frame is about 104 ms
_IR_ALLOWANCE = ms_to_ticks(200)
_STEP = TICKS_PER_S


@dataclass
class World:
    scenario: Scenario
    engine: SimEngine
    medium: WifiMedium
    ir_space: IrSpace
    sink: MetricsSink
    users: dict[str, UserDevice] = field(default_factory=dict)
    iots: dict[str, IotDevice] = field(default_factory=dict)
    sessions: list[CoapSession] = field(default_factory=list)
    download: DownloadFlow | None = None


@dataclass
class RunResult:
    scenario: Scenario
    seed: int
    records: list[TransactionRecord]
    summary: RunSummary
    download_mbps: float | None
    energy: dict[str, EnergySnapshot]
    events: int
    sim_time_ms: float
    trace: list[tuple[int, int, str]] | None = None


class TransactionDriver:
    """Starts a user's transactions every ``interval``, or when the previous one ends if later."""

    def __init__(self, world: World, user: UserDevice, runs: int, interval: int, offset: int = 0) -> None:
        self.world = world
        self.user = user
        self.runs = runs
        self.interval = interval
        self.offset = offset
        self.started = 0
        self.completed = 0
        user.completion_listeners.append(self._completed)

    @property
    def done(self) -> bool:
        return self.completed >= self.runs

    def start(self) -> None:
        self.world.engine.schedule_at(self.offset, self._launch, label="driver.launch")

    def _launch(self) -> None:
        scenario = self.world.scenario
        self.user.start_quicktalk(scenario.command, scenario.user_filter)
        self.started += 1

    def _completed(self, record: TransactionRecord) -> None:
        self.completed += 1
        if self.world.download is not None:
            self.world.download.on_transaction(record)
        if self.started < self.runs:
            slot = self.offset + self.started * self.interval
            self.world.engine.schedule_at(max(slot, self.world.engine.now), self._launch, label="driver.launch")


def build_world(scenario: Scenario, seed: int, *, trace: bool = False) -> World:
    engine = SimEngine(seed, trace=trace)
    medium = WifiMedium(engine, scenario.medium)
    medium.attach(AP_NODE, scenario.ap_channel)
    ir_space = IrSpace(scenario.ir_env, engine.rng_stream("ir"), scenario.ir_tolerance)
    world = World(scenario, engine, medium, ir_space, MetricsSink())

    for name, spec in scenario.iots.items():
        device = IotDevice(
            engine, medium, name, spec.device_type,
            home_channel=scenario.channel_of(spec),
            registered=spec.registered,
            config=scenario.iot,
            processor=make_processor(spec.processor),
        )
        ir_space.place(device, spec.geometry)
        world.iots[name] = device

    for name, user_id in scenario.users.items():
        world.users[name] = UserDevice(engine, medium, ir_space, name, user_id, config=scenario.user, sink=world.sink)

    for config in scenario.coap:
        world.sessions.append(run_coap_session(config, engine, medium))

    if scenario.download.enabled:
        world.download = DownloadFlow(scenario.download, scenario.ap_channel)
        world.download.attach(medium)
    return world


def worst_case_transaction_ticks(scenario: Scenario) -> int:
    user = scenario.user
    sweep = user.rounds * 11 * (ms_to_ticks(scenario.medium.switch_delay_ms) + ms_to_ticks(user.dwell_ms))
    return (_IR_ALLOWANCE + ms_to_ticks(user.ctx_switch_ms) + sweep
            + ms_to_ticks(scenario.medium.processing_ms) + TICKS_PER_S + ms_to_ticks(user.command_timeout_ms))


def run_simulation(scenario: Scenario, seed: int | None = None, *, trace: bool = False) -> RunResult:
    """Run ``scenario.runs`` transactions per user device and summarize them."""
    seed = scenario.seed if seed is None else seed
    world = build_world(scenario, seed, trace=trace)
    engine = world.engine
    interval = round(scenario.quicktalk_interval_s * TICKS_PER_S)
    drivers = []
    for index, user in enumerate(world.users.values()):
        offset = index * interval // len(world.users)
        driver = TransactionDriver(world, user, scenario.runs, interval, offset)
        driver.start()
        drivers.append(driver)

    if scenario.duration_s is not None:
        horizon = round(scenario.duration_s * TICKS_PER_S)
    else:
        horizon = scenario.runs * interval + worst_case_transaction_ticks(scenario)
    while engine.now < horizon and not all(d.done for d in drivers):
        engine.run_until(min(engine.now + _STEP, horizon))
    if not all(d.done for d in drivers):
        logger.warning("{} seed {}: stopped at {:.0f} s with {} of {} transactions finished", scenario.name, seed,
                       ticks_to_ms(engine.now) / 1000, sum(d.completed for d in drivers), scenario.runs * len(drivers))

    for session in world.sessions:
        session.stop()

    records = sorted(world.sink.records, key=lambda r: (r.txn_id, r.user))
    download_mbps = None
    if world.download is not None:
        download_mbps = world.download.throughput_mbps(max(d.started for d in drivers) * scenario.quicktalk_interval_s)
    return RunResult(
        scenario=scenario,
        seed=seed,
        records=records,
        summary=summarize(f"seed {seed}", records, download_mbps),
        download_mbps=download_mbps,
        energy={name: device.energy_report() for name, device in world.iots.items()},
        events=engine.executed,
        sim_time_ms=ticks_to_ms(engine.now),
        trace=engine.trace,
    )
