import pytest

from quicktalk_sim.devices.command_processors import BulbProcessor
from quicktalk_sim.devices.iot_device import IotDevice, IotPhase
from quicktalk_sim.devices.user_device import UserConfig, UserDevice, UserPhase, build_sweep_plan
from quicktalk_sim.engine.sim_engine import SimEngine
from quicktalk_sim.errors import ConfigurationError, DeviceBusyError
from quicktalk_sim.ir.device_filter import DeviceType, DeviceTypeFilter
from quicktalk_sim.ir.ir_link import IrEnvironment, IrGeometry, IrSpace
from quicktalk_sim.shared import ms_to_ticks
from quicktalk_sim.wifi.wifi_medium import FrameKind, MediumConfig, WifiMedium

BULB_FILTER = DeviceTypeFilter(2, 1, 1)
USER_ID = 0x00A1B2


class _FixedStart:
    def __init__(self, start: int) -> None:
        self.start = start

    def integers(self, high: int) -> int:
        return self.start


class _World:
    def __init__(self, iot_channel: int = 6, rssi: dict[int, float] | None = None, **user_config) -> None:
        self.engine = SimEngine(1)
        self.medium = WifiMedium(self.engine, MediumConfig(k=0.0, rssi={6: -40.0} if rssi is None else rssi))
        self.space = IrSpace(IrEnvironment(), self.engine.rng_stream("ir"))
        self.iot = IotDevice(self.engine, self.medium, "bulb", DeviceType(2, 1, 1),
                             home_channel=iot_channel, registered=True, processor=BulbProcessor())
        self.space.place(self.iot, IrGeometry(1.0))
        self.user = UserDevice(self.engine, self.medium, self.space, "phone", USER_ID,
                               config=UserConfig(**user_config))

    def run_ms(self, ms: float) -> None:
        self.engine.run_until(self.engine.now + ms_to_ticks(ms))


class TestSweepPlan:
    RSSI = [(6, -38.0), (1, -52.0), (11, -45.0), (3, -60.0), (9, -70.0)]

    def test_rotated_top_k_then_rest(self) -> None:
        plan = build_sweep_plan(self.RSSI, _FixedStart(2), k_top=4, rounds=3)
        assert plan.channels == (11, 3, 6, 1, 2, 4, 5, 7, 8, 9, 10)
        assert len(plan) == 33
        assert plan.order[:12] == plan.channels + (11,)

    def test_covers_every_channel_once_per_round(self) -> None:
        plan = build_sweep_plan(self.RSSI, _FixedStart(0), k_top=2, rounds=1)
        assert sorted(plan.channels) == list(range(1, 12))
        assert plan.channels[:2] == (6, 1)

    def test_without_scan_results(self) -> None:
        plan = build_sweep_plan([], _FixedStart(0), rounds=2)
        assert plan.order == tuple(range(1, 12)) * 2

    @pytest.mark.parametrize("kwargs", [{"k_top": 0}, {"k_top": 12}, {"rounds": 0}, {"dwell_ms": 0}, {"retx_ms": -1}])
    def test_invalid_config(self, kwargs) -> None:
        with pytest.raises(ConfigurationError):
            UserConfig(**kwargs)


class TestTransaction:
    def test_successful_exchange(self) -> None:
        world = _World()
        records = []
        world.user.completion_listeners.append(records.append)
        txn_id = world.user.start_quicktalk(b"TOGGLE", BULB_FILTER)
        assert world.user.phase is UserPhase.IR_SENT
        world.run_ms(1000)

        assert world.user.phase is UserPhase.DONE
        (record,) = records
        assert record.txn_id == txn_id and record.success
        assert record.channel == 6
        assert record.t_ir_ms == pytest.approx(72.5625)
        # first visit: 40 ms switch, then the beacon sent 53 ms after the IR frame
        assert record.t_search_ms == pytest.approx(50.48)
        assert record.t_command_ms == pytest.approx(4.096)
        assert record.retx_count == 0
        assert world.user.last_response.body == b"ON"
        assert world.iot.phase is IotPhase.SESSION

    def test_e2e_is_the_sum_of_its_parts(self) -> None:
        world = _World()
        world.user.start_quicktalk(b"ON", BULB_FILTER)
        world.run_ms(1000)
        (record,) = world.user.sink.records
        ack_airtime_ms = world.medium.airtime_ticks(FrameKind.ACK, 8) / 2000
        expected = (record.t_ir_ms + 3.0 + record.t_search_ms + 3.0 + ack_airtime_ms + record.t_command_ms)
        assert record.t_e2e_ms == pytest.approx(expected)

    def test_device_on_another_channel(self) -> None:
        world = _World(iot_channel=11, rssi={6: -40.0, 11: -60.0})
        world.user.start_quicktalk(b"ON", BULB_FILTER)
        world.run_ms(2000)
        (record,) = world.user.sink.records
        assert record.success
        assert record.channel == 11
        assert record.t_search_ms <= 3 * 90 + 1

    def test_busy_device_rejects_a_second_transaction(self) -> None:
        world = _World()
        world.user.start_quicktalk()
        with pytest.raises(DeviceBusyError):
            world.user.start_quicktalk()
        world.run_ms(1000)
        assert world.user.start_quicktalk() == 2

    def test_failed_search(self) -> None:
        world = _World(rounds=2)
        world.user.start_quicktalk(b"READ", DeviceTypeFilter(6, 1, 1))
        world.run_ms(5000)
        (record,) = world.user.sink.records
        assert not record.success
        assert world.user.phase is UserPhase.FAILED
        assert record.channel is None
        assert record.t_search_ms == pytest.approx(22 * 90.0)
        assert record.t_command_ms == pytest.approx(5000.0)
        assert record.t_e2e_ms == pytest.approx(record.t_ir_ms + 3.0 + 22 * 90.0 + 5000.0)
        assert world.iot.triggers == 0

    def test_command_timeout_with_retransmissions(self) -> None:
        world = _World()

        def drop_iot_on_ack(frame, now) -> None:
            if frame.kind is FrameKind.ACK:
                world.medium.attachment("bulb").current_channel = 1

        world.medium.observers.append(drop_iot_on_ack)
        world.user.start_quicktalk(b"ON", BULB_FILTER)
        world.run_ms(7000)

        (record,) = world.user.sink.records
        assert not record.success
        assert record.retx_count == 19
        assert record.t_command_ms == pytest.approx(5000.0)
        assert world.medium.sent_by_kind[("phone", FrameKind.COMMAND)] == 20

    def test_responses_for_other_transactions_are_ignored(self) -> None:
        world = _World()
        world.user.start_quicktalk(b"ON", BULB_FILTER)
        world.run_ms(1000)
        world.user.start_quicktalk(b"OFF", BULB_FILTER)
        world.run_ms(1000)
        first, second = world.user.sink.records
        assert (first.txn_id, second.txn_id) == (1, 2)
        assert second.success
        assert world.user.last_response.txn_id == 2
        assert world.user.last_response.body == b"OFF"
