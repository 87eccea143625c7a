import pytest

from quicktalk_sim.scenario.scenario import parse_scenario_text
from quicktalk_sim.scenario.simulation import build_world
from quicktalk_sim.shared import ms_to_ticks

HOUSE = """\
name = house
medium.p0 = 0.0325
medium.rssi.6 = -40
user.phone.id = 0x00A1B2
iot.bulb.type = BULB
iot.plug.type = POWER-PLUG
iot.thermo.type = THERMAL-CONTROLLER
iot.sensor.type = SENSOR
"""


@pytest.mark.parametrize(
    "filter_text,triggered",
    [
        ("BULB", {"bulb"}),
        ("POWER-PLUG", {"plug"}),
        ("3.1.0", {"thermo"}),
        ("ANY", {"bulb", "plug", "thermo", "sensor"}),
        ("DISPLAY", set()),
    ],
)
def test_only_matching_devices_wake_up(filter_text, triggered) -> None:
    scenario = parse_scenario_text(HOUSE + f"user.filter = {filter_text}\n", strict=True)
    for seed in range(20):
        world = build_world(scenario, seed)
        world.users["phone"].start_quicktalk(scenario.command, scenario.user_filter)
        world.engine.run_until(ms_to_ticks(200))
        woken = {name for name, device in world.iots.items() if device.triggers}
        assert woken == triggered
        for name in set(world.iots) - triggered:
            assert world.iots[name].beacons_sent == 0


def test_out_of_sight_device_stays_dormant() -> None:
    text = HOUSE + "user.filter = ANY\niot.sensor.geometry = 1.0, 90, 30\n"
    scenario = parse_scenario_text(text, strict=True)
    world = build_world(scenario, 1)
    world.users["phone"].start_quicktalk(scenario.command, scenario.user_filter)
    world.engine.run_until(ms_to_ticks(200))
    assert world.iots["sensor"].triggers == 0
    assert world.iots["bulb"].triggers == 1
