from quicktalk_sim.scenario.scenario import parse_scenario
from quicktalk_sim.scenario.simulation import build_world
from quicktalk_sim.shared import ms_to_ticks


def test_quicktalk_does_not_shift_coap_schedules(scenario_dir) -> None:
    scenario = parse_scenario(scenario_dir / "fig9a.scn")
    world = build_world(scenario, 4)
    user = world.users["phone"]
    for at_ms in (500, 3500, 6500):
        world.engine.schedule_at(ms_to_ticks(at_ms), user.start_quicktalk, scenario.command, scenario.user_filter)
    world.engine.run_until(ms_to_ticks(10_000) - 1)

    assert len(user.sink) == 3
    for session in world.sessions:
        assert session.requests_sent == 100
        requests = session.send_times[::2]
        assert requests == [k * ms_to_ticks(100) for k in range(100)]


def test_background_sessions_only_add_airtime(scenario_dir) -> None:
    scenario = parse_scenario(scenario_dir / "fig9a.scn")
    world = build_world(scenario, 4)
    world.engine.run_until(ms_to_ticks(2000))
    load = world.medium.channel_load(6, world.engine.now)
    # eight 64 byte frames per 100 ms at 54 Mbps
    assert 0.002 < load < 0.004
    assert all(device.triggers == 0 for device in world.iots.values())
