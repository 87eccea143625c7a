"""Scaled-down statistical reproductions of the bundled scenarios.

Thresholds sit several standard deviations away from the expected values
for the sample sizes used here.
"""
import pytest

from quicktalk_sim.scenario.scenario import parse_scenario
from quicktalk_sim.scenario.simulation import run_simulation
from quicktalk_sim.shared import percentile


def load(scenario_dir, name: str, **overrides):
    return parse_scenario(scenario_dir / f"{name}.scn", overrides=[(k, str(v)) for k, v in overrides.items()])


def share(records, predicate) -> float:
    return sum(1 for r in records if predicate(r)) / len(records)


@pytest.mark.slow
@pytest.mark.parametrize(
    "p0,expected",
    [
        # two attempts fit in 0.5 s, each getting through with (1 - p0)^2
        (0.0325, 1 - (1 - 0.936) ** 2),
        (0.1778, 1 - (1 - 0.676) ** 2),
    ],
)
def test_command_round_trip_within_half_a_second(scenario_dir, p0, expected) -> None:
    result = run_simulation(load(scenario_dir, "fig5", runs=2000, **{"medium.p0": p0}))
    ok = [r for r in result.records if r.success]
    assert len(ok) >= 0.97 * len(result.records)
    tolerance = 0.005 if p0 < 0.1 else 0.025
    assert share(ok, lambda r: r.t_command_ms <= 500) == pytest.approx(expected, abs=tolerance)
    assert all(r.t_command_ms < 100 or r.retx_count >= 1 for r in ok)


@pytest.mark.slow
def test_retransmission_with_indoor_loss(scenario_dir) -> None:
    result = run_simulation(load(scenario_dir, "fig9c", runs=400))
    ok = [r for r in result.records if r.success]
    assert share(ok, lambda r: r.t_command_ms <= 500) == pytest.approx(0.895, abs=0.05)


@pytest.mark.slow
def test_end_to_end_without_background_traffic(scenario_dir) -> None:
    result = run_simulation(load(scenario_dir, "fig9c", runs=300))
    ok = [r for r in result.records if r.success]
    assert len(ok) >= 0.9 * len(result.records)
    assert 331.2 <= percentile([r.t_e2e_ms for r in ok], 50) <= 496.8
    # two sweep rounds over 11 channels at 90 ms per visit
    assert max(r.t_search_ms for r in ok) <= 1980.0
    assert min(r.t_e2e_ms for r in ok) == pytest.approx(72.5625 + 3 + 50.48 + 3 + 0.48 + 4.096)


@pytest.mark.slow
def test_end_to_end_with_light_background_traffic(scenario_dir) -> None:
    result = run_simulation(load(scenario_dir, "fig9a", runs=200))
    ok = [r for r in result.records if r.success]
    e2e = [r.t_e2e_ms for r in ok]
    assert len(ok) >= 0.95 * len(result.records)
    assert percentile(e2e, 50) <= 888.0
    assert max(e2e) <= 2500.0
    assert share(ok, lambda r: r.t_command_ms < 1000) >= 0.98


@pytest.mark.slow
def test_heavy_background_traffic_slows_commands(scenario_dir) -> None:
    result = run_simulation(load(scenario_dir, "fig9b", runs=200))
    ok = [r for r in result.records if r.success]
    assert share(ok, lambda r: r.t_command_ms < 1000) == pytest.approx(0.72, abs=0.12)


@pytest.mark.slow
@pytest.mark.parametrize("interval,measured", [(10, 17.53), (5, 15.75), (3, 14.40)])
def test_download_coexistence(scenario_dir, interval, measured) -> None:
    result = run_simulation(load(scenario_dir, "table1", runs=200, **{"quicktalk.interval_s": interval}))
    assert result.download_mbps == pytest.approx(measured, rel=0.1)
    assert result.summary.success_rate >= 0.92


@pytest.mark.parametrize("interval,measured", [(10, 17.53), (5, 15.75), (3, 14.40)])
def test_download_rate_per_interval(scenario_dir, interval, measured) -> None:
    result = run_simulation(load(scenario_dir, "table1", runs=5, **{"quicktalk.interval_s": interval}))
    assert result.download_mbps == pytest.approx(measured, rel=0.1)
