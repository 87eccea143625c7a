from __future__ import annotations

from pathlib import Path

from quicktalk_sim.scenario.scenario import parse_scenario
from quicktalk_sim.utils.base_utility import (
    OVERRIDE_PARAMETER,
    SCENARIO_PARAMETER,
    BaseUtility,
)


class ValidateUtility(BaseUtility):
    """Load a scenario and describe its topology without simulating it."""

    command = "validate"
    brief_description = "Check a scenario file and print the topology it describes"
    result_label = "Transactions planned"
    parameters = [SCENARIO_PARAMETER, OVERRIDE_PARAMETER]

    def process(self, scenario: Path, overrides: list[tuple[str, str]] | None = None) -> int:
        loaded = parse_scenario(scenario, overrides=overrides or ())
        self.log_info(f"{scenario}: scenario {loaded.name!r} is valid")
        self.log_info(f"AP on channel {loaded.ap_channel}; {loaded.runs} runs every {loaded.quicktalk_interval_s} s")
        for name, user_id in loaded.users.items():
            self.log_info(f"user {name}: id 0x{user_id:06X}, filter {loaded.user_filter}")
        for name, spec in loaded.iots.items():
            g = spec.geometry
            channel = loaded.channel_of(spec)
            self.log_info(f"iot {name}: {spec.type_name} ({spec.device_type}) on channel {channel}, "
                          f"{g.distance_m} m, tx {g.tx_angle_deg} deg, rx {g.rx_angle_deg} deg")
            self.increment_stat(f"channel {channel}", "iot devices")
        for index, session in enumerate(loaded.coap):
            self.log_info(f"coap {index}: {session.iot_node} every {session.interval_s} s")
            self.increment_stat(f"channel {loaded.ap_channel}", "coap sessions")
        if loaded.download.enabled:
            self.log_info(f"download at {loaded.download.rate_mbps} Mbps on channel {loaded.ap_channel}")
            self.increment_stat(f"channel {loaded.ap_channel}", "downloads")
        self.log_statistics("steps")
        return loaded.runs * len(loaded.users)
