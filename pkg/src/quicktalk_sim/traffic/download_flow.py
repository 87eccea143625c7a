"""Greedy download through the AP, modelled by the airtime it is left with.

TCP is not simulated. The flow occupies the channel (``channel_share`` of
the load term in the loss model) and its throughput is the nominal rate
minus the share of airtime QuickTalk exchanges take from it. The per
transaction cost is fitted once against the coexistence table, see
``scripts/fit_airtime_cost.py``.
"""
from __future__ import annotations

from dataclasses import dataclass

from quicktalk_sim.errors import ConfigurationError
from quicktalk_sim.wifi.wifi_medium import WifiMedium, check_channel

NOMINAL_RATE_MBPS = 18.54
# least-squares fit of (nominal - measured) / nominal against 1 / interval
AIRTIME_COST_S = 0.683


@dataclass
class DownloadConfig:
    enabled: bool = False
    rate_mbps: float = NOMINAL_RATE_MBPS
    airtime_cost_s: float = AIRTIME_COST_S
    channel_share: float = 1.0

    def __post_init__(self) -> None:
        if self.rate_mbps <= 0:
            raise ConfigurationError(f"download rate must be > 0, got {self.rate_mbps}")
        if self.airtime_cost_s < 0:
            raise ConfigurationError(f"airtime cost must be >= 0, got {self.airtime_cost_s}")
        if not 0.0 <= self.channel_share <= 1.0:
            raise ConfigurationError(f"channel share must be within [0, 1], got {self.channel_share}")


@dataclass
class DownloadFlow:
    config: DownloadConfig
    channel: int
    transactions: int = 0

    def attach(self, medium: WifiMedium) -> None:
        medium.add_ambient_load(check_channel(self.channel), self.config.channel_share)

    def on_transaction(self, *_args) -> None:
        """Counts one QuickTalk exchange against the flow's airtime."""
        self.transactions += 1

    def throughput_mbps(self, duration_s: float | None) -> float:
        return run_download(self.config, self.transactions, duration_s)


def run_download(config: DownloadConfig, transactions: int = 0, duration_s: float | None = None) -> float:
    """Achieved throughput after ``transactions`` QuickTalk exchanges in ``duration_s``."""
    if transactions < 0:
        raise ValueError(f"transaction count must be >= 0, got {transactions}")
    if not transactions or not duration_s:
        return config.rate_mbps
    stolen = min(1.0, transactions * config.airtime_cost_s / duration_s)
    return config.rate_mbps * (1.0 - stolen)
