import pytest

from quicktalk_sim.engine.sim_engine import SimEngine
from quicktalk_sim.errors import ConfigurationError
from quicktalk_sim.traffic.download_flow import (
    AIRTIME_COST_S,
    NOMINAL_RATE_MBPS,
    DownloadConfig,
    DownloadFlow,
    run_download,
)
from quicktalk_sim.wifi.wifi_medium import MediumConfig, WifiMedium
from scripts.fit_airtime_cost import MEASURED, fit_airtime_cost
from scripts.fit_airtime_cost import main as fit_main

CONFIG = DownloadConfig(enabled=True)


class TestRunDownload:
    def test_nominal_without_quicktalk(self) -> None:
        assert run_download(CONFIG) == NOMINAL_RATE_MBPS
        assert run_download(CONFIG, 0, 100.0) == NOMINAL_RATE_MBPS

    def test_monotone_in_frequency(self) -> None:
        rates = [run_download(CONFIG, 1, interval) for interval in (10.0, 5.0, 3.0, 1.0)]
        assert rates == sorted(rates, reverse=True)
        assert all(rate < NOMINAL_RATE_MBPS for rate in rates)

    @pytest.mark.parametrize("interval,measured", sorted(MEASURED.items()))
    def test_model_tracks_measurements(self, interval, measured) -> None:
        transactions = round(300 / interval)
        assert run_download(CONFIG, transactions, 300.0) == pytest.approx(measured, rel=0.1)

    def test_saturates_at_zero(self) -> None:
        assert run_download(CONFIG, 10_000, 1.0) == 0.0

    def test_negative_transactions(self) -> None:
        with pytest.raises(ValueError):
            run_download(CONFIG, -1, 1.0)

    @pytest.mark.parametrize("kwargs", [{"rate_mbps": 0}, {"airtime_cost_s": -1}, {"channel_share": 1.5}])
    def test_invalid_config(self, kwargs) -> None:
        with pytest.raises(ConfigurationError):
            DownloadConfig(**kwargs)


class TestDownloadFlow:
    def test_counts_transactions(self) -> None:
        flow = DownloadFlow(CONFIG, 6)
        for _ in range(100):
            flow.on_transaction(object())
        assert flow.transactions == 100
        assert flow.throughput_mbps(300.0) == pytest.approx(run_download(CONFIG, 100, 300.0))

    def test_attach_loads_the_channel(self) -> None:
        engine = SimEngine()
        medium = WifiMedium(engine, MediumConfig())
        DownloadFlow(DownloadConfig(enabled=True, channel_share=0.25), 6).attach(medium)
        assert medium.channel_load(6, 0) == pytest.approx(0.25)
        assert medium.channel_load(1, 0) == 0.0


class TestFit:
    def test_builtin_table(self) -> None:
        assert fit_airtime_cost(MEASURED) == pytest.approx(AIRTIME_COST_S, abs=5e-4)

    def test_exact_recovery(self) -> None:
        synthetic = {interval: run_download(DownloadConfig(airtime_cost_s=0.5), 1, interval) for interval in (2.0, 4.0)}
        assert fit_airtime_cost(synthetic) == pytest.approx(0.5)

    def test_cli(self, capsys) -> None:
        assert fit_main(["10=17.53", "5=15.75"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("airtime_cost_s = ")
        assert "10.0" in out

    def test_cli_rejects_bad_items(self) -> None:
        with pytest.raises(SystemExit):
            fit_main(["10:17.5"])
