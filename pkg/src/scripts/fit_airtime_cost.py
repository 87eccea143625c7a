"""Fit the per-transaction airtime cost of the download model.

The download keeps ``rate * (1 - n * cost / D)`` of its nominal rate when n
QuickTalk transactions run in D seconds, i.e. one every ``interval`` seconds
takes ``cost / interval`` of the airtime. The cost is the least-squares slope
of the measured relative throughput loss against ``1 / interval``, through
the origin.

    fit-airtime-cost                  # fit against the built-in table
    fit-airtime-cost 10=17.53 3=14.40 # fit against other measurements
"""
from __future__ import annotations

import sys

import numpy as np

from quicktalk_sim.traffic.download_flow import NOMINAL_RATE_MBPS, DownloadConfig, run_download

# QuickTalk interval (s) -> measured download throughput (Mbps)
MEASURED = {10.0: 17.53, 5.0: 15.75, 3.0: 14.40}


def fit_airtime_cost(measured: dict[float, float], nominal: float = NOMINAL_RATE_MBPS) -> float:
    x = np.array([1.0 / interval for interval in measured])
    y = np.array([(nominal - mbps) / nominal for mbps in measured.values()])
    return float(x @ y / (x @ x))


def _parse(argv: list[str]) -> dict[float, float]:
    measured = {}
    for item in argv:
        interval, sep, mbps = item.partition("=")
        if not sep:
            raise SystemExit(f"expected interval=mbps, got {item!r}")
        measured[float(interval)] = float(mbps)
    return measured


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    measured = _parse(argv) if argv else MEASURED
    cost = fit_airtime_cost(measured)
    config = DownloadConfig(enabled=True, airtime_cost_s=cost)
    print(f"airtime_cost_s = {cost:.3f}")
    print(f"{'interval':>8s} {'measured':>9s} {'model':>7s} {'error':>7s}")
    for interval, mbps in sorted(measured.items(), reverse=True):
        model = run_download(config, 1, interval)
        print(f"{interval:8.1f} {mbps:9.2f} {model:7.2f} {100 * (model - mbps) / mbps:6.1f}%")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
