"""CSV rows and summary tables for finished runs."""
from __future__ import annotations

import csv
from typing import Iterable, TextIO

from quicktalk_sim.engine.metrics import DelaySummary, RunSummary, summarize
from quicktalk_sim.scenario.simulation import RunResult
from quicktalk_sim.shared import format_ms

CSV_COLUMNS = (
    "scenario_name",
    "seed",
    "txn_id",
    "t_search_ms",
    "t_command_ms",
    "t_e2e_ms",
    "retx_count",
    "success",
    "bg_sessions",
    "bg_interval_s",
    "download_mbps",
)


def _optional(value: float | None, digits: int = 3) -> str:
    return "" if value is None else f"{value:.{digits}f}"


def report_rows(result: RunResult) -> list[dict[str, str]]:
    scenario = result.scenario
    rows = []
    for record in result.records:
        rows.append({
            "scenario_name": scenario.name,
            "seed": str(result.seed),
            "txn_id": str(record.txn_id),
            "t_search_ms": format_ms(record.t_search_ms),
            "t_command_ms": format_ms(record.t_command_ms),
            "t_e2e_ms": format_ms(record.t_e2e_ms),
            "retx_count": str(record.retx_count),
            "success": "true" if record.success else "false",
            "bg_sessions": str(scenario.bg_sessions),
            "bg_interval_s": _optional(scenario.bg_interval_s),
            "download_mbps": _optional(result.download_mbps),
        })
    return rows


def merge_results(results: Iterable[RunResult]) -> list[RunResult]:
    """Batch results in seed order, whatever order the workers finished in."""
    return sorted(results, key=lambda r: r.seed)


def write_csv(results: Iterable[RunResult], out: TextIO) -> int:
    """Header plus one row per transaction; returns the number of data rows."""
    writer = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    count = 0
    for result in merge_results(results):
        rows = report_rows(result)
        writer.writerows(rows)
        count += len(rows)
    return count


def pooled_summary(results: list[RunResult]) -> RunSummary:
    records = [r for result in results for r in result.records]
    downloads = [result.download_mbps for result in results if result.download_mbps is not None]
    download = sum(downloads) / len(downloads) if downloads else None
    return summarize("pooled", records, download)


def _delay_cells(prefix: str, delays: DelaySummary) -> dict[str, str]:
    cells = {}
    for name in ("p10", "p50", "p80", "p90", "max"):
        value = getattr(delays, name)
        cells[f"{prefix} {name}"] = "-" if value is None else f"{value / 1000:.3f}s"
    return cells


def summary_rows(summaries: Iterable[RunSummary]) -> dict[str, dict[str, str]]:
    """Category -> column -> cell, in the shape the utilities print as a table."""
    table: dict[str, dict[str, str]] = {}
    for summary in summaries:
        row = {
            "txns": str(summary.transactions),
            "success": f"{100 * summary.success_rate:.2f}%",
        }
        row.update(_delay_cells("search", summary.t_search))
        row.update(_delay_cells("command", summary.t_command))
        row.update(_delay_cells("e2e", summary.t_e2e))
        if summary.download_mbps is not None:
            row["download"] = f"{summary.download_mbps:.2f} Mbps"
        table[summary.label] = row
    return table
