"""Scenario files, the simulation driver and reporting."""

from quicktalk_sim.scenario.report import CSV_COLUMNS, pooled_summary, report_rows, summary_rows, write_csv
from quicktalk_sim.scenario.scenario import IotSpec, Scenario, parse_scenario, parse_scenario_text
from quicktalk_sim.scenario.simulation import RunResult, World, build_world, run_simulation

__all__ = [
    "CSV_COLUMNS",
    "IotSpec",
    "RunResult",
    "Scenario",
    "World",
    "build_world",
    "parse_scenario",
    "parse_scenario_text",
    "pooled_summary",
    "report_rows",
    "run_simulation",
    "summary_rows",
    "write_csv",
]
