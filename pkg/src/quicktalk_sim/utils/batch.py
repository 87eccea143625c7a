from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from quicktalk_sim.scenario.report import pooled_summary, summary_rows
from quicktalk_sim.scenario.scenario import Scenario, parse_scenario
from quicktalk_sim.scenario.simulation import RunResult, run_simulation
from quicktalk_sim.shared import parse_seed_list
from quicktalk_sim.utils._output import emit_csv
from quicktalk_sim.utils.base_utility import (
    OVERRIDE_PARAMETER,
    SCENARIO_PARAMETER,
    BaseUtility,
    ParameterInfo,
)


def _run_seed(scenario: Scenario, seed: int) -> RunResult:
    result = run_simulation(scenario, seed)
    # engine traces are not needed across the process boundary
    result.trace = None
    return result


class BatchUtility(BaseUtility):
    """Run a scenario once per seed; rows are merged in seed order."""

    command = "batch"
    brief_description = "Simulate a scenario for several seeds and write one merged CSV"
    result_label = "Transactions simulated"
    parameters = [
        SCENARIO_PARAMETER,
        ParameterInfo(
            name="--seeds",
            required=True,
            description="Comma separated list of master seeds, e.g. 1,2,3",
        ),
        ParameterInfo(
            name="--out",
            required=False,
            description="CSV output file; stdout when omitted",
            type=Path,
        ),
        ParameterInfo(
            name="--workers",
            required=False,
            description="Worker processes; 1 runs the seeds in this process",
            default=1,
        ),
        OVERRIDE_PARAMETER,
    ]

    def process(self, scenario: Path, seeds: str, out: Path | None = None, workers: int = 1,
                overrides: list[tuple[str, str]] | None = None) -> int:
        seed_list = parse_seed_list(seeds)
        if workers < 1:
            raise ValueError(f"--workers must be >= 1, got {workers}")
        loaded = parse_scenario(scenario, overrides=overrides or ())
        self.log_info(f"Running {loaded.name} for {len(seed_list)} seeds with {workers} worker(s)")

        if workers == 1 or len(seed_list) == 1:
            results = [_run_seed(loaded, seed) for seed in seed_list]
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_run_seed, [loaded] * len(seed_list), seed_list))

        count = emit_csv(results, Path(out) if out is not None else None)

        summaries = [r.summary for r in sorted(results, key=lambda r: r.seed)]
        summaries.append(pooled_summary(results))
        for category, row in summary_rows(summaries).items():
            for step, cell in row.items():
                self.set_stat(category, step, cell)
        self.log_statistics("table")
        return count
