from __future__ import annotations

from pathlib import Path

from quicktalk_sim.scenario.report import summary_rows
from quicktalk_sim.scenario.scenario import parse_scenario
from quicktalk_sim.scenario.simulation import run_simulation
from quicktalk_sim.utils._output import emit_csv
from quicktalk_sim.utils.base_utility import (
    OVERRIDE_PARAMETER,
    SCENARIO_PARAMETER,
    BaseUtility,
    ParameterInfo,
)


class RunUtility(BaseUtility):
    """Run one scenario with one seed and emit its transactions as CSV."""

    command = "run"
    brief_description = "Simulate a scenario for one seed and write per-transaction CSV"
    result_label = "Transactions simulated"
    parameters = [
        SCENARIO_PARAMETER,
        ParameterInfo(
            name="--seed",
            required=False,
            description="Master seed; defaults to the scenario's seed key",
            type=int,
        ),
        ParameterInfo(
            name="--out",
            required=False,
            description="CSV output file; stdout when omitted",
            type=Path,
        ),
        OVERRIDE_PARAMETER,
    ]

    def process(self, scenario: Path, seed: int | None = None, out: Path | None = None,
                overrides: list[tuple[str, str]] | None = None) -> int:
        loaded = parse_scenario(scenario, overrides=overrides or ())
        self.log_info(f"Running {loaded.name} ({loaded.runs} transactions per user, "
                      f"seed {loaded.seed if seed is None else seed})")
        result = run_simulation(loaded, seed)
        self.log_debug(f"{result.events} events over {result.sim_time_ms / 1000:.1f} simulated seconds")
        count = emit_csv([result], Path(out) if out is not None else None)

        for category, row in summary_rows([result.summary]).items():
            for step, cell in row.items():
                self.set_stat(category, step, cell)
        self.log_statistics("table")
        for name, snapshot in result.energy.items():
            self.log_verbose(f"{name}: {snapshot.total_mj / 1000:.3f} J, IR share {100 * snapshot.ir_share:.1f}%")
        return count
