"""Per-transaction metrics and the sink that collects them."""
from __future__ import annotations

from dataclasses import dataclass, field

from quicktalk_sim.shared import percentile


@dataclass(frozen=True)
class TransactionRecord:
    txn_id: int
    user: str
    seed: int
    t_ir_ms: float
    t_search_ms: float
    t_command_ms: float
    t_e2e_ms: float
    retx_count: int
    success: bool
    channel: int | None = None
    started_ms: float = 0.0


SUMMARY_PERCENTILES = (10, 50, 80, 90)


@dataclass
class DelaySummary:
    count: int
    p10: float | None = None
    p50: float | None = None
    p80: float | None = None
    p90: float | None = None
    max: float | None = None

    @classmethod
    def of(cls, samples: list[float]) -> DelaySummary:
        if not samples:
            return cls(count=0)
        values = {f"p{p}": percentile(samples, p) for p in SUMMARY_PERCENTILES}
        return cls(count=len(samples), max=max(samples), **values)


@dataclass
class RunSummary:
    label: str
    transactions: int
    successes: int
    t_search: DelaySummary
    t_command: DelaySummary
    t_e2e: DelaySummary
    download_mbps: float | None = None

    @property
    def success_rate(self) -> float:
        return self.successes / self.transactions if self.transactions else 0.0


@dataclass
class MetricsSink:
    """Collects transaction records for one run, in completion order."""

    records: list[TransactionRecord] = field(default_factory=list)

    def add(self, record: TransactionRecord) -> None:
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    def successful(self) -> list[TransactionRecord]:
        return [r for r in self.records if r.success]


def summarize(label: str, records: list[TransactionRecord], download_mbps: float | None = None) -> RunSummary:
    """Delay percentiles over successful transactions, success rate over all of them."""
    ok = [r for r in records if r.success]
    return RunSummary(
        label=label,
        transactions=len(records),
        successes=len(ok),
        t_search=DelaySummary.of([r.t_search_ms for r in ok]),
        t_command=DelaySummary.of([r.t_command_ms for r in ok]),
        t_e2e=DelaySummary.of([r.t_e2e_ms for r in ok]),
        download_mbps=download_mbps,
    )
