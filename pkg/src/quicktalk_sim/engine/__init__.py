"""Discrete-event engine and metrics."""

from quicktalk_sim.engine.metrics import MetricsSink, RunSummary, TransactionRecord, summarize
from quicktalk_sim.engine.sim_engine import Event, EventHandle, SimEngine
from quicktalk_sim.shared.percentile import percentile

__all__ = [
    "Event",
    "EventHandle",
    "MetricsSink",
    "RunSummary",
    "SimEngine",
    "TransactionRecord",
    "percentile",
    "summarize",
]
