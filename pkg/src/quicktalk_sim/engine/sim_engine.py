"""Deterministic discrete-event core.

Time is an integer count of 0.5 us ticks. Events run in (timestamp, sequence)
order, where the sequence number is handed out at scheduling time, so two
events for the same instant run in the order they were scheduled.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import heapq
from typing import Any, Callable

from loguru import logger
import numpy as np

from quicktalk_sim.errors import SimulationError
from quicktalk_sim.shared import stable_seed, ticks_to_ms


@dataclass(order=True)
class Event:
    timestamp: int
    sequence: int
    action: Callable[..., Any] = field(compare=False)
    args: tuple = field(default=(), compare=False)
    label: str = field(default="", compare=False)
    cancelled: bool = field(default=False, compare=False)


class EventHandle:
    """Returned by ``schedule``; lets the owner cancel a pending event."""

    __slots__ = ("_event",)

    def __init__(self, event: Event) -> None:
        self._event = event

    @property
    def timestamp(self) -> int:
        return self._event.timestamp

    @property
    def pending(self) -> bool:
        return not self._event.cancelled and self._event.sequence >= 0

    def cancel(self) -> None:
        self._event.cancelled = True


class SimEngine:
    def __init__(self, seed: int = 0, *, trace: bool = False) -> None:
        self.seed = seed
        self.now = 0
        self._queue: list[Event] = []
        self._sequence = 0
        self._streams: dict[str, np.random.Generator] = {}
        self.executed = 0
        self.trace: list[tuple[int, int, str]] | None = [] if trace else None

    def schedule(self, delay: int, action: Callable[..., Any], *args: Any, label: str = "") -> EventHandle:
        """Enqueue ``action(*args)`` to run ``delay`` ticks from now."""
        if delay < 0:
            raise ValueError(f"cannot schedule into the past (delay {delay})")
        event = Event(self.now + int(delay), self._sequence, action, args, label or getattr(action, "__qualname__", "event"))
        self._sequence += 1
        heapq.heappush(self._queue, event)
        return EventHandle(event)

    def schedule_at(self, timestamp: int, action: Callable[..., Any], *args: Any, label: str = "") -> EventHandle:
        return self.schedule(timestamp - self.now, action, *args, label=label)

    def cancel(self, handle: EventHandle) -> None:
        handle.cancel()

    @property
    def pending(self) -> int:
        return sum(1 for e in self._queue if not e.cancelled)

    def run_until(self, t_end: int) -> int:
        """Run every event with timestamp <= t_end, then set the clock to t_end.

        Returns the number of events executed by this call. Calling it again
        with a later ``t_end`` resumes where it stopped.
        """
        if t_end < self.now:
            raise ValueError(f"t_end {t_end} is before the current time {self.now}")
        count = 0
        queue = self._queue
        while queue and queue[0].timestamp <= t_end:
            event = heapq.heappop(queue)
            if event.cancelled:
                continue
            if event.timestamp < self.now:
                raise SimulationError(f"event {event.label} at {event.timestamp} is earlier than clock {self.now}")
            self.now = event.timestamp
            event.sequence = -1  # marks the handle as no longer pending
            if self.trace is not None:
                self.trace.append((event.timestamp, self.executed, event.label))
            event.action(*event.args)
            count += 1
            self.executed += 1
        self.now = t_end
        logger.trace("run_until {:.3f} ms: {} events", ticks_to_ms(t_end), count)
        return count

    def run(self) -> int:
        """Run until the queue drains."""
        count = 0
        queue = self._queue
        while True:
            while queue and queue[0].cancelled:
                heapq.heappop(queue)
            if not queue:
                return count
            count += self.run_until(queue[0].timestamp)

    def rng_stream(self, name: str) -> np.random.Generator:
        """Named random stream seeded from (master seed, name).

        The same name always returns the same generator within one engine,
        and equal (seed, name) pairs give equal sequences across engines.
        """
        stream = self._streams.get(name)
        if stream is None:
            stream = np.random.default_rng(np.random.SeedSequence([self.seed, stable_seed(name)]))
            self._streams[name] = stream
        return stream
