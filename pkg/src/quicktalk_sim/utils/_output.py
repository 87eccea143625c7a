from __future__ import annotations

import io
from pathlib import Path
import sys

from quicktalk_sim.scenario.report import write_csv
from quicktalk_sim.scenario.simulation import RunResult


def emit_csv(results: list[RunResult], out: Path | None) -> int:
    """Render every row first so a failure never leaves half a file behind."""
    buffer = io.StringIO()
    count = write_csv(results, buffer)
    if out is None:
        sys.stdout.write(buffer.getvalue())
        sys.stdout.flush()
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(buffer.getvalue(), encoding="utf8")
    return count
