import math
from typing import Sequence


def percentile(samples: Sequence[float], p: float) -> float:
    """Return the nearest-rank percentile of ``samples``.

    The result is the ceil(p/100 * n)-th order statistic (1-based), so it is
    always one of the samples. p = 0 yields the minimum.
    """
    if not samples:
        raise ValueError("percentile of an empty sample list")
    if not 0 <= p <= 100:
        raise ValueError(f"percentile must be within [0, 100], got {p}")
    ordered = sorted(samples)
    rank = max(1, math.ceil(p / 100 * len(ordered)))
    return ordered[rank - 1]
