from quicktalk_sim.shared import TICKS_PER_MS


def ms_to_ticks(ms: float) -> int:
    """Convert milliseconds to simulation ticks, rounding to the nearest tick."""
    return int(round(ms * TICKS_PER_MS))
