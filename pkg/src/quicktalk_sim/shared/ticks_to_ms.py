from quicktalk_sim.shared import TICKS_PER_MS


def ticks_to_ms(ticks: int) -> float:
    """Convert simulation ticks to milliseconds."""
    return ticks / TICKS_PER_MS
