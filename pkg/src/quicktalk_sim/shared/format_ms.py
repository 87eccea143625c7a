def format_ms(value: float | None) -> str:
    """Format a millisecond value for reports: three decimals, empty for None."""
    if value is None:
        return ""
    return f"{value:.3f}"
