def format_frame_hex(word: int) -> str:
    """Render a 40-bit IR payload as 10 upper-case hex digits, MSB first."""
    if not 0 <= word < (1 << 40):
        raise ValueError(f"payload does not fit 40 bits: {word:#x}")
    return f"{word:010X}"
