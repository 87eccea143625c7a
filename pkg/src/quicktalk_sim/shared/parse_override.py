def parse_override(text: str) -> tuple[str, str]:
    """Split a ``key=value`` override given on the command line."""
    key, sep, value = text.partition("=")
    if not sep or not key.strip():
        raise ValueError(f"override must look like key=value, got {text!r}")
    return key.strip(), value.strip()
