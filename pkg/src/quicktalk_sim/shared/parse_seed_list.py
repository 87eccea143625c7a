def parse_seed_list(text: str) -> list[int]:
    """Parse a comma-separated seed list like ``"1,2, 3"``.

    Raises ValueError when the list is empty or an item is not a
    non-negative integer.
    """
    items = [item.strip() for item in text.split(",") if item.strip()]
    if not items:
        raise ValueError("seed list is empty")
    seeds = []
    for item in items:
        try:
            seed = int(item, 0)
        except ValueError:
            raise ValueError(f"invalid seed: {item!r}") from None
        if seed < 0:
            raise ValueError(f"seed must be non-negative: {item!r}")
        seeds.append(seed)
    return seeds
