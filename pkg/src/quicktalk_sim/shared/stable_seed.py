import hashlib


def stable_seed(name: str) -> int:
    """Derive a 64-bit integer from a name, stable across processes and runs.

    Python's builtin ``hash`` is salted per process, so it cannot be used for
    reproducible stream seeds.
    """
    digest = hashlib.sha256(name.encode("utf8")).digest()
    return int.from_bytes(digest[:8], "big")
