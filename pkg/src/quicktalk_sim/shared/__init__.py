"""Small single-purpose helpers shared across quicktalk-sim.

Each helper lives in its own module; the public names are exported lazily so
importing ``quicktalk_sim.shared`` stays cheap and free of import cycles.
"""
import ast
import importlib
import pkgutil
from pathlib import Path
from typing import Dict

# Simulation time is kept in integer ticks of 0.5 microseconds so every NEC
# timing (562.5 us, 1687.5 us, ...) is integral.
TICKS_PER_US = 2
TICKS_PER_MS = 1000 * TICKS_PER_US
TICKS_PER_S = 1000 * TICKS_PER_MS

_SUBMODULES = [
    name for _, name, ispkg in pkgutil.iter_modules(__path__) if not ispkg
]

# exported symbol -> submodule, collected from the sources without importing them
_EXPORTS: Dict[str, str] = {}
pkg_dir = Path(__path__[0])
for mod_name in _SUBMODULES:
    mod_file = pkg_dir / f"{mod_name}.py"
    if not mod_file.exists():
        continue
    try:
        tree = ast.parse(mod_file.read_text(encoding="utf8"))
    except SyntaxError:
        # surfaces on first real import of the symbol
        continue

    explicit_all = None
    for node in tree.body:
        if isinstance(node, ast.Assign):
            for target in node.targets:
                if isinstance(target, ast.Name) and target.id == "__all__":
                    try:
                        explicit_all = ast.literal_eval(node.value)
                    except ValueError:
                        explicit_all = None
                    break
        if explicit_all is not None:
            break

    names = []
    if explicit_all:
        names = [n for n in explicit_all if isinstance(n, str) and not n.startswith("_")]
    else:
        for node in tree.body:
            if isinstance(node, (ast.FunctionDef, ast.ClassDef)) and not node.name.startswith("_"):
                names.append(node.name)

    for name in names:
        _EXPORTS.setdefault(name, mod_name)


def __getattr__(name: str):
    """Import the submodule that provides ``name`` and cache the symbol."""
    mod_name = _EXPORTS.get(name)
    if mod_name is None:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
    mod = importlib.import_module(f"{__name__}.{mod_name}")
    value = getattr(mod, name)
    globals()[name] = value
    return value


def __dir__():
    return sorted(list(globals().keys()) + sorted(_EXPORTS.keys()))


__all__ = [
    "TICKS_PER_US",
    "TICKS_PER_MS",
    "TICKS_PER_S",
] + sorted(_EXPORTS.keys())
