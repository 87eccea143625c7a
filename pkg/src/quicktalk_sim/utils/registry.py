from __future__ import annotations

from pathlib import Path

from quicktalk_sim.ir.device_filter import DeviceTypeRegistry, encode_filter
from quicktalk_sim.utils.base_utility import BaseUtility, ParameterInfo


class RegistryUtility(BaseUtility):
    """Print the device-type registry with the 14-bit code of every entry."""

    command = "registry"
    brief_description = "List device-type names, their level triples and filter codes"
    result_label = "Device types"
    parameters = [
        ParameterInfo(
            name="--file",
            required=False,
            description="Registry file to read instead of the bundled one",
            type=Path,
        ),
    ]

    def process(self, file: Path | None = None) -> int:
        registry = DeviceTypeRegistry.load(file)
        if registry.version:
            self.log_info(f"registry version {registry.version}")
        print(f"{'NAME':24s} {'LEVELS':8s} CODE")
        for name, entry in registry.items():
            kind = "" if entry.is_concrete else "  (filter only)"
            print(f"{name:24s} {str(entry):8s} 0x{encode_filter(entry):04X}{kind}")
        return len(registry.names())
