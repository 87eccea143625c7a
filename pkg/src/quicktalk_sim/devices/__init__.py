"""User and IoT device state machines."""

from quicktalk_sim.devices.command_processors import (
    BulbProcessor,
    CommandProcessor,
    EchoProcessor,
    SensorProcessor,
    make_processor,
)
from quicktalk_sim.devices.iot_device import (
    EnergyLedger,
    EnergySnapshot,
    GateDecision,
    IotConfig,
    IotDevice,
    IotPhase,
)
from quicktalk_sim.devices.user_device import (
    SweepPlan,
    UserConfig,
    UserDevice,
    UserPhase,
    build_sweep_plan,
)

__all__ = [
    "BulbProcessor",
    "CommandProcessor",
    "EchoProcessor",
    "EnergyLedger",
    "EnergySnapshot",
    "GateDecision",
    "IotConfig",
    "IotDevice",
    "IotPhase",
    "SensorProcessor",
    "SweepPlan",
    "UserConfig",
    "UserDevice",
    "UserPhase",
    "build_sweep_plan",
    "make_processor",
]
