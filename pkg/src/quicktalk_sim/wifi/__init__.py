"""Simulated WiFi broadcast medium and QuickTalk payload formats."""

from quicktalk_sim.wifi.payloads import Ack, Beacon, Command, Response, Status
from quicktalk_sim.wifi.wifi_medium import (
    BroadcastFrame,
    FrameKind,
    MediumConfig,
    NodeAttachment,
    RadioMode,
    WifiMedium,
    frame_airtime_ticks,
)

__all__ = [
    "Ack",
    "Beacon",
    "BroadcastFrame",
    "Command",
    "FrameKind",
    "MediumConfig",
    "NodeAttachment",
    "RadioMode",
    "Response",
    "Status",
    "WifiMedium",
    "frame_airtime_ticks",
]
