"""IR pinpointing: device-type filters, the NEC-style frame codec and the link model."""

from quicktalk_sim.ir.device_filter import (
    ANY_FILTER,
    DeviceType,
    DeviceTypeFilter,
    DeviceTypeRegistry,
    decode_filter,
    encode_filter,
    matches,
)
from quicktalk_sim.ir.ir_codec import (
    DecodeOutcome,
    DecodeResult,
    IrFrame,
    PulseTrain,
    compute_parity,
    encode_frame,
    frame_duration,
    frame_duration_ticks,
    frame_to_pulses,
    pulses_to_frame,
)
from quicktalk_sim.ir.ir_link import (
    IrEnvironment,
    IrGeometry,
    IrProfile,
    IrSpace,
    LinkOutcome,
    apply_outcome,
    outcome_probabilities,
    sample_outcome,
)

__all__ = [
    "ANY_FILTER",
    "DecodeOutcome",
    "DecodeResult",
    "DeviceType",
    "DeviceTypeFilter",
    "DeviceTypeRegistry",
    "IrEnvironment",
    "IrFrame",
    "IrGeometry",
    "IrProfile",
    "IrSpace",
    "LinkOutcome",
    "PulseTrain",
    "apply_outcome",
    "compute_parity",
    "decode_filter",
    "encode_filter",
    "encode_frame",
    "frame_duration",
    "frame_duration_ticks",
    "frame_to_pulses",
    "matches",
    "outcome_probabilities",
    "pulses_to_frame",
    "sample_outcome",
]
