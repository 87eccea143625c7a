"""IR channel model between a pointing user device and IoT receivers.

The decodable cone narrows with distance. Inside the cone the frame always
decodes; between one and two cone half-angles the decode probability ramps
down linearly and the rest of the mass is split between partial decodes and
misses. Outside range or past twice the half-angle nothing is detected.
The receiver angle only matters past 60 degrees and blocks reception past 90.
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Protocol

from loguru import logger
import numpy as np

from quicktalk_sim.errors import ConfigurationError
from quicktalk_sim.ir.ir_codec import (
    BIT_MARK,
    DEFAULT_TOLERANCE,
    FRAME_BITS,
    DecodeResult,
    PulseTrain,
    pulses_to_frame,
)

RX_FREE_ANGLE = 60.0
RX_BLOCK_ANGLE = 90.0


class LinkOutcome(Enum):
    DECODE = "decode"
    PARTIAL = "partial"
    UNDETECT = "undetect"


class IrProfile(Enum):
    INDOOR = "indoor"
    OUTDOOR_SHADED = "outdoor_shaded"


@dataclass(frozen=True)
class IrGeometry:
    distance_m: float
    tx_angle_deg: float = 0.0
    rx_angle_deg: float = 0.0

    def __post_init__(self) -> None:
        if self.distance_m < 0:
            raise ConfigurationError(f"distance must be >= 0, got {self.distance_m}")
        for name in ("tx_angle_deg", "rx_angle_deg"):
            value = getattr(self, name)
            if not -180.0 <= value <= 180.0:
                raise ConfigurationError(f"{name} must be within [-180, 180], got {value}")


DEFAULT_ALPHA_TABLE: tuple[tuple[float, float], ...] = ((1.0, 25.0), (3.0, 15.0), (5.0, 10.0))
DEFAULT_MAX_RANGE = {IrProfile.INDOOR: 6.0, IrProfile.OUTDOOR_SHADED: 2.5}


@dataclass(frozen=True)
class IrEnvironment:
    profile: IrProfile = IrProfile.INDOOR
    max_range_m: float = DEFAULT_MAX_RANGE[IrProfile.INDOOR]
    alpha_table: tuple[tuple[float, float], ...] = DEFAULT_ALPHA_TABLE
    partial_share: float = 0.5

    def __post_init__(self) -> None:
        if self.max_range_m <= 0:
            raise ConfigurationError(f"max range must be > 0, got {self.max_range_m}")
        if not self.alpha_table:
            raise ConfigurationError("cone half-angle table is empty")
        distances = [d for d, _ in self.alpha_table]
        if distances != sorted(distances) or len(set(distances)) != len(distances):
            raise ConfigurationError("cone half-angle table must have strictly increasing distances")
        angles = [a for _, a in self.alpha_table]
        if any(not 0 < a <= 90 for a in angles):
            raise ConfigurationError("cone half-angles must be within (0, 90] degrees")
        if any(later > earlier for earlier, later in zip(angles, angles[1:])):
            raise ConfigurationError("cone half-angle must not increase with distance")
        if not 0.0 <= self.partial_share <= 1.0:
            raise ConfigurationError(f"partial share must be within [0, 1], got {self.partial_share}")

    @classmethod
    def for_profile(cls, profile: IrProfile, **overrides) -> IrEnvironment:
        overrides.setdefault("max_range_m", DEFAULT_MAX_RANGE[profile])
        return cls(profile=profile, **overrides)

    def cone_halfangle_deg(self, distance_m: float) -> float:
        """Half-angle at a distance, linear between table points and flat outside them."""
        table = self.alpha_table
        distances = [d for d, _ in table]
        if distance_m <= distances[0]:
            return table[0][1]
        if distance_m >= distances[-1]:
            return table[-1][1]
        i = bisect_left(distances, distance_m)
        (d0, a0), (d1, a1) = table[i - 1], table[i]
        return a0 + (a1 - a0) * (distance_m - d0) / (d1 - d0)


def outcome_probabilities(geom: IrGeometry, env: IrEnvironment) -> tuple[float, float, float]:
    """Return (p_decode, p_partial, p_undetect); they always sum to 1."""
    rx = abs(geom.rx_angle_deg)
    if geom.distance_m > env.max_range_m or rx > RX_BLOCK_ANGLE:
        return 0.0, 0.0, 1.0
    alpha = env.cone_halfangle_deg(geom.distance_m)
    tx = abs(geom.tx_angle_deg)
    if tx >= 2 * alpha:
        return 0.0, 0.0, 1.0
    p_decode = 1.0 if tx <= alpha else (2 * alpha - tx) / alpha
    if rx > RX_FREE_ANGLE:
        p_decode *= (RX_BLOCK_ANGLE - rx) / (RX_BLOCK_ANGLE - RX_FREE_ANGLE)
    p_partial = min(1.0 - p_decode, env.partial_share * (1.0 - p_decode))
    return p_decode, p_partial, 1.0 - p_decode - p_partial


def sample_outcome(geom: IrGeometry, env: IrEnvironment, rng: np.random.Generator) -> LinkOutcome:
    p_decode, p_partial, _ = outcome_probabilities(geom, env)
    u = rng.random()
    if u < p_decode:
        return LinkOutcome.DECODE
    if u < p_decode + p_partial:
        return LinkOutcome.PARTIAL
    return LinkOutcome.UNDETECT


def apply_outcome(train: PulseTrain, outcome: LinkOutcome, rng: np.random.Generator) -> PulseTrain:
    """Corrupt a clean train so the decoder lands in the class named by ``outcome``.

    PARTIAL stretches the marks of one to three random bit symbols to four
    times their length, which no tolerance below 0.5 accepts. UNDETECT halves
    the lead mark.
    """
    if outcome is LinkOutcome.DECODE:
        return train
    if outcome is LinkOutcome.UNDETECT:
        return train.replace_segment(0, max(1, train.segments[0].duration // 2))
    count = int(rng.integers(1, 4))
    bits = rng.choice(FRAME_BITS, size=count, replace=False)
    corrupted = train
    for bit in sorted(int(b) for b in bits):
        corrupted = corrupted.replace_segment(2 + 2 * bit, 4 * BIT_MARK)
    return corrupted


class IrReceiver(Protocol):
    node_id: str

    def on_ir_frame(self, result: DecodeResult, now: int) -> None: ...


@dataclass
class _Placement:
    receiver: IrReceiver
    geometry: IrGeometry


@dataclass
class IrSpace:
    """The IR receivers a user device can point at, with their geometry.

    ``deliver`` runs one emission through the link model and hands every
    receiver what its decoder made of the corrupted train.
    """

    env: IrEnvironment
    rng: np.random.Generator
    tolerance: float = DEFAULT_TOLERANCE
    placements: list[_Placement] = field(default_factory=list)
    observers: list[Callable[[str, LinkOutcome, DecodeResult], None]] = field(default_factory=list)

    def place(self, receiver: IrReceiver, geometry: IrGeometry) -> None:
        if any(p.receiver.node_id == receiver.node_id for p in self.placements):
            raise ConfigurationError(f"IR receiver {receiver.node_id} placed twice")
        self.placements.append(_Placement(receiver, geometry))

    def deliver(self, train: PulseTrain, now: int) -> None:
        for placement in self.placements:
            outcome = sample_outcome(placement.geometry, self.env, self.rng)
            received = apply_outcome(train, outcome, self.rng)
            result = pulses_to_frame(received, self.tolerance)
            logger.trace("IR -> {}: link {} decoder {}", placement.receiver.node_id, outcome.value, result.outcome.value)
            for observer in self.observers:
                observer(placement.receiver.node_id, outcome, result)
            placement.receiver.on_ir_frame(result, now)
