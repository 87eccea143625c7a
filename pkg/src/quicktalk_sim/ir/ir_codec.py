"""QuickTalk IR frame codec.

A frame carries 40 bits, sent MSB first::

    bits 39..16  user id (24)
    bits 15..2   device-type filter (14)
    bits  1..0   parity (2)

The 38 data bits (user id and filter) are protected by two even-parity bits:
parity bit 0 covers data bits 0..18, parity bit 1 covers data bits 19..37.

Pulse trains follow the NEC envelope: a 9 ms / 4.5 ms lead code, then one
mark/space pair per bit (562.5 us mark; 562.5 us space for 0, 1687.5 us for 1)
and a single trailing 562.5 us stop mark. The repeat block is not sent and the
38 kHz carrier is not modelled. Durations are integer ticks of 0.5 us.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from quicktalk_sim.errors import FrameWidthError, MalformedFilterError
from quicktalk_sim.ir.device_filter import DeviceTypeFilter, decode_filter, encode_filter
from quicktalk_sim.shared import TICKS_PER_MS, TICKS_PER_US, format_frame_hex

USER_ID_BITS = 24
FILTER_BITS = 14
PARITY_BITS = 2
DATA_BITS = USER_ID_BITS + FILTER_BITS
FRAME_BITS = DATA_BITS + PARITY_BITS

_LOW_HALF_BITS = 19
_LOW_HALF_MASK = (1 << _LOW_HALF_BITS) - 1

# NEC timings in ticks (0.5 us)
LEAD_MARK = 9000 * TICKS_PER_US
LEAD_SPACE = 4500 * TICKS_PER_US
BIT_MARK = 1125             # 562.5 us
ZERO_SPACE = 1125           # 562.5 us
ONE_SPACE = 3375            # 1687.5 us
STOP_MARK = BIT_MARK

DEFAULT_TOLERANCE = 0.25


class PulseState(Enum):
    ON = "ON"
    OFF = "OFF"


@dataclass(frozen=True)
class Segment:
    state: PulseState
    duration: int  # ticks


@dataclass(frozen=True)
class PulseTrain:
    """Demodulated IR envelope as alternating ON/OFF segments.

    Only the structure is enforced here (alternation, positive durations);
    whether the train starts with a valid lead code is the decoder's call.
    """

    segments: tuple[Segment, ...]

    def __post_init__(self) -> None:
        previous = None
        for seg in self.segments:
            if seg.duration <= 0:
                raise ValueError(f"segment durations must be positive, got {seg.duration}")
            if seg.state is previous:
                raise ValueError("pulse train segments must alternate ON/OFF")
            previous = seg.state

    def __len__(self) -> int:
        return len(self.segments)

    @property
    def duration_ticks(self) -> int:
        return sum(seg.duration for seg in self.segments)

    @property
    def duration_ms(self) -> float:
        return self.duration_ticks / TICKS_PER_MS

    def replace_segment(self, index: int, duration: int) -> PulseTrain:
        segments = list(self.segments)
        segments[index] = Segment(segments[index].state, duration)
        return PulseTrain(tuple(segments))


@dataclass(frozen=True)
class IrFrame:
    user_id: int
    filter: DeviceTypeFilter
    parity: int

    def __post_init__(self) -> None:
        _check_user_id(self.user_id)
        if not isinstance(self.parity, int) or not 0 <= self.parity < (1 << PARITY_BITS):
            raise FrameWidthError(f"parity must fit {PARITY_BITS} bits, got {self.parity!r}")

    @property
    def filter_code(self) -> int:
        return encode_filter(self.filter)

    @property
    def word(self) -> int:
        """The 40-bit payload as transmitted."""
        return (self.user_id << (FILTER_BITS + PARITY_BITS)) | (self.filter_code << PARITY_BITS) | self.parity

    @property
    def hex(self) -> str:
        return format_frame_hex(self.word)

    @property
    def ones(self) -> int:
        return self.word.bit_count()


class DecodeOutcome(Enum):
    DECODABLE = "decodable"
    PARTIALLY_DECODABLE = "partially_decodable"
    UNDETECTABLE = "undetectable"


@dataclass(frozen=True)
class DecodeResult:
    outcome: DecodeOutcome
    frame: IrFrame | None = None
    reason: str = ""

    @classmethod
    def decodable(cls, frame: IrFrame) -> DecodeResult:
        return cls(DecodeOutcome.DECODABLE, frame)

    @classmethod
    def partial(cls, reason: str) -> DecodeResult:
        return cls(DecodeOutcome.PARTIALLY_DECODABLE, None, reason)

    @classmethod
    def undetectable(cls, reason: str) -> DecodeResult:
        return cls(DecodeOutcome.UNDETECTABLE, None, reason)

    @property
    def is_decodable(self) -> bool:
        return self.outcome is DecodeOutcome.DECODABLE


def _check_user_id(user_id: int) -> None:
    if not isinstance(user_id, int) or not 0 <= user_id < (1 << USER_ID_BITS):
        raise FrameWidthError(f"user id must fit {USER_ID_BITS} bits, got {user_id!r}")


def _even_parity(value: int) -> int:
    return value.bit_count() & 1


def compute_parity(user_id: int, filter_code: int) -> int:
    """Two even-parity bits over the low and high 19 bits of the data word."""
    _check_user_id(user_id)
    if not isinstance(filter_code, int) or not 0 <= filter_code < (1 << FILTER_BITS):
        raise FrameWidthError(f"filter code must fit {FILTER_BITS} bits, got {filter_code!r}")
    data = (user_id << FILTER_BITS) | filter_code
    low = _even_parity(data & _LOW_HALF_MASK)
    high = _even_parity(data >> _LOW_HALF_BITS)
    return (high << 1) | low


def check_parity(frame: IrFrame) -> bool:
    return frame.parity == compute_parity(frame.user_id, frame.filter_code)


def encode_frame(user_id: int, filter: DeviceTypeFilter) -> IrFrame:
    """Build a frame with its parity filled in."""
    code = encode_filter(filter)
    return IrFrame(user_id, filter, compute_parity(user_id, code))


def frame_to_pulses(frame: IrFrame) -> PulseTrain:
    word = frame.word
    segments = [Segment(PulseState.ON, LEAD_MARK), Segment(PulseState.OFF, LEAD_SPACE)]
    for shift in range(FRAME_BITS - 1, -1, -1):
        bit = (word >> shift) & 1
        segments.append(Segment(PulseState.ON, BIT_MARK))
        segments.append(Segment(PulseState.OFF, ONE_SPACE if bit else ZERO_SPACE))
    segments.append(Segment(PulseState.ON, STOP_MARK))
    return PulseTrain(tuple(segments))


def _within(duration: int, nominal: int, tolerance: float) -> bool:
    return abs(duration - nominal) <= tolerance * nominal


def pulses_to_frame(pulses: PulseTrain, tolerance: float = DEFAULT_TOLERANCE) -> DecodeResult:
    """Decode a pulse train into one of the three reception outcomes.

    No lead code -> UNDETECTABLE. Lead code present but a symbol that cannot
    be classified, a wrong length, a malformed filter or a parity mismatch ->
    PARTIALLY_DECODABLE.
    """
    if not 0 <= tolerance < 0.5:
        raise ValueError(f"tolerance must be within [0, 0.5), got {tolerance}")
    segs = pulses.segments
    if len(segs) < 2:
        return DecodeResult.undetectable("no lead code")
    lead_mark, lead_space = segs[0], segs[1]
    if (lead_mark.state is not PulseState.ON or not _within(lead_mark.duration, LEAD_MARK, tolerance)
            or not _within(lead_space.duration, LEAD_SPACE, tolerance)):
        return DecodeResult.undetectable("lead code missing or deformed")

    expected = 2 + 2 * FRAME_BITS + 1
    if len(segs) != expected:
        return DecodeResult.partial(f"expected {expected} segments, got {len(segs)}")

    word = 0
    for index in range(FRAME_BITS):
        mark = segs[2 + 2 * index]
        space = segs[3 + 2 * index]
        if not _within(mark.duration, BIT_MARK, tolerance):
            return DecodeResult.partial(f"bit {index}: mark of {mark.duration} ticks")
        if _within(space.duration, ZERO_SPACE, tolerance):
            bit = 0
        elif _within(space.duration, ONE_SPACE, tolerance):
            bit = 1
        else:
            return DecodeResult.partial(f"bit {index}: space of {space.duration} ticks")
        word = (word << 1) | bit
    if not _within(segs[-1].duration, STOP_MARK, tolerance):
        return DecodeResult.partial("stop mark deformed")

    user_id = word >> (FILTER_BITS + PARITY_BITS)
    code = (word >> PARITY_BITS) & ((1 << FILTER_BITS) - 1)
    parity = word & 0b11
    if parity != compute_parity(user_id, code):
        return DecodeResult.partial("parity mismatch")
    try:
        filter = decode_filter(code)
    except MalformedFilterError as exc:
        return DecodeResult.partial(str(exc))
    return DecodeResult.decodable(IrFrame(user_id, filter, parity))


def frame_duration(frame: IrFrame) -> float:
    """Emission time in ms: 14.0625 + 1.125 per zero bit + 2.25 per one bit."""
    return frame_duration_ticks(frame) / TICKS_PER_MS


def frame_duration_ticks(frame: IrFrame) -> int:
    ones = frame.ones
    return (LEAD_MARK + LEAD_SPACE + STOP_MARK
            + (FRAME_BITS - ones) * (BIT_MARK + ZERO_SPACE) + ones * (BIT_MARK + ONE_SPACE))
