"""Wire layout of QuickTalk broadcast payloads.

Every payload starts with the 24-bit user id and the length-prefixed id of
the IoT device::

    BEACON / ACK : user_id(3) dev_len(1) device_id
    COMMAND      : user_id(3) dev_len(1) device_id txn_id(4) body
    RESPONSE     : user_id(3) dev_len(1) device_id txn_id(4) status(1) body
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
import struct

from quicktalk_sim.errors import MalformedPayloadError

_TXN = struct.Struct(">I")
_STATUS = struct.Struct(">B")


class Status(IntEnum):
    OK = 0
    BAD_REQUEST = 1
    UNSUPPORTED = 2


def _pack_head(user_id: int, device_id: str) -> bytes:
    raw_id = device_id.encode("utf8")
    if len(raw_id) > 255:
        raise ValueError(f"device id too long: {device_id!r}")
    if not 0 <= user_id < (1 << 24):
        raise ValueError(f"user id must fit 24 bits, got {user_id!r}")
    return user_id.to_bytes(3, "big") + bytes([len(raw_id)]) + raw_id


def _unpack_head(payload: bytes) -> tuple[int, str, int]:
    if len(payload) < 4:
        raise MalformedPayloadError(f"payload too short ({len(payload)} bytes)")
    user_id = int.from_bytes(payload[:3], "big")
    end = 4 + payload[3]
    if len(payload) < end:
        raise MalformedPayloadError("truncated device id")
    try:
        device_id = payload[4:end].decode("utf8")
    except UnicodeDecodeError as exc:
        raise MalformedPayloadError(f"device id is not utf-8: {exc}") from None
    return user_id, device_id, end


@dataclass(frozen=True)
class Beacon:
    user_id: int
    device_id: str

    def pack(self) -> bytes:
        return _pack_head(self.user_id, self.device_id)

    @classmethod
    def unpack(cls, payload: bytes) -> Beacon:
        user_id, device_id, end = _unpack_head(payload)
        if end != len(payload):
            raise MalformedPayloadError("trailing bytes after beacon")
        return cls(user_id, device_id)


@dataclass(frozen=True)
class Ack(Beacon):
    @classmethod
    def unpack(cls, payload: bytes) -> Ack:
        user_id, device_id, end = _unpack_head(payload)
        if end != len(payload):
            raise MalformedPayloadError("trailing bytes after ack")
        return cls(user_id, device_id)


@dataclass(frozen=True)
class Command:
    user_id: int
    device_id: str
    txn_id: int
    body: bytes

    def pack(self) -> bytes:
        return _pack_head(self.user_id, self.device_id) + _TXN.pack(self.txn_id) + self.body

    @classmethod
    def unpack(cls, payload: bytes) -> Command:
        user_id, device_id, end = _unpack_head(payload)
        if len(payload) < end + _TXN.size:
            raise MalformedPayloadError("missing transaction id")
        (txn_id,) = _TXN.unpack_from(payload, end)
        return cls(user_id, device_id, txn_id, payload[end + _TXN.size:])


@dataclass(frozen=True)
class Response:
    user_id: int
    device_id: str
    txn_id: int
    status: Status
    body: bytes

    def pack(self) -> bytes:
        return (_pack_head(self.user_id, self.device_id) + _TXN.pack(self.txn_id)
                + _STATUS.pack(int(self.status)) + self.body)

    @classmethod
    def unpack(cls, payload: bytes) -> Response:
        user_id, device_id, end = _unpack_head(payload)
        if len(payload) < end + _TXN.size + _STATUS.size:
            raise MalformedPayloadError("missing transaction id or status")
        (txn_id,) = _TXN.unpack_from(payload, end)
        (status,) = _STATUS.unpack_from(payload, end + _TXN.size)
        try:
            status = Status(status)
        except ValueError:
            raise MalformedPayloadError(f"unknown status {status}") from None
        return cls(user_id, device_id, txn_id, status, payload[end + _TXN.size + _STATUS.size:])
