"""Scenario files: line based ``key = value`` text with ``#`` comments.

Keys are matched against a table of patterns, each with a converter that
parses and range-checks the value. Unknown keys are an error unless
``QUICKTALK_STRICT=0`` is set, in which case they are logged and skipped.
Later assignments win, which is how ``--set`` overrides apply.

Example::

    name = fig9c
    runs = 500
    medium.p0 = 0.1778
    user.phone.id = 0x00A1B2
    iot.bulb.type = BULB
    iot.bulb.geometry = 2.0, 5, 0
    ir.alpha.indoor.5m = 8

``ir.alpha.<profile>.<distance>m`` entries replace or extend the cone
half-angle table of that profile; entries for an inactive profile are ignored.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace
import os
from pathlib import Path
import re
from typing import Any, Callable, Iterable

from loguru import logger

from quicktalk_sim.devices.command_processors import PROCESSORS
from quicktalk_sim.devices.iot_device import IotConfig, UNREGISTERED_CHANNEL
from quicktalk_sim.devices.user_device import UserConfig
from quicktalk_sim.errors import ConfigurationError, ScenarioError
from quicktalk_sim.ir.device_filter import ANY_FILTER, DeviceType, DeviceTypeFilter, DeviceTypeRegistry
from quicktalk_sim.ir.ir_codec import DEFAULT_TOLERANCE
from quicktalk_sim.ir.ir_link import DEFAULT_ALPHA_TABLE, IrEnvironment, IrGeometry, IrProfile
from quicktalk_sim.traffic.coap_session import AP_NODE, CoapConfig
from quicktalk_sim.traffic.download_flow import DownloadConfig
from quicktalk_sim.wifi.wifi_medium import MediumConfig, check_channel

OVERRIDE_LINE = "<override>"
WIFI_PROFILES_MW = {"pi2": 1100.0, "pizero": 400.0}
_NAME = r"([A-Za-z][\w-]*)"
_PROFILE = "(" + "|".join(p.value for p in IrProfile) + ")"
_DISTANCE = r"(\d+(?:\.\d+)?)m"


def strict_from_env() -> bool:
    return os.environ.get("QUICKTALK_STRICT", "1").strip() != "0"


@dataclass(frozen=True)
class IotSpec:
    name: str
    type_name: str
    device_type: DeviceType
    geometry: IrGeometry = IrGeometry(1.0)
    channel: int | None = None
    registered: bool = True
    processor: str = "echo"


@dataclass(frozen=True)
class Scenario:
    name: str = "scenario"
    runs: int = 100
    seed: int = 1
    duration_s: float | None = None
    ap_channel: int = 6
    ir_env: IrEnvironment = field(default_factory=IrEnvironment)
    ir_tolerance: float = DEFAULT_TOLERANCE
    medium: MediumConfig = field(default_factory=MediumConfig)
    user: UserConfig = field(default_factory=UserConfig)
    command: bytes = b"TOGGLE"
    user_filter: DeviceTypeFilter = ANY_FILTER
    users: dict[str, int] = field(default_factory=dict)
    iots: dict[str, IotSpec] = field(default_factory=dict)
    iot: IotConfig = field(default_factory=IotConfig)
    coap: tuple[CoapConfig, ...] = ()
    download: DownloadConfig = field(default_factory=DownloadConfig)
    quicktalk_interval_s: float = 5.0
    source: str | None = None

    def channel_of(self, iot: IotSpec) -> int:
        if iot.channel is not None:
            return iot.channel
        return self.ap_channel if iot.registered else UNREGISTERED_CHANNEL

    @property
    def bg_sessions(self) -> int:
        return len(self.coap)

    @property
    def bg_interval_s(self) -> float | None:
        return min((c.interval_s for c in self.coap), default=None)

    def with_seed(self, seed: int) -> Scenario:
        return replace(self, seed=seed)


# converters

def _number(kind: type, lo: float | None = None, hi: float | None = None, *,
            lo_open: bool = False, hi_open: bool = False) -> Callable[[str], Any]:
    def convert(text: str) -> Any:
        try:
            value = int(text, 0) if kind is int else float(text)
        except ValueError:
            raise ValueError(f"expected {kind.__name__}, got {text!r}") from None
        if lo is not None and (value < lo or (lo_open and value == lo)):
            raise ValueError(f"value {value} must be {'>' if lo_open else '>='} {lo}")
        if hi is not None and (value > hi or (hi_open and value == hi)):
            raise ValueError(f"value {value} must be {'<' if hi_open else '<='} {hi}")
        return value
    return convert


def _bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _text(text: str) -> str:
    if not text:
        raise ValueError("value must not be empty")
    return text


def _channel(text: str) -> int:
    return check_channel(_number(int)(text))


def _profile(text: str) -> IrProfile:
    try:
        return IrProfile(text.lower())
    except ValueError:
        raise ValueError(f"unknown IR profile {text!r}; use one of {[p.value for p in IrProfile]}") from None


def _geometry(text: str) -> IrGeometry:
    """``distance[, tx_angle[, rx_angle]]`` in metres and degrees."""
    parts = [p.strip() for p in text.split(",")]
    if not 1 <= len(parts) <= 3:
        raise ValueError(f"geometry takes 1 to 3 comma separated numbers, got {text!r}")
    return IrGeometry(*(_number(float)(p) for p in parts))


def _power(text: str) -> float:
    profile = WIFI_PROFILES_MW.get(text.lower())
    return profile if profile is not None else _number(float, 0)(text)


def _user_id(text: str) -> int:
    return _number(int, 0, (1 << 24) - 1)(text)


_positive = _number(float, 0, lo_open=True)
_non_negative = _number(float, 0)
_fraction = _number(float, 0, 1)

# (pattern, converter, target) -- target is (group, field) for fixed keys and
# None for keys assembled from their match groups
_KEYS: list[tuple[re.Pattern[str], Callable[[str], Any], tuple[str, str] | None]] = [
    (re.compile(r"name"), _text, ("scenario", "name")),
    (re.compile(r"runs"), _number(int, 1), ("scenario", "runs")),
    (re.compile(r"seed"), _number(int, 0), ("scenario", "seed")),
    (re.compile(r"duration_s"), _positive, ("scenario", "duration_s")),
    (re.compile(r"ap\.channel"), _channel, ("scenario", "ap_channel")),
    (re.compile(r"quicktalk\.interval_s"), _positive, ("scenario", "quicktalk_interval_s")),
    (re.compile(r"ir\.profile"), _profile, ("ir", "profile")),
    (re.compile(r"ir\.max_range_m"), _positive, ("ir", "max_range_m")),
    (re.compile(r"ir\.partial_share"), _fraction, ("ir", "partial_share")),
    (re.compile(r"ir\.tolerance"), _number(float, 0, 0.5, hi_open=True), ("scenario", "ir_tolerance")),
    (re.compile(rf"ir\.alpha\.{_PROFILE}\.{_DISTANCE}"), _number(float, 0, 90, lo_open=True), None),
    (re.compile(r"medium\.switch_delay_ms"), _positive, ("medium", "switch_delay_ms")),
    (re.compile(r"medium\.p0"), _number(float, 0, 1, hi_open=True), ("medium", "p0")),
    (re.compile(r"medium\.k"), _non_negative, ("medium", "k")),
    (re.compile(r"medium\.processing_ms"), _non_negative, ("medium", "processing_ms")),
    (re.compile(r"medium\.basic_rate_mbps"), _positive, ("medium", "basic_rate_mbps")),
    (re.compile(r"medium\.payload_rate_mbps"), _positive, ("medium", "payload_rate_mbps")),
    (re.compile(r"medium\.load_window_ms"), _positive, ("medium", "load_window_ms")),
    (re.compile(r"medium\.rssi\.(\d+)"), _number(float, -120, 0), None),
    (re.compile(r"user\.k_top"), _number(int, 1, 11), ("user", "k_top")),
    (re.compile(r"user\.rounds"), _number(int, 1), ("user", "rounds")),
    (re.compile(r"user\.dwell_ms"), _positive, ("user", "dwell_ms")),
    (re.compile(r"user\.retx_ms"), _non_negative, ("user", "retx_ms")),
    (re.compile(r"user\.timeout_ms"), _positive, ("user", "command_timeout_ms")),
    (re.compile(r"user\.ctx_switch_ms"), _non_negative, ("user", "ctx_switch_ms")),
    (re.compile(r"user\.command"), _text, ("scenario", "command")),
    (re.compile(r"user\.filter"), _text, ("scenario", "user_filter")),
    (re.compile(rf"user\.{_NAME}\.id"), _user_id, None),
    (re.compile(r"iot\.beacon_ms"), _positive, ("iot", "beacon_ms")),
    (re.compile(r"iot\.sweep_timeout_ms"), _positive, ("iot", "sweep_timeout_ms")),
    (re.compile(r"iot\.session_timeout_ms"), _positive, ("iot", "session_timeout_ms")),
    (re.compile(r"iot\.ir_receiver_mw"), _non_negative, ("iot", "ir_receiver_mw")),
    (re.compile(r"iot\.power"), _power, ("iot", "wifi_active_mw")),
    (re.compile(rf"iot\.{_NAME}\.type"), _text, None),
    (re.compile(rf"iot\.{_NAME}\.channel"), _channel, None),
    (re.compile(rf"iot\.{_NAME}\.geometry"), _geometry, None),
    (re.compile(rf"iot\.{_NAME}\.registered"), _bool, None),
    (re.compile(rf"iot\.{_NAME}\.processor"), _text, None),
    (re.compile(r"coap\.(\d+)\.node"), _text, None),
    (re.compile(r"coap\.(\d+)\.interval_s"), _positive, None),
    (re.compile(r"coap\.(\d+)\.request_bytes"), _number(int, 1, 1500), None),
    (re.compile(r"coap\.(\d+)\.response_bytes"), _number(int, 1, 1500), None),
    (re.compile(r"coap\.(\d+)\.offset_ms"), _non_negative, None),
    (re.compile(r"download\.enabled"), _bool, ("download", "enabled")),
    (re.compile(r"download\.rate_mbps"), _positive, ("download", "rate_mbps")),
    (re.compile(r"download\.airtime_cost_s"), _non_negative, ("download", "airtime_cost_s")),
    (re.compile(r"download\.channel_share"), _fraction, ("download", "channel_share")),
]


def known_keys() -> list[str]:
    """Human readable key patterns, for help output."""
    return [pattern.pattern.replace(_PROFILE, "<profile>").replace(_DISTANCE, "<distance>m")
            .replace(r"(\d+)", "<n>").replace(_NAME, "<name>").replace("\\", "")
            for pattern, _, _ in _KEYS]


class _Loader:
    def __init__(self, source: str, registry: DeviceTypeRegistry, strict: bool) -> None:
        self.source = source
        self.registry = registry
        self.strict = strict
        self.values: dict[str, tuple[Any, re.Match[str], tuple[str, str] | None]] = {}
        self.lines: dict[str, int | str] = {}

    def fail(self, message: str, key: str | None = None) -> ScenarioError:
        return ScenarioError(message, path=self.source, line=self.lines.get(key) if key else None)

    def assign(self, key: str, text: str, line: int | str) -> None:
        for pattern, convert, target in _KEYS:
            match = pattern.fullmatch(key)
            if match is None:
                continue
            try:
                value = convert(text)
            except ValueError as exc:
                raise ScenarioError(f"{key}: {exc}", path=self.source, line=line) from None
            if key in self.values:
                logger.debug("{}:{}: {} reassigned", self.source, line, key)
            self.values[key] = (value, match, target)
            self.lines[key] = line
            return
        if self.strict:
            raise ScenarioError(f"unknown key {key!r}", path=self.source, line=line)
        logger.warning("{}:{}: ignoring unknown key {!r}", self.source, line, key)

    def feed(self, text: str) -> None:
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep or not key.strip():
                raise ScenarioError(f"expected 'key = value', got {raw.strip()!r}", path=self.source, line=lineno)
            self.assign(key.strip(), value.strip(), lineno)

    def build(self) -> Scenario:
        groups: dict[str, dict[str, Any]] = defaultdict(dict)
        first_key: dict[str, str] = {}
        rssi: dict[int, float] = {}
        alpha: dict[IrProfile, dict[float, tuple[float, str]]] = defaultdict(dict)
        users: dict[str, int] = {}
        iot_attrs: dict[str, dict[str, tuple[Any, str]]] = defaultdict(dict)
        coap_attrs: dict[int, dict[str, tuple[Any, str]]] = defaultdict(dict)

        for key, (value, match, target) in self.values.items():
            if target is not None:
                group, name = target
                groups[group][name] = value
                first_key.setdefault(group, key)
            elif key.startswith("medium.rssi."):
                try:
                    rssi[check_channel(int(match.group(1)))] = value
                except ConfigurationError as exc:
                    raise self.fail(str(exc), key) from None
            elif key.startswith("ir.alpha."):
                distance = float(match.group(2))
                if distance <= 0:
                    raise self.fail(f"{key}: distance must be > 0", key)
                alpha[IrProfile(match.group(1))][distance] = (value, key)
            elif key.startswith("user."):
                users[match.group(1)] = value
            elif key.startswith("iot."):
                iot_attrs[match.group(1)][key.rsplit(".", 1)[1]] = (value, key)
            else:
                coap_attrs[int(match.group(1))][key.rsplit(".", 1)[1]] = (value, key)

        def make(group: str, factory: Callable[..., Any], **extra: Any) -> Any:
            try:
                return factory(**groups.get(group, {}), **extra)
            except ConfigurationError as exc:
                raise self.fail(str(exc), first_key.get(group)) from None

        scenario_kw = dict(groups.get("scenario", {}))
        filter_text = scenario_kw.pop("user_filter", None)
        user_filter = ANY_FILTER
        if filter_text is not None:
            try:
                user_filter = self.registry.resolve_filter(filter_text)
            except ConfigurationError as exc:
                raise self.fail(str(exc), "user.filter") from None
        if "command" in scenario_kw:
            scenario_kw["command"] = scenario_kw["command"].encode("utf8")

        profile = groups.get("ir", {}).pop("profile", IrProfile.INDOOR)
        if alpha[profile]:
            table = dict(DEFAULT_ALPHA_TABLE)
            table.update({distance: degrees for distance, (degrees, _) in alpha[profile].items()})
            groups["ir"]["alpha_table"] = tuple(sorted(table.items()))
            first_key.setdefault("ir", min(key for _, key in alpha[profile].values()))
        for other, entries in alpha.items():
            if other is not profile and entries:
                logger.debug("{}: ignoring {} cone entries for inactive IR profile {}",
                             self.source, len(entries), other.value)
        ir_env = make("ir", lambda **kw: IrEnvironment.for_profile(profile, **kw))

        if not users:
            raise self.fail("at least one user device is required (user.<name>.id)")
        if len(set(users.values())) != len(users):
            raise self.fail("user ids must be unique")
        if not iot_attrs:
            raise self.fail("at least one IoT device is required (iot.<name>.type)")

        iots: dict[str, IotSpec] = {}
        for name, attrs in sorted(iot_attrs.items()):
            if name == AP_NODE or name in users:
                raise self.fail(f"node name {name!r} is used twice", next(iter(attrs.values()))[1])
            if "type" not in attrs:
                raise self.fail(f"iot.{name}.type is required", next(iter(attrs.values()))[1])
            type_name, type_key = attrs.pop("type")
            try:
                device_type = self.registry.resolve_type(type_name)
            except ConfigurationError as exc:
                raise self.fail(str(exc), type_key) from None
            processor, processor_key = attrs.get("processor", ("echo", None))
            if processor not in PROCESSORS:
                raise self.fail(f"unknown command processor {processor!r}", processor_key)
            iots[name] = IotSpec(name, type_name.upper(), device_type,
                                 **{attr: value for attr, (value, _) in attrs.items()})

        scenario = Scenario(
            **scenario_kw,
            ir_env=ir_env,
            medium=make("medium", MediumConfig, rssi=rssi),
            user=make("user", UserConfig),
            user_filter=user_filter,
            users=dict(sorted(users.items())),
            iots=iots,
            iot=make("iot", IotConfig),
            download=make("download", DownloadConfig),
            source=self.source,
        )

        sessions = []
        for index, attrs in sorted(coap_attrs.items()):
            some_key = next(iter(attrs.values()))[1]
            if "node" not in attrs or "interval_s" not in attrs:
                raise self.fail(f"coap.{index} needs both node and interval_s", some_key)
            node, node_key = attrs.pop("node")
            iot = iots.get(node)
            if iot is None:
                raise self.fail(f"coap.{index}.node names unknown IoT device {node!r}", node_key)
            if scenario.channel_of(iot) != scenario.ap_channel:
                raise self.fail(f"coap.{index}.node {node!r} is not on the AP channel {scenario.ap_channel}", node_key)
            sessions.append(CoapConfig(node, **{attr: value for attr, (value, _) in attrs.items()}))
        return replace(scenario, coap=tuple(sessions))


def parse_scenario_text(text: str, *, source: str = "<scenario>", overrides: Iterable[tuple[str, str]] = (),
                        registry: DeviceTypeRegistry | None = None, strict: bool | None = None) -> Scenario:
    loader = _Loader(source, registry or DeviceTypeRegistry.load(), strict_from_env() if strict is None else strict)
    loader.feed(text)
    for key, value in overrides:
        loader.assign(key, value, OVERRIDE_LINE)
    return loader.build()


def parse_scenario(path: Path | str, *, overrides: Iterable[tuple[str, str]] = (),
                   registry: DeviceTypeRegistry | None = None, strict: bool | None = None) -> Scenario:
    """Load a scenario file, then apply ``key=value`` overrides on top of it."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf8")
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario: {exc.strerror or exc}", path=path) from None
    return parse_scenario_text(text, source=str(path), overrides=overrides, registry=registry, strict=strict)
