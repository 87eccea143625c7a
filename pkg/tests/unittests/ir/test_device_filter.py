import pytest

from quicktalk_sim.errors import ConfigurationError, MalformedFilterError
from quicktalk_sim.ir.device_filter import (
    ANY_FILTER,
    DeviceType,
    DeviceTypeFilter,
    DeviceTypeRegistry,
    decode_filter,
    encode_filter,
    matches,
)

THERMAL = DeviceType(3, 1, 1)
BULB = DeviceType(2, 1, 1)


@pytest.fixture(scope="module")
def registry() -> DeviceTypeRegistry:
    return DeviceTypeRegistry.load()


class TestDeviceTypeFilter:
    @pytest.mark.parametrize("levels", [(0, 1, 0), (0, 0, 5), (1, 0, 3), (16, 0, 0), (1, 1, 64), (-1, 0, 0)])
    def test_invalid_filters(self, levels) -> None:
        with pytest.raises(MalformedFilterError):
            DeviceTypeFilter(*levels)

    @pytest.mark.parametrize("levels", [(0, 0, 0), (1, 0, 0), (1, 1, 0), (15, 15, 63)])
    def test_valid_filters(self, levels) -> None:
        assert DeviceTypeFilter(*levels).levels == levels

    def test_concrete(self) -> None:
        assert DeviceTypeFilter(2, 1, 1).is_concrete
        assert not DeviceTypeFilter(2, 1, 0).is_concrete

    def test_device_type_needs_all_levels(self) -> None:
        with pytest.raises(ConfigurationError):
            DeviceType(1, 1, 0)


class TestCodes:
    @pytest.mark.parametrize(
        "flt,code",
        [
            (ANY_FILTER, 0),
            (DeviceTypeFilter(1, 0, 0), 1 << 10),
            (DeviceTypeFilter(2, 1, 1), (2 << 10) | (1 << 6) | 1),
            (DeviceTypeFilter(15, 15, 63), 0x3FFF),
        ],
    )
    def test_encode(self, flt, code) -> None:
        assert encode_filter(flt) == code
        assert decode_filter(code) == flt

    @pytest.mark.parametrize("code", [1, 1 << 6, (1 << 10) | 1, 1 << 14, -1])
    def test_decode_rejects_bad_codes(self, code) -> None:
        with pytest.raises(MalformedFilterError):
            decode_filter(code)

    def test_every_valid_code_round_trips(self) -> None:
        valid = 0
        for code in range(1 << 14):
            try:
                flt = decode_filter(code)
            except MalformedFilterError:
                continue
            valid += 1
            assert encode_filter(flt) == code
        # 1 + 15 + 15*15 + 15*15*63
        assert valid == 1 + 15 + 225 + 225 * 63


class TestMatches:
    @pytest.mark.parametrize(
        "flt,expected",
        [
            (ANY_FILTER, True),
            (DeviceTypeFilter(3, 0, 0), True),
            (DeviceTypeFilter(3, 1, 0), True),
            (DeviceTypeFilter(3, 1, 1), True),
            (DeviceTypeFilter(3, 1, 2), False),
            (DeviceTypeFilter(3, 2, 0), False),
            (DeviceTypeFilter(4, 1, 1), False),
        ],
    )
    def test_thermal_controller(self, flt, expected) -> None:
        assert matches(flt, THERMAL) is expected

    def test_concrete_filter_matches_only_its_type(self) -> None:
        assert matches(BULB.as_filter(), BULB)
        assert not matches(BULB.as_filter(), THERMAL)


class TestRegistry:
    def test_bundled_names(self, registry) -> None:
        assert {"BULB", "POWER-PLUG", "THERMAL-CONTROLLER", "SENSOR", "DISPLAY"} <= set(registry.names())
        assert registry.version == "1"

    @pytest.mark.parametrize(
        "text,expected",
        [
            ("BULB", DeviceTypeFilter(2, 1, 1)),
            ("bulb", DeviceTypeFilter(2, 1, 1)),
            ("ANY", ANY_FILTER),
            ("3.1.0", DeviceTypeFilter(3, 1, 0)),
            ("DISPLAY", DeviceTypeFilter(1, 0, 0)),
        ],
    )
    def test_resolve_filter(self, registry, text, expected) -> None:
        assert registry.resolve_filter(text) == expected

    @pytest.mark.parametrize("text", ["TOASTER", "0.1.0", "1.2"])
    def test_resolve_filter_errors(self, registry, text) -> None:
        with pytest.raises(ConfigurationError):
            registry.resolve_filter(text)

    def test_resolve_type_requires_concrete(self, registry) -> None:
        assert registry.resolve_type("POWER-PLUG") == DeviceType(4, 1, 1)
        with pytest.raises(ConfigurationError):
            registry.resolve_type("DISPLAY")

    def test_name_of(self, registry) -> None:
        assert registry.name_of(DeviceTypeFilter(2, 1, 1)) == "BULB"
        assert registry.name_of(DeviceTypeFilter(9, 9, 9)) is None

    def test_parse_errors(self) -> None:
        with pytest.raises(ConfigurationError, match="<registry>:2"):
            DeviceTypeRegistry.parse("A = 1.0.0\nnot a line\n")
        with pytest.raises(ConfigurationError, match="duplicate"):
            DeviceTypeRegistry.parse("A = 1.0.0\nA = 2.0.0\n")
        with pytest.raises(ConfigurationError):
            DeviceTypeRegistry.parse("A = 0.1.0\n")

    def test_load_from_file(self, tmp_path) -> None:
        path = tmp_path / "types.txt"
        path.write_text("# version: 7\nLAMP = 9.1.1\n", encoding="utf8")
        registry = DeviceTypeRegistry.load(path)
        assert registry.version == "7"
        assert registry.resolve_type("LAMP") == DeviceType(9, 1, 1)
