import pytest

from quicktalk_sim.shared import (
    TICKS_PER_MS,
    format_frame_hex,
    format_ms,
    ms_to_ticks,
    parse_override,
    parse_seed_list,
    percentile,
    stable_seed,
    ticks_to_ms,
)


class TestPercentile:
    @pytest.mark.parametrize(
        "samples,p,expected",
        [
            ([1, 2, 3, 4, 5], 50, 3),
            ([5, 1, 4, 2, 3], 50, 3),
            ([7], 0, 7),
            ([7], 37.5, 7),
            ([7], 100, 7),
            ([1, 2, 3, 4, 5], 100, 5),
            ([1, 2, 3, 4, 5], 0, 1),
            ([1, 2, 3, 4, 5], 80, 4),
            ([1, 2, 3, 4, 5], 81, 5),
        ],
    )
    def test_nearest_rank(self, samples, p, expected) -> None:
        assert percentile(samples, p) == expected

    def test_empty_samples_rejected(self) -> None:
        with pytest.raises(ValueError):
            percentile([], 50)

    @pytest.mark.parametrize("p", [-1, 100.5])
    def test_out_of_range_p_rejected(self, p) -> None:
        with pytest.raises(ValueError):
            percentile([1.0, 2.0], p)


@pytest.mark.parametrize(
    "ms,ticks",
    [(0.0, 0), (0.5625, 1125), (1.6875, 3375), (9.0, 18000), (50.0, 100000)],
)
def test_tick_conversions(ms: float, ticks: int) -> None:
    assert ms_to_ticks(ms) == ticks
    assert ticks_to_ms(ticks) == ms


def test_tick_unit_is_half_a_microsecond() -> None:
    assert TICKS_PER_MS == 2000


@pytest.mark.parametrize("value,expected", [(None, ""), (1.23456, "1.235"), (0, "0.000"), (59.0625, "59.062")])
def test_format_ms(value, expected) -> None:
    assert format_ms(value) == expected


def test_stable_seed_is_stable_and_name_dependent() -> None:
    assert stable_seed("wifi.u1") == stable_seed("wifi.u1")
    assert stable_seed("wifi.u1") != stable_seed("wifi.u2")
    assert 0 <= stable_seed("ir") < 2**64


class TestParseSeedList:
    @pytest.mark.parametrize("text,expected", [("1,2, 3", [1, 2, 3]), ("7", [7]), ("0x10,2,", [16, 2])])
    def test_valid(self, text, expected) -> None:
        assert parse_seed_list(text) == expected

    @pytest.mark.parametrize("text", ["", " , ", "a", "1,-2"])
    def test_invalid(self, text) -> None:
        with pytest.raises(ValueError):
            parse_seed_list(text)


def test_parse_override() -> None:
    assert parse_override("medium.p0 = 0.1") == ("medium.p0", "0.1")
    assert parse_override("user.command=ON=1") == ("user.command", "ON=1")
    with pytest.raises(ValueError):
        parse_override("novalue")
    with pytest.raises(ValueError):
        parse_override("=3")


def test_format_frame_hex() -> None:
    assert format_frame_hex(0) == "0000000000"
    assert format_frame_hex((1 << 40) - 1) == "FFFFFFFFFF"
    with pytest.raises(ValueError):
        format_frame_hex(1 << 40)
