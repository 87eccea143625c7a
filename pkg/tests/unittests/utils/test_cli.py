import csv

import pytest

from quicktalk_sim.errors import SimulationError
from quicktalk_sim.main import EXIT_OK, EXIT_SIMULATION, EXIT_USAGE, main
from quicktalk_sim.shared.utility_discovery import discover_utilities
from quicktalk_sim.utils.validate import ValidateUtility

SCENARIO = """\
name = cli
runs = 2
quicktalk.interval_s = 1
medium.p0 = 0
medium.k = 0
medium.rssi.6 = -40
user.phone.id = 0x00A1B2
user.filter = BULB
iot.bulb.type = BULB
"""


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "cli.scn"
    path.write_text(SCENARIO, encoding="utf8")
    return path


def test_discovery_finds_every_command() -> None:
    assert list(discover_utilities()) == ["batch", "registry", "run", "validate"]


class TestRun:
    def test_writes_csv_file(self, scenario_file, tmp_path) -> None:
        out = tmp_path / "out" / "run.csv"
        assert main(["run", str(scenario_file), "--seed", "3", "--out", str(out)]) == EXIT_OK
        rows = list(csv.DictReader(out.open(encoding="utf8")))
        assert [row["txn_id"] for row in rows] == ["1", "2"]
        assert {row["seed"] for row in rows} == {"3"}
        assert {row["success"] for row in rows} == {"true"}

    def test_stdout_and_overrides(self, scenario_file, capsys) -> None:
        assert main(["run", str(scenario_file), "--set", "runs=1", "--set", "name=over"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("scenario_name,seed,txn_id")
        assert len(lines) == 2
        assert lines[1].startswith("over,1,1,")

    def test_missing_scenario_file(self, tmp_path) -> None:
        assert main(["run", str(tmp_path / "missing.scn")]) == EXIT_USAGE

    def test_bad_override_value(self, scenario_file) -> None:
        assert main(["run", str(scenario_file), "--set", "ap.channel=13"]) == EXIT_USAGE

    def test_malformed_override(self, scenario_file) -> None:
        assert main(["run", str(scenario_file), "--set", "runs"]) == EXIT_USAGE

    def test_simulation_failure(self, scenario_file, monkeypatch) -> None:
        def broken(*args, **kwargs):
            raise SimulationError("clock went backwards")

        monkeypatch.setattr("quicktalk_sim.utils.run.run_simulation", broken)
        assert main(["run", str(scenario_file)]) == EXIT_SIMULATION


class TestBatch:
    def test_merged_in_seed_order(self, scenario_file, tmp_path) -> None:
        out = tmp_path / "batch.csv"
        assert main(["batch", str(scenario_file), "--seeds", "5,2", "--out", str(out)]) == EXIT_OK
        rows = list(csv.DictReader(out.open(encoding="utf8")))
        assert [(row["seed"], row["txn_id"]) for row in rows] == [("2", "1"), ("2", "2"), ("5", "1"), ("5", "2")]

    def test_same_seed_same_bytes(self, scenario_file, tmp_path) -> None:
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["batch", str(scenario_file), "--seeds", "1,2", "--out", str(a)])
        main(["batch", str(scenario_file), "--seeds", "1,2", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    @pytest.mark.parametrize("seeds", ["", " , ", "1,x", "1,-2"])
    def test_bad_seed_lists(self, scenario_file, seeds) -> None:
        assert main(["batch", str(scenario_file), "--seeds", seeds]) == EXIT_USAGE

    def test_workers_must_be_positive(self, scenario_file) -> None:
        assert main(["batch", str(scenario_file), "--seeds", "1", "--workers", "0"]) == EXIT_USAGE

    def test_seeds_are_required(self, scenario_file) -> None:
        assert main(["batch", str(scenario_file)]) == EXIT_USAGE


class TestOtherCommands:
    def test_validate(self, scenario_file) -> None:
        assert main(["validate", str(scenario_file)]) == EXIT_OK

    def test_validate_counts_nodes_per_channel(self, tmp_path) -> None:
        path = tmp_path / "topology.scn"
        path.write_text(
            "user.phone.id = 1\n"
            "iot.bulb.type = BULB\n"
            "iot.plug.type = POWER-PLUG\n"
            "iot.plug.registered = no\n"
            "coap.0.node = bulb\n"
            "coap.0.interval_s = 1\n"
            "download.enabled = yes\n",
            encoding="utf8",
        )
        utility = ValidateUtility()
        assert utility.process(path) == 100
        assert utility.statistics == {
            "channel 6": {"iot devices": 1, "coap sessions": 1, "downloads": 1},
            "channel 1": {"iot devices": 1},
        }

    def test_validate_reports_errors(self, tmp_path) -> None:
        path = tmp_path / "bad.scn"
        path.write_text("user.phone.id = 1\n", encoding="utf8")
        assert main(["validate", str(path)]) == EXIT_USAGE

    def test_registry(self, capsys) -> None:
        assert main(["registry"]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.splitlines()[0].split() == ["NAME", "LEVELS", "CODE"]
        assert "BULB" in out and "0x0841" in out

    def test_help(self, capsys) -> None:
        assert main(["help"]) == EXIT_OK
        assert "Available commands" in capsys.readouterr().out
        assert main(["help", "batch"]) == EXIT_OK
        assert "--seeds (required)" in capsys.readouterr().out
        assert main(["help", "keys"]) == EXIT_OK
        assert "iot.<name>.geometry" in capsys.readouterr().out
        assert main(["help", "nope"]) == EXIT_USAGE

    def test_no_command(self) -> None:
        assert main([]) == EXIT_USAGE

    def test_unknown_command(self) -> None:
        assert main(["frobnicate"]) == EXIT_USAGE

    def test_leading_program_name_is_tolerated(self) -> None:
        assert main(["quicktalk-sim", "registry"]) == EXIT_OK
