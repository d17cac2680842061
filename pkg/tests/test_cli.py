import os

import pytest

from driftnet.cli import main
from driftnet.presets import preset_text

TINY = """\
Scenario.name = tiny
Scenario.endTime = 30
Scenario.updateInterval = 0.1
Group1.groupID = a
Group1.nrofHosts = 1
Group1.movementModel = StationaryMovement
Group1.nodeLocation = 0, 0
Group2.groupID = b
Group2.nrofHosts = 1
Group2.movementModel = StationaryMovement
Group2.nodeLocation = 60, 0
Events1.hosts = a0
Events1.tohosts = b0
Events1.size = 50k
Events1.interval = 5,5
Events1.time = 0, 20
"""

REPORT_FILES = ("message_stats.txt", "delivered_messages.txt",
                "message_delay.txt", "buffer_occupancy.txt")


@pytest.fixture
def tiny_settings(tmp_path):
    path = tmp_path / "tiny.settings"
    path.write_text(TINY)
    return str(path)


def test_run_writes_four_reports(tiny_settings, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["run", "-c", tiny_settings, "-o", str(out)]) == 0
    for name in REPORT_FILES:
        assert (out / name).exists()
    stdout = capsys.readouterr().out
    assert "tiny" in stdout


def test_run_seed_override_changes_header(tiny_settings, tmp_path):
    out = tmp_path / "out"
    assert main(["run", "-c", tiny_settings, "-o", str(out), "--seed", "99"]) == 0
    header = (out / "message_stats.txt").read_text().splitlines()[0]
    assert "seed=99" in header


def test_run_explain_prints_provenance(tiny_settings, tmp_path, capsys):
    assert main(["run", "-c", tiny_settings, "-o", str(tmp_path / "o"), "--explain"]) == 0
    stdout = capsys.readouterr().out
    assert "[default]" in stdout
    assert "Scenario.endTime = 30  [line 2]" in stdout


def test_batch_creates_seed_directories(tiny_settings, tmp_path):
    out = tmp_path / "batch"
    assert main(["batch", "-c", tiny_settings, "--seeds", "1..5", "-o", str(out)]) == 0
    for seed in range(1, 6):
        seed_dir = out / f"seed-{seed}"
        for name in REPORT_FILES:
            assert (seed_dir / name).exists()


def test_batch_parallel_matches_serial(tiny_settings, tmp_path):
    serial = tmp_path / "serial"
    parallel = tmp_path / "parallel"
    assert main(["batch", "-c", tiny_settings, "--seeds", "1..2", "-o", str(serial)]) == 0
    assert main(["batch", "-c", tiny_settings, "--seeds", "1..2", "-o", str(parallel),
                 "--parallel", "2"]) == 0
    for seed in (1, 2):
        for name in REPORT_FILES:
            a = (serial / f"seed-{seed}" / name).read_bytes()
            b = (parallel / f"seed-{seed}" / name).read_bytes()
            assert a == b


def test_validate_ok(tiny_settings, capsys):
    assert main(["validate", "-c", tiny_settings]) == 0
    assert "OK" in capsys.readouterr().out


def test_validate_missing_duration_exit_1(tmp_path, capsys):
    path = tmp_path / "broken.settings"
    path.write_text(TINY.replace("Scenario.endTime = 30\n", ""))
    assert main(["validate", "-c", str(path)]) == 1
    assert "Scenario.endTime" in capsys.readouterr().err


def test_parse_error_exit_1(tmp_path, capsys):
    path = tmp_path / "broken.settings"
    path.write_text("no equals sign here\n")
    assert main(["validate", "-c", str(path)]) == 1
    assert "line 1" in capsys.readouterr().err


def test_missing_settings_file_exit_2(tmp_path):
    assert main(["run", "-c", str(tmp_path / "nope.settings"), "-o", str(tmp_path)]) == 2


def test_unwritable_output_exit_2(tiny_settings, tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("i am a file")
    out = blocker / "sub"  # parent is a file: makedirs fails
    assert main(["run", "-c", tiny_settings, "-o", str(out)]) == 2


def test_describe_map_builtin(capsys):
    assert main(["describe-map", "builtin:grid10"]) == 0
    stdout = capsys.readouterr().out
    assert "vertices: 100" in stdout
    assert "edges: 180" in stdout
    assert "components: 1" in stdout


def test_describe_map_file(tmp_path, capsys):
    path = tmp_path / "map.wkt"
    path.write_text("LINESTRING (0 0, 3 4)\nLINESTRING (10 10, 13 14)\n")
    assert main(["describe-map", str(path)]) == 0
    stdout = capsys.readouterr().out
    assert "vertices: 4" in stdout
    assert "components: 2" in stdout


def test_preset_list_names_eight(capsys):
    assert main(["preset", "list"]) == 0
    stdout = capsys.readouterr().out
    canonical = [ln for ln in stdout.splitlines() if "->" not in ln]
    assert len(canonical) == 8
    assert "bt5-epidemic" in canonical
    assert any("msgsize-both -> bt5-epidemic" in ln for ln in stdout.splitlines())


def test_preset_emit_and_validate(tmp_path, capsys):
    out = tmp_path / "bt5.settings"
    assert main(["preset", "emit", "bt5-epidemic", "-o", str(out)]) == 0
    assert out.read_text() == preset_text("bt5-epidemic")
    assert main(["validate", "-c", str(out)]) == 0


def test_preset_emit_unknown_exit_1(tmp_path, capsys):
    assert main(["preset", "emit", "warp-10", "-o", str(tmp_path / "x")]) == 1


def test_driftnet_out_env_default(tiny_settings, tmp_path, monkeypatch):
    target = tmp_path / "env-out"
    monkeypatch.setenv("DRIFTNET_OUT", str(target))
    monkeypatch.chdir(tmp_path)
    assert main(["run", "-c", tiny_settings]) == 0
    assert (target / "message_stats.txt").exists()


def test_map_flag_overrides_settings(tmp_path, capsys):
    settings = tmp_path / "s.settings"
    settings.write_text(TINY + "MapBasedMovement.mapFile = builtin:palu-grid\n")
    assert main(["validate", "-c", str(settings), "-m", "builtin:grid10"]) == 0


def test_map_movement_without_map_exit_1(tmp_path, capsys):
    settings = tmp_path / "s.settings"
    settings.write_text(TINY + "Group3.groupID = c\nGroup3.nrofHosts = 2\n")
    assert main(["validate", "-c", str(settings)]) == 1
    assert "map" in capsys.readouterr().err.lower()

def test_describe_map_snap_epsilon(tmp_path, capsys):
    path = tmp_path / "near.wkt"
    path.write_text("LINESTRING (0 0, 100 0)\nLINESTRING (100.3 0.2, 200 0)\n")
    assert main(["describe-map", str(path)]) == 0
    assert "components: 2" in capsys.readouterr().out
    assert main(["describe-map", str(path), "--snap-epsilon", "1.0"]) == 0
    assert "components: 1" in capsys.readouterr().out


def test_report_subset_selection(tmp_path):
    settings = tmp_path / "subset.settings"
    settings.write_text(TINY + "Report.reports = MessageStatsReport\n")
    out = tmp_path / "out"
    assert main(["run", "-c", str(settings), "-o", str(out)]) == 0
    assert (out / "message_stats.txt").exists()
    assert not (out / "delivered_messages.txt").exists()
