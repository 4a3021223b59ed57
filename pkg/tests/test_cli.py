import filecmp
import subprocess
import sys
from pathlib import Path

import pytest

from neurophot.cli import main
from neurophot.config import ConfigError, parse_config

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def test_channels_prints_capacity(capsys):
    assert main(["channels", "--finesse", "368", "--spacing", "3.41"]) == 0
    assert capsys.readouterr().out.strip() == "108"


def test_metrics_table(capsys):
    assert main(["metrics", "--table"]) == 0
    out = capsys.readouterr().out
    assert "Photonic Hybrid III-V/Si" in out and "SpiNNaker" in out


def test_metrics_values(capsys):
    assert main(["metrics", "--wallplug", "1", "--neurons", "1000", "--fan-in", "100",
                 "--rate", "1e6"]) == 0
    assert "energy_per_mac_pJ = 10" in capsys.readouterr().out
    assert main(["metrics", "--wallplug", "1"]) == 1


def test_missing_config_fails_cleanly(tmp_path, capsys):
    assert main(["simulate", str(tmp_path / "missing.cfg"), "--output-dir", str(tmp_path)]) == 1
    assert "not found" in capsys.readouterr().err


def test_bad_usage_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_unknown_key_is_an_error(tmp_path, capsys):
    cfg = tmp_path / "x.cfg"
    cfg.write_text("model = yamada\nT = 10\nbogus = 1\n")
    assert main(["simulate", str(cfg), "--output-dir", str(tmp_path)]) == 1
    assert "bogus" in capsys.readouterr().err


@pytest.mark.parametrize("cmd,cfg,files", [
    ("simulate", "yamada_kick.cfg", ["trajectory.csv", "spikes.csv", "summary.txt"]),
    ("simulate", "lif_drive.cfg", ["trajectory.csv", "spikes.csv", "summary.txt"]),
    ("calibrate", "calibrate4.cfg", ["calibration.csv", "summary.txt"]),
    ("solve-qp", "qp_small.cfg", ["solution.txt"]),
])
def test_outputs_are_byte_identical(tmp_path, cmd, cfg, files):
    for run in ("a", "b"):
        assert main([cmd, str(CONFIGS / cfg), "--output-dir", str(tmp_path / run)]) == 0
    for name in files:
        assert filecmp.cmp(tmp_path / "a" / name, tmp_path / "b" / name, shallow=False)


def test_network_run(tmp_path):
    cfg = tmp_path / "net.cfg"
    cfg.write_text("nodes = 2\npreset = restoring\nweights = 0 0 1 0\ndrive_gain = 0.01\n"
                   "input.0.impulse_times = 5\ninput.0.impulse_areas = 0.55\nT = 80\n")
    assert main(["network", str(cfg), "--output-dir", str(tmp_path)]) == 0
    events = (tmp_path / "spikes.csv").read_text().splitlines()
    assert events[0] == "node,t_spike" and [e.split(",")[0] for e in events[1:]] == ["0", "1"]


def test_qp_solution_file(tmp_path):
    assert main(["solve-qp", str(CONFIGS / "qp_small.cfg"), "--output-dir", str(tmp_path)]) == 0
    text = (tmp_path / "solution.txt").read_text()
    assert "converged = true" in text.lower()
    x = next(line for line in text.splitlines() if line.startswith("x ="))
    assert [float(v) for v in x.split("=")[1].replace(",", " ").split()] == pytest.approx([1, 1])


def test_output_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("NEUROPHOT_OUTPUT_DIR", str(tmp_path / "env"))
    assert main(["solve-qp", str(CONFIGS / "qp_small.cfg")]) == 0
    assert (tmp_path / "env" / "solution.txt").exists()


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "neurophot.cli", "channels", "--finesse", "1140"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "334"


def test_config_parsing():
    cfg = parse_config("a = 1\nlist = 1, 2,\n   3  # comment\nflag = yes\n")
    assert cfg.int("a") == 1 and list(cfg.floats("list")) == [1, 2, 3] and cfg.bool("flag")
    with pytest.raises(ConfigError):
        parse_config("[section]\na = 1\n")
    with pytest.raises(ConfigError):
        parse_config("a = x").float("a")
    with pytest.raises(ConfigError):
        parse_config("").float("a", parse_config("").REQUIRED)
