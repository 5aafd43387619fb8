import os

import pytest

from hypbergman.cli import main

TRIVIAL_CFG = """
model = trivial
k = 3,4
base_points = 0+1j; 0.3+1.5j
deltas = 0, 0.4
count = 2
radius = 8
seed = 11
cache = off
"""


@pytest.fixture()
def trivial_config(tmp_path):
    path = tmp_path / "trivial.cfg"
    path.write_text(TRIVIAL_CFG)
    return str(path)


def test_sweep_writes_csv(trivial_config, tmp_path, capsys):
    out = str(tmp_path / "sweep.csv")
    rc = main(["sweep", "--config", trivial_config, "--out", out])
    assert rc == 0
    assert os.path.exists(out)
    text = open(out).read()
    assert text.splitlines()[1].startswith("model,k,zx")
    assert "regime near" in capsys.readouterr().out


def test_flag_overrides_win(trivial_config, tmp_path):
    out1 = str(tmp_path / "a.csv")
    out2 = str(tmp_path / "b.csv")
    main(["sweep", "--config", trivial_config, "--out", out1])
    main(["sweep", "--config", trivial_config, "--out", out2, "--seed", "12"])
    a, b = open(out1).read(), open(out2).read()
    assert "seed=11" in a and "seed=12" in b
    assert a != b


def test_verify_roundtrip(trivial_config, tmp_path, capsys):
    out = str(tmp_path / "sweep.csv")
    main(["sweep", "--config", trivial_config, "--out", out])
    rc = main(["verify", "--config", trivial_config, "--in", out])
    assert rc == 0
    assert "PASS" in capsys.readouterr().out
    rc = main(["verify", "--config", trivial_config])  # inline run
    assert rc == 0


def test_verify_detects_corruption(trivial_config, tmp_path):
    out = str(tmp_path / "sweep.csv")
    main(["sweep", "--config", trivial_config, "--out", out])
    lines = open(out).read().splitlines()
    parts = lines[2].split(",")
    parts[12] = "-0.5"  # certified bound failure
    lines[2] = ",".join(parts)
    bad = tmp_path / "bad.csv"
    bad.write_text("\n".join(lines) + "\n")
    rc = main(["verify", "--config", trivial_config, "--in", str(bad)])
    assert rc == 1


def test_missing_config_is_usage_error(tmp_path):
    rc = main(["sweep", "--config", str(tmp_path / "nope.cfg")])
    assert rc == 2


def test_bad_config_value(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("model = klein\n")
    rc = main(["sweep", "--config", str(path)])
    assert rc == 2


def test_resource_cap_exit(tmp_path):
    path = tmp_path / "cap.cfg"
    path.write_text("model = modular\nk = 3\ndeltas = 0.3\ncount = 1\nradius = 4.5\ncache = off\n")
    rc = main(["sweep", "--config", str(path), "--cap", "40",
               "--out", str(tmp_path / "o.csv")])
    assert rc == 3


def test_count_and_diag_commands(tmp_path, capsys):
    cfg = tmp_path / "m.cfg"
    cfg.write_text(
        "model = modular\nk = 3\ndeltas = 0, 1.1\ncount = 1\nradius = 4.5\n"
        "cache = off\nn_samples = 8\n"
    )
    rc = main(["count", "--config", str(cfg), "--out", str(tmp_path / "c.csv")])
    assert rc == 0
    assert "min slack" in capsys.readouterr().out
    rc = main(["diag", "--config", str(cfg), "--out", str(tmp_path / "d.csv")])
    assert rc == 0
    assert "strip" in capsys.readouterr().out
    # the two CSVs exist and carry their schemas
    assert open(tmp_path / "c.csv").read().splitlines()[1].startswith("kind,")
    assert open(tmp_path / "d.csv").read().splitlines()[1].startswith("model,kind")


def test_no_cache_flag(trivial_config, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    out = str(tmp_path / "s.csv")
    rc = main(["sweep", "--config", trivial_config, "--out", out, "--no-cache"])
    assert rc == 0
    assert not (tmp_path / ".hypbergman-cache").exists()
