import json

import pytest

from qslack.cli import main


def write_config(tmp_path, data):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(data))
    return str(path)


def test_run_subcommand(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "problem": "classical_cham_primal",
        "optimizer": {"max_iters": 15},
        "schedule": {"kind": "fixed"},
        "n_runs": 1,
        "output_dir": str(tmp_path / "out"),
    })
    rc = main(["run", cfg])
    captured = capsys.readouterr().out
    assert rc == 0
    assert "oracle" in captured
    assert (tmp_path / "out" / "run_0.csv").exists()
    assert (tmp_path / "out" / "summary.csv").exists()
    assert (tmp_path / "out" / "convergence.svg").exists()


def test_run_output_dir_override(tmp_path):
    cfg = write_config(tmp_path, {
        "problem": "classical_cham_primal",
        "optimizer": {"max_iters": 5},
        "schedule": {"kind": "fixed"},
        "n_runs": 1,
        "output_dir": str(tmp_path / "ignored"),
    })
    rc = main(["run", cfg, "--output-dir", str(tmp_path / "chosen")])
    assert rc == 0
    assert (tmp_path / "chosen" / "run_0.csv").exists()
    assert not (tmp_path / "ignored").exists()


def test_oracle_subcommand(tmp_path, capsys):
    cfg = write_config(tmp_path, {"problem": "cham_dual"})
    rc = main(["oracle", cfg])
    out = capsys.readouterr().out
    assert rc == 0
    assert "-2.2096" in out
    assert "method" in out


def test_oracle_bad_config(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{nope")
    rc = main(["oracle", str(path)])
    assert rc == 2
    assert "error" in capsys.readouterr().err


def test_selftest(capsys):
    rc = main(["selftest"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "all checks passed" in out
    assert "FAIL" not in out
