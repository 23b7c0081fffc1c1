import json
import subprocess
import sys

import numpy as np
import pytest

from opss import random_graph, read_graph, read_log, write_graph
from opss.cli import main


@pytest.fixture
def graph_file(tmp_path, g0):
    path = tmp_path / "g0.txt"
    write_graph(g0, path)
    return str(path)


def test_gen_half_hardness(tmp_path, capsys):
    out = str(tmp_path / "hh.txt")
    assert main(["gen", "--family", "half-hardness", "--n", "5", "--k", "3", "--r", "2", "--hidden", "1", "--out", out]) == 0
    meta = capsys.readouterr().out.strip()
    assert meta.startswith("family=half-hardness hidden=1 opt_value=8")
    assert read_graph(out).n_right == 10
    assert (tmp_path / "hh.txt.meta").read_text().strip() == meta


@pytest.mark.parametrize(
    "extra",
    [
        ["--family", "infeasible", "--n", "16", "--k", "2", "--r", "4", "--p", "4"],
        ["--family", "assumption2", "--n", "10", "--m", "4", "--k", "2"],
        ["--family", "assumption3", "--n", "6", "--k", "2", "--r", "3"],
    ],
)
def test_gen_other_families(tmp_path, capsys, extra):
    out = str(tmp_path / "g.txt")
    assert main(["gen", *extra, "--seed", "4", "--out", out]) == 0
    assert "opt_value=" in capsys.readouterr().out


def test_gen_infeasible_prints_regime(tmp_path, capsys):
    main(["gen", "--family", "infeasible", "--n", "64", "--k", "2", "--r", "32", "--p", "8", "--out", str(tmp_path / "x")])
    assert "k log^2 n" in capsys.readouterr().err


def test_gen_missing_param(tmp_path, capsys):
    assert main(["gen", "--family", "half-hardness", "--n", "5", "--out", str(tmp_path / "x")]) == 2
    assert "--k" in capsys.readouterr().err


def test_sample_solve_run(tmp_path, graph_file, capsys):
    log_path = str(tmp_path / "log.txt")
    assert main(["sample", "--graph", graph_file, "--dist", "uniform-exact-k n=3 k=1", "-t", "30", "--seed", "2", "--out", log_path]) == 0
    assert capsys.readouterr().out.startswith("OPSS v1 n=3 m=4 k=1")
    assert read_log(log_path).t == 30

    assert main(["solve", "--graph", graph_file, "--k", "2"]) == 0
    assert capsys.readouterr().out == "chosen: 0 1\nvalue: 3\n"
    assert main(["solve", "--graph", graph_file, "--k", "3", "--algo", "exact"]) == 0
    assert capsys.readouterr().out.endswith("value: 4\n")

    assert main(["run", "--samples", log_path, "--k", "2", "--seed", "1"]) == 0
    lines = dict(line.split(": ", 1) if ": " in line else (line.rstrip(":"), "") for line in capsys.readouterr().out.splitlines())
    assert lines["t2"] == "0 1" and lines["coin"] in ("t1", "t2")
    assert lines["surrogate_value_t2"] == "3"


def test_run_uniform_k_warns_sample_bound(tmp_path, capsys):
    g = random_graph(20, 6, 0.2, np.random.default_rng(0))
    gpath, lpath = str(tmp_path / "g.txt"), str(tmp_path / "l.txt")
    write_graph(g, gpath)
    main(["sample", "--graph", gpath, "--dist", "uniform-exact-k n=20 k=6", "-t", "100", "--out", lpath])
    capsys.readouterr()
    with pytest.warns(Warning):
        assert main(["run", "--samples", lpath, "--algo", "uniform-k", "--eps", "0.5"]) == 0
    captured = capsys.readouterr()
    assert "t >= " in captured.err and "this log has 100" in captured.err
    assert "coin: -" in captured.out


def test_run_uniform_k_needs_eps(tmp_path, graph_file, capsys):
    lpath = str(tmp_path / "l.txt")
    main(["sample", "--graph", graph_file, "--dist", "uniform-exact-k n=3 k=1", "-t", "3", "--out", lpath])
    assert main(["run", "--samples", lpath, "--algo", "uniform-k"]) == 2


def test_experiment(tmp_path, capsys):
    cfg = tmp_path / "exp.cfg"
    csv_path, json_path = tmp_path / "o.csv", tmp_path / "o.json"
    cfg.write_text("source=half-hardness\nn=20\nk=5\nr=3\ntrials=25\nsamples=40\nseed=9\n")
    assert main(["experiment", "--config", str(cfg), "--csv", str(csv_path), "--json", str(json_path)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["trials"] == 25
    assert json.loads(json_path.read_text())["mean_ratio"] == summary["mean_ratio"]
    assert len(csv_path.read_text().splitlines()) == 26


def test_check_nc(capsys):
    assert main(["check-nc", "--dist", "block-partition n=4 k=2", "--exact"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("negative-correlation: holds=false worst_violation=1/4")
    assert "witness=I={" in out[0]
    assert main(["check-nc", "--dist", "uniform-exact-k n=5 k=2"]) == 0
    assert "holds=true" in capsys.readouterr().out


def test_exit_codes(tmp_path, graph_file, capsys):
    assert main(["solve", "--graph", str(tmp_path / "missing.txt"), "--k", "1"]) == 2
    assert main(["check-nc", "--dist", "nonsense n=3"]) == 2
    assert main(["solve", "--graph", graph_file, "--k", "9"]) == 2
    assert main(["check-nc", "--dist", "uniform-exact-k n=11 k=2"]) == 3
    big = random_graph(40, 10, 0.1, np.random.default_rng(0))
    path = str(tmp_path / "big.txt")
    write_graph(big, path)
    assert main(["solve", "--graph", path, "--k", "10", "--algo", "exact"]) == 3
    assert "cap" in capsys.readouterr().err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "opss.cli", "check-nc", "--dist", "uniform-exact-k n=2 k=1"], capture_output=True, text=True)
    assert proc.returncode == 0 and "holds=true" in proc.stdout
