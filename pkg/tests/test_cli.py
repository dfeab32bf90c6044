import csv
import shutil
import subprocess
from importlib import resources

import pytest

from mospecg.cli import main

DATA = resources.files("mospecg") / "data"
FAST = ["--nf", "5", "--ng", "10", "--workers", "1"]


@pytest.fixture
def karate_files(tmp_path):
    graph, truth = tmp_path / "karate.txt", tmp_path / "karate.cmty"
    shutil.copy(DATA / "karate.txt", graph)
    shutil.copy(DATA / "karate.cmty", truth)
    return str(graph), str(truth)


def rows_without_runtime(path):
    with open(path, newline="") as fh:
        return [{k: v for k, v in row.items() if k != "runtime_seconds"}
                for row in csv.DictReader(fh)]


def test_run_writes_solutions(tmp_path, karate_files, capsys):
    graph, truth = karate_files
    out = tmp_path / "out"
    assert main(["run", "--graph", graph, "--truth", truth, "--out", str(out), *FAST]) == 0
    rows = rows_without_runtime(out / "solutions.csv")
    assert [r["gamma1"] for r in rows] == ["0.0", "0.25", "0.5", "0.75", "1.0"]
    assert all(r["nmi"] for r in rows)
    assert (out / "gamma1_0.5000.membership").exists()
    assert "wrote" in capsys.readouterr().out


def test_run_is_reproducible(tmp_path, karate_files):
    graph, _ = karate_files
    a, b = tmp_path / "a", tmp_path / "b"
    main(["run", "--graph", graph, "--out", str(a), "--seed", "4", *FAST])
    main(["run", "--graph", graph, "--out", str(b), "--seed", "4", *FAST[:-1], "2"])
    assert rows_without_runtime(a / "solutions.csv") == rows_without_runtime(b / "solutions.csv")


def test_seed_from_environment(tmp_path, karate_files, monkeypatch):
    graph, _ = karate_files
    monkeypatch.setenv("MOSPECG_SEED", "4")
    main(["run", "--graph", graph, "--out", str(tmp_path / "env"), *FAST])
    monkeypatch.delenv("MOSPECG_SEED")
    main(["run", "--graph", graph, "--out", str(tmp_path / "arg"), "--seed", "4", *FAST])
    assert (rows_without_runtime(tmp_path / "env" / "solutions.csv")
            == rows_without_runtime(tmp_path / "arg" / "solutions.csv"))
    monkeypatch.setenv("MOSPECG_SEED", "abc")
    assert main(["run", "--graph", graph, "--out", str(tmp_path / "x"), *FAST]) == 1


def test_nf_two(tmp_path, karate_files):
    graph, _ = karate_files
    out = tmp_path / "out"
    assert main(["run", "--graph", graph, "--out", str(out), "--nf", "2", "--workers", "1"]) == 0
    assert [r["gamma1"] for r in rows_without_runtime(out / "solutions.csv")] == ["0.0", "1.0"]


def test_ensemble_and_eval(tmp_path, karate_files, capsys):
    graph, truth = karate_files
    out = tmp_path / "ens"
    code = main(["ensemble", "--graph", graph, "--truth", truth, "--out", str(out),
                 "--it", "5", "--workers", "1", "--emit-consensus"])
    assert code == 0
    assert "k=2" in capsys.readouterr().out
    assert (out / "consensus.csv").exists() and (out / "solutions.csv").exists()
    pred = out / "ensemble.membership"
    assert main(["eval", "--pred", str(pred), "--truth", truth, "--graph", graph]) == 0
    report = capsys.readouterr().out
    assert "nmi            1.000000" in report
    assert "pairs wrong    0" in report

    again = tmp_path / "reuse"
    assert main(["ensemble", "--graph", graph, "--solutions", str(out), "--out", str(again),
                 "--it", "5"]) == 0
    assert (again / "ensemble.membership").read_text() == pred.read_text()


@pytest.mark.parametrize("argv", [
    [],
    ["run", "--graph", "g.txt"],
    ["run", "--graph", "g.txt", "--out", "o", "--p", "3", "--p-frac", "0.2"],
    ["frobnicate"],
])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as err:
        main(argv)
    assert err.value.code == 1


def test_invalid_values_are_usage_errors(tmp_path, karate_files):
    graph, _ = karate_files
    base = ["run", "--graph", graph, "--out", str(tmp_path / "o"), "--workers", "1"]
    assert main(base + ["--nf", "1"]) == 1
    assert main(base + ["--np", "1"]) == 1
    assert main(["ensemble", "--graph", graph, "--out", str(tmp_path / "e"), "--tau", "2"]) == 1


def test_data_errors(tmp_path, karate_files):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1\n1 1\n")
    assert main(["run", "--graph", str(bad), "--out", str(tmp_path / "o")]) == 2
    assert main(["run", "--graph", str(tmp_path / "missing.txt"), "--out", str(tmp_path / "o")]) == 2
    graph, _ = karate_files
    short = tmp_path / "short.cmty"
    short.write_text("0 0\n1 1\n")
    assert main(["run", "--graph", graph, "--truth", str(short), "--out", str(tmp_path / "o")]) == 2


def test_console_script(tmp_path, karate_files):
    exe = shutil.which("mospecg")
    if exe is None:
        pytest.skip("console script not installed")
    graph, truth = karate_files
    done = subprocess.run([exe, "eval", "--pred", truth, "--truth", truth],
                          capture_output=True, text=True)
    assert done.returncode == 0
    assert "nmi            1.000000" in done.stdout
