import json
import subprocess
import sys

import pytest

from orlicz_mart.cli import main
from orlicz_mart.suites import SUITES

SMALL = ["--depth", "2", "--n", "4", "--seed", "3"]


def test_gen_corpus(tmp_path):
    out = tmp_path / "c.json"
    assert main(["gen-corpus", *SMALL, "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert [c["case"] for c in data["cases"]] == ["c00000", "c00001", "c00002", "c00003"]
    again = tmp_path / "d.json"
    main(["gen-corpus", *SMALL, "--out", str(again)])
    assert out.read_bytes() == again.read_bytes()


def test_norm_and_decompose(tmp_path, capsys):
    corpus = tmp_path / "c.json"
    main(["gen-corpus", *SMALL, "--out", str(corpus)])
    assert main(["norm", "--input", str(corpus), "--case", "1", "--q", "1,2"]) == 0
    norms = json.loads(capsys.readouterr().out)
    assert set(norms["weak_hardy"]) == {"wH", "wH_S", "wH_s", "wQ", "wD"}
    assert set(norms["campanato"]) == {"1", "2"}
    for method in "sSMQD":
        assert main(["decompose", "--input", str(corpus), "--method", method]) == 0
        dec = json.loads(capsys.readouterr().out)
        assert dec["kind"] in ("s", "S", "M") and dec["atomic_quasinorm"] >= 0


def test_verify_writes_reports(tmp_path, capsys):
    out = tmp_path / "rep"
    assert main(["verify", "--suite", "atomic,norms", *SMALL, "--out", str(out)]) == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == ["atomic.json", "atomic_cases.csv", "norms.json", "norms_cases.csv",
                     "summary.csv"]
    err = capsys.readouterr().err
    assert "PASS atomic" in err and "PASS norms" in err
    assert main(["report", str(out)]) == 0


def test_verify_is_deterministic_for_every_suite(tmp_path):
    for run in ("a", "b"):
        assert main(["verify", "--suite", "all", *SMALL, "--out", str(tmp_path / run)]) == 0
    for suite in SUITES:
        a = (tmp_path / "a" / f"{suite}.json").read_bytes()
        b = (tmp_path / "b" / f"{suite}.json").read_bytes()
        assert a == b, suite


def test_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"suite": "orlicz", "depth": 2, "n": 2, "seed": 1, "q": "1,2"}))
    out = tmp_path / "rep"
    assert main(["verify", "--config", str(cfg), "--out", str(out)]) == 0
    rep = json.loads((out / "orlicz.json").read_text())
    assert rep["config"]["qs"] == [1, 2] and rep["config"]["seed"] == 1


def test_bad_config_exits_2(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"depth": 2, "bogus": 1}))
    assert main(["verify", "--config", str(cfg)]) == 2
    cfg.write_text("{not json")
    assert main(["verify", "--config", str(cfg)]) == 2
    assert main(["verify", "--suite", "nope", *SMALL]) == 2
    assert "config error" in capsys.readouterr().err


def test_oversized_depth_exits_1(tmp_path, capsys):
    out = tmp_path / "rep"
    assert main(["verify", "--suite", "atomic", "--depth", "30", "--n", "1", "--out", str(out)]) == 1
    rep = json.loads((out / "atomic.json").read_text())
    assert rep["passed"] is False and rep["error"].startswith("DepthTooLarge")
    assert "FAIL atomic" in capsys.readouterr().err


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "orlicz_mart.cli", "verify", "--suite",
                           "orlicz", *SMALL], capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["suite"] == "orlicz"


@pytest.mark.parametrize("argv", [["norm", *SMALL], ["decompose", *SMALL, "--method", "S"]])
def test_generated_input_default(argv, capsys):
    assert main(argv) == 0
    assert json.loads(capsys.readouterr().out)
