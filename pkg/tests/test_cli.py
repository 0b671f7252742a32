"""Command-line behavior: payload shape, exit codes, determinism."""

import json
import subprocess
import sys

import pytest

from reecurve.cli import main
from reecurve.identities import CheckResult

D_ORDERS_S1 = ["0", "1", "3", "6", "9", "27", "30", "54", "81", "84", "108", "162", "243", "729"]


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_params_json(capsys):
    code, doc = run_json(capsys, ["params", "--s", "1"])
    assert code == 0
    assert doc["schema"] == 1
    assert doc["q"] == "27" and doc["genus"] == "3627" and doc["m"] == "1036"


def test_params_s2(capsys):
    code, doc = run_json(capsys, ["params", "--s", "2"])
    assert code == 0 and doc["m"] == "66124"


def test_s_zero_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["params", "--s", "0"])
    assert exc.value.code == 2


def test_symbolic_backend_rejected_above_s1():
    with pytest.raises(SystemExit) as exc:
        main(["orders", "--s", "2", "--backend", "symbolic"])
    assert exc.value.code == 2


def test_series_backend_requires_seed():
    with pytest.raises(SystemExit) as exc:
        main(["orders", "--s", "1", "--backend", "series"])
    assert exc.value.code == 2


def test_unknown_identity_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--identity", "ZZZ"])
    assert exc.value.code == 2


def test_verify_single_identity(capsys):
    code, doc = run_json(capsys, ["verify", "--s", "1", "--identity", "A9"])
    assert code == 0
    assert len(doc["results"]) == 14
    assert all(r["ok"] for r in doc["results"])
    assert doc["summary"]["failed"] == "0"


def test_verify_jobs_pool_matches_serial(tmp_path, capsys):
    argv = ["verify", "--s", "1", "--identity", "A9", "--identity", "kq0-1"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(argv + ["--jobs", "1", "--out", str(a)]) == 0
    assert main(argv + ["--jobs", "4", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_failure_writes_witness(tmp_path, capsys, monkeypatch):
    bad = CheckResult(
        identity="A9",
        instance="f=x",
        backend="symbolic",
        ok=False,
        points=0,
        witness="forced failure",
        skipped=False,
    )
    monkeypatch.setattr("reecurve.cli.verify_catalog", lambda *a, **k: [bad])
    out = tmp_path / "report.json"
    code = main(["verify", "--s", "1", "--identity", "A9", "--out", str(out)])
    assert code == 1
    witness = tmp_path / "report.json.witness.json"
    assert witness.exists()
    doc = json.loads(witness.read_text())
    assert doc["failures"][0]["witness"] == "forced failure"


def test_orders_symbolic_d(capsys):
    code, doc = run_json(capsys, ["orders", "--s", "1", "--series", "D"])
    assert code == 0
    assert doc["orders"] == D_ORDERS_S1
    assert doc["labels"][-1] == "q2"


def test_orders_series_backend(capsys):
    code, doc = run_json(
        capsys,
        ["orders", "--s", "1", "--series", "E", "--backend", "series",
         "--seed", "1", "--trials", "2"],
    )
    assert code == 0
    assert doc["orders"] == ["0", "1", "9", "27", "54", "243", "729"]
    assert doc["config"]["backend"] == "series"


def test_orders_csv(capsys):
    code = main(["orders", "--s", "1", "--series", "E", "--format", "csv"])
    out = capsys.readouterr().out
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "position,order,label"
    assert len(lines) == 8
    assert lines[-1] == "6,729,q2"


def test_orders_deterministic_bytes(tmp_path):
    # identical config must give byte-identical reports
    argv = ["orders", "--s", "1", "--series", "D", "--backend", "series",
            "--seed", "7", "--trials", "2"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_support_writes_tables(tmp_path, capsys):
    code = main(["support", "--s", "1", "--out", str(tmp_path)])
    out, err = capsys.readouterr().out, capsys.readouterr().err
    assert code == 0
    doc = json.loads(out)
    assert doc["files"]["appendix_plain.csv"]["rows"] == "36"
    assert doc["files"]["appendix_mixed.csv"]["rows"] == "56"
    assert any("collides" in w for w in doc["warnings"])
    golden = __file__.rsplit("/", 1)[0] + "/golden"
    for name in ("appendix_plain.csv", "appendix_mixed.csv"):
        emitted = (tmp_path / name).read_text()
        with open(f"{golden}/{name}") as fh:
            assert emitted == fh.read()


def test_weierstrass_origin(capsys):
    code, doc = run_json(capsys, ["weierstrass", "--s", "1", "--series", "D"])
    assert code == 0
    assert doc["weight"] == "567"
    assert doc["is_weierstrass"] is True
    assert doc["matches_rational_profile"] is True
    assert doc["jorders"][-1] == "1036"
    assert doc["audit"]["degree"] == "11160828"


def test_weierstrass_generic(capsys):
    code, doc = run_json(
        capsys, ["weierstrass", "--s", "1", "--point", "generic", "--seed", "5"]
    )
    assert code == 0
    assert doc["weight"] == "0"
    assert doc["is_weierstrass"] is False
    assert doc["jorders"] == doc["epsilons"]


def test_weierstrass_deterministic(tmp_path):
    argv = ["weierstrass", "--s", "1", "--point", "rational", "--seed", "3"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "reecurve", "params", "--s", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["q0"] == "3"
