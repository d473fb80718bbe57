import csv
import io
import json
import math
from importlib import resources

import jsonschema
import pytest

from berezin_lab import cli
from berezin_lab.seminorm import Check

SCHEMA = json.loads(resources.files("berezin_lab").joinpath("schema/report.schema.json").read_text())


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--format", "json")
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return code, doc, out


def usage_exit(*argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(list(argv))
    return exc.value.code


def test_classify_unbounded(capsys):
    code, doc, _ = run_json(capsys, "classify", "--n", "1", "--alpha", "-0.5", "--case", "complex")
    assert code == 0
    assert doc["result"]["regime"] == "unbounded"
    assert doc["result"]["constant_or_bound"] is None


def test_classify_sharp_real(capsys):
    _, doc, _ = run_json(capsys, "classify", "--n", "1", "--alpha", "0", "--case", "real")
    assert doc["result"]["regime"] == "sharp"
    assert doc["result"]["constant_or_bound"] == pytest.approx(16 / (3 * math.pi), rel=1e-15)


def test_classify_strict_text(capsys):
    code, out = run(capsys, "classify", "--n", "1", "--alpha", "10", "--format", "text")
    assert code == 0
    header, row = out.splitlines()
    assert "turning_index" in header and "bounded-strict" in row and row.split()[-1] == "2"


def test_constant(capsys):
    _, doc, _ = run_json(capsys, "constant", "--n", "1", "--alpha", "1")
    assert doc["result"]["kind"] == "sharp"
    assert doc["result"]["value"] == pytest.approx(16 / 15, rel=1e-15)


def test_scan_csv(capsys):
    code, out = run(capsys, "scan", "--n", "1", "--alpha", "1", "--r", "0:0.99:0.01", "--format", "csv")
    assert code == 0
    assert out.startswith("r,bound_value,oracle_value,oracle_stderr,argmax\r\n")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 100
    assert [r["argmax"] for r in rows].index("1") == 0
    assert rows[-1]["r"] == "0.98999999999999999"


def test_scan_interior_argmax(capsys):
    _, doc, _ = run_json(capsys, "scan", "--n", "1", "--alpha", "10")
    assert 0 < doc["summary"]["argmax_r"] < 1
    assert doc["summary"]["max_value"] < doc["summary"]["reference"]
    assert sum(r["argmax"] for r in doc["rows"]) == 1


def test_scan_oracle_negative_alpha(capsys):
    _, doc, _ = run_json(capsys, "scan", "--n", "1", "--alpha", "-0.5", "--oracle",
                         "--r", "0,0.5,0.9,0.99", "--samples", "100000")
    vals = [r["oracle_value"] for r in doc["rows"]]
    errs = [r["oracle_stderr"] for r in doc["rows"]]
    assert all(b - a > 4 * math.hypot(ea, eb) for a, b, ea, eb in zip(vals, vals[1:], errs, errs[1:]))


def test_verify_passes(capsys):
    code, doc, _ = run_json(capsys, "verify", "--suite", "parseval")
    assert code == 0 and doc["passed"]
    assert all(set(c) == set(cli.CHECK_COLUMNS) for c in doc["checks"])


def test_verify_sharp_small(capsys):
    code, doc, _ = run_json(capsys, "verify", "--suite", "sharp", "--n", "1", "--alpha", "0",
                            "--samples", "100000", "--seed", "7")
    assert code == 0
    assert doc["checks"][0]["sigma_distance"] <= 4


def test_verify_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cli, "run_suite", lambda *a, **k: [Check("forced", 1.0, 2.0, None, 0.5, False)])
    code, doc, _ = run_json(capsys, "verify", "--suite", "parseval")
    assert code == 1 and doc["passed"] is False


def test_transform(capsys):
    code, doc, _ = run_json(capsys, "transform", "--n", "2", "--alpha", "0", "--symbol", "constant",
                            "--z", "0.3+0.1j,0", "--samples", "50000")
    assert code == 0
    res = doc["result"]
    assert abs(res["transform_re"] - 1) <= 4 * res["transform_stderr"]


def test_json_is_deterministic_apart_from_timestamp(capsys):
    argv = ("verify", "--suite", "moments", "--samples", "20000", "--seed", "3")
    _, first, _ = run_json(capsys, *argv)
    _, second, _ = run_json(capsys, *argv)
    first.pop("timestamp"), second.pop("timestamp")
    assert json.dumps(first) == json.dumps(second)


def test_out_file(tmp_path, capsys):
    path = tmp_path / "scan.csv"
    code, out = run(capsys, "scan", "--r", "0,0.5", "--format", "csv", "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_bytes().count(b"\r\n") == 3


def test_floats_round_trip(capsys):
    _, doc, out = run_json(capsys, "constant", "--n", "3", "--alpha", "0.3")
    assert float(repr(doc["result"]["value"])) == doc["result"]["value"]
    _, text = run(capsys, "constant", "--n", "3", "--alpha", "0.3", "--format", "csv")
    value = text.splitlines()[1].split(",")[-1]
    assert len(value.replace(".", "").lstrip("0")) == 17
    assert float(value) == doc["result"]["value"]


@pytest.mark.parametrize("argv", [
    ("verify", "--suite", "sharp", "--n", "0"),
    ("classify", "--alpha", "-1"),
    ("classify", "--alpha", "nan"),
    ("scan", "--samples", "10"),
    ("scan", "--r", "0:1.2:0.1"),
    ("scan", "--r", "0.5:0.1:0.1"),
    ("scan", "--r", "abc"),
    ("scan", "--alpha", "-0.5", "--case", "real", "--oracle"),
    ("verify", "--suite", "sharp", "--alpha", "9"),
    ("verify", "--suite", "nonsense"),
    ("transform", "--n", "2", "--z", "0.9,0.9"),
    ("frobnicate",),
])
def test_usage_errors_exit_2(argv):
    assert usage_exit(*argv) == 2


def test_module_entry_point_exit_codes():
    import subprocess
    import sys

    ok = subprocess.run([sys.executable, "-m", "berezin_lab.cli", "classify", "--format", "text"],
                        capture_output=True, text=True)
    assert ok.returncode == 0 and "sharp" in ok.stdout
    bad = subprocess.run([sys.executable, "-m", "berezin_lab.cli", "classify", "--n", "0"],
                         capture_output=True, text=True)
    assert bad.returncode == 2 and "--n must be >= 1" in bad.stderr
