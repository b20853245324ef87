import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from shellvisc import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def strip_time(text):
    doc = json.loads(text)
    doc.pop("timestamp")
    return doc


def test_verify_geometry_sphere(capsys):
    code, out, _ = run(capsys, "verify", "--suites", "geometry", "--a", "1", "--samples", "100", "--seed", "7")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] and doc["tool"] == "shellvisc" and doc["schema_version"] == 1
    assert doc["config"]["seed"] == 7 and doc["config"]["a_values"] == [1.0]
    frame = [c for c in doc["suites"][0]["checks"] if c["id"] == "frame-orthonormality"][0]
    assert frame["max"] < 1e-12 and frame["n"] == 100
    assert all(c["tag"] for c in doc["suites"][0]["checks"])


def test_verify_identities(capsys):
    code, out, _ = run(capsys, "verify", "--suites", "identities", "--a", "2", "--samples", "200")
    assert code == 0
    helpful = [c for c in json.loads(out)["suites"][0]["checks"] if c["id"].startswith("helpful-") and "max" in c]
    assert helpful and max(c["max"] for c in helpful) < 1e-6


def test_verify_limits_rows(capsys):
    code, out, _ = run(capsys, "verify", "--suites", "limits", "--a", "2", "--samples", "50")
    assert code == 0
    rows = [c for c in json.loads(out)["suites"][0]["checks"] if c["id"].startswith("replay-") and "max" in c]
    assert len(rows) == 6 and all(c["max"] < 1e-4 for c in rows)


def test_failing_check_exits_1(capsys):
    code, out, _ = run(capsys, "verify", "--suites", "geometry", "--a", "2", "--samples", "20", "--tol.geometry", "1e-300")
    assert code == 1
    assert not json.loads(out)["passed"]


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--suites", "bogus"],
        ["verify", "--suites", ""],
        ["verify", "--grid", "12"],
        ["verify", "--samples", "0"],
        ["verify", "--a", "-2"],
        ["verify", "--seed", "-1"],
        ["verify", "--format", "xml"],
        ["verify", "--config", "/nonexistent/run.ini"],
        ["eval", "--op", "o9", "--field", "rotation"],
        ["eval", "--op", "o1", "--field", "nope"],
        ["eval", "--op", "o1", "--field", "rotation", "--a", "1", "--a", "2"],
        ["sweep", "--target", "weingarten", "--steps", "1e-3,5e-4"],
        ["sweep", "--target", "nope"],
        ["sweep", "--target", "replay:nope"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    try:
        code = cli.main(argv)
    except SystemExit as exc:  # argparse reports usage errors by exiting
        code = exc.code
    assert code == 2


def test_config_file_and_flag_precedence(tmp_path, capsys):
    ini = tmp_path / "run.ini"
    ini.write_text("[run]\na = 2\nsamples = 30\nseed = 11\nformat = json\n\n[tolerances]\ngeometry = 1e-5\n")
    code, out, _ = run(capsys, "verify", "--suites", "geometry", "--config", str(ini), "--seed", "3")
    assert code == 0
    cfg = json.loads(out)["config"]
    assert cfg["seed"] == 3 and cfg["samples"] == 30 and cfg["a_values"] == [2.0]
    assert cfg["tolerances"]["geometry"] == 1e-5


@pytest.mark.parametrize("text", ["[run]\nbogus = 1\n", "[extra]\nx = 1\n", "[run]\nsamples = many\n", "not ini at all"])
def test_bad_config_exits_2(tmp_path, capsys, text):
    ini = tmp_path / "bad.ini"
    ini.write_text(text)
    code, _, err = run(capsys, "verify", "--suites", "geometry", "--config", str(ini))
    assert code == 2 and "error" in err


def test_reports_are_deterministic(capsys):
    argv = ["verify", "--suites", "geometry,boundary", "--a", "0.5", "--a", "2", "--samples", "15", "--seed", "42"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert strip_time(first) == strip_time(second)
    assert first.replace(json.loads(first)["timestamp"], "") == second.replace(json.loads(second)["timestamp"], "")


def test_text_and_csv_reports(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--suites", "geometry", "--a", "2", "--samples", "10", "--format", "text")
    lines = out.splitlines()
    assert code == 0 and lines[0].split() == ["suite", "check", "a", "value", "bound", "status"]
    col = lines[0].index("status")
    assert all(line[col:].strip() in ("pass", "FAIL") for line in lines[1:] if line.startswith("geometry "))
    assert lines[-1] == "overall: pass"
    target = tmp_path / "r.csv"
    assert cli.main(["verify", "--suites", "geometry", "--a", "2", "--samples", "10", "--format", "csv", "--out", str(target)]) == 0
    rows = list(csv.reader(target.open()))
    assert rows[0] == ["suite", "check", "a", "value", "bound", "status"] and len(rows) > 5


def eval_rows(capsys, *argv):
    code, out, _ = run(capsys, "eval", "--format", "csv", *argv)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["phi", "theta", "out1", "out2"]
    return np.array(rows[1:], float)


def test_eval_examples(capsys):
    r = eval_rows(capsys, "--op", "o3", "--field", "rotation", "--a", "2", "--grid", "32x64")
    assert r.shape == (32 * 64, 4) and np.max(np.abs(r[:, 2:])) < 1e-6
    assert r[:, 0].min() > 0.01 and r[:, 0].max() < np.pi - 0.01
    r = eval_rows(capsys, "--op", "hodge", "--field", "rotation", "--a", "1", "--grid", "8x8")
    assert np.max(np.abs(r[:, 2])) < 1e-6 and np.max(np.abs(r[:, 3] - 2 * np.sin(r[:, 0]))) < 1e-6
    o1 = eval_rows(capsys, "--op", "o1", "--field", "rotation", "--a", "1", "--grid", "8x8")
    dl = eval_rows(capsys, "--op", "deflap", "--field", "rotation", "--a", "1", "--grid", "8x8")
    assert np.max(np.abs(o1 - dl)) < 1e-10


def test_eval_json(capsys):
    code, out, _ = run(capsys, "eval", "--op", "bochner", "--field", "mixed:m=1", "--a", "2", "--grid", "4x4")
    doc = json.loads(out)
    assert code == 0 and doc["columns"] == ["phi", "theta", "out1", "out2"] and len(doc["rows"]) == 16


def test_sweeps(capsys):
    code, out, _ = run(capsys, "sweep", "--target", "weingarten", "--steps", "1e-3,5e-4,2.5e-4")
    res = json.loads(out)["results"][0]
    assert code == 0 and abs(res["slope"] - 2) < 0.2 and "intercept" in res
    _, out, _ = run(capsys, "sweep", "--target", "audit:scaling-navier-tangential", "--a", "2")
    assert json.loads(out)["results"][0]["slope"] >= 1.8
    _, out, _ = run(capsys, "sweep", "--target", "audit-unsolved:scaling-navier-tangential", "--a", "2")
    assert abs(json.loads(out)["results"][0]["slope"]) < 0.2
    _, out, _ = run(capsys, "sweep", "--target", "replay:normal-hodge", "--a", "2", "--format", "text")
    assert out.splitlines()[0].split() == ["target", "a", "slope", "intercept", "errors"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "shellvisc", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("shellvisc ")
