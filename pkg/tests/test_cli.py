from __future__ import annotations

import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from obtusity.cli import main

GOLDEN = Path(__file__).parent / "golden"

GOLDEN_RUNS = {
    "estimate_cube.json": ["estimate", "--target", "cube", "--n", "100000", "--seed", "42"],
    "estimate_32star1r.csv": ["estimate", "--target", "config:32*1r", "--n", "50000", "--seed", "7",
                              "--format", "csv"],
    "exact_cube.json": ["exact", "cube", "--digits", "50"],
    "quadrature_32star2r.json": ["quadrature", "32*2r"],
    "bodies.json": ["bodies", "--n", "20000", "--seed", "5"],
}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", sorted(GOLDEN_RUNS))
def test_golden_output_is_byte_identical(capsys, name):
    code, out, _ = run(capsys, *GOLDEN_RUNS[name])
    assert code == 0
    assert out == (GOLDEN / name).read_text()


def test_estimate_report_schema(capsys):
    _, out, _ = run(capsys, "estimate", "--target", "cube", "--n", "2000", "--seed", "1")
    report = json.loads(out)
    assert report["command"] == "estimate" and report["params"]["seed"] == 1
    (row,) = report["results"]
    assert set(row) == {"target", "method", "value", "stderr_or_bound", "reference", "z_or_dev"}
    assert row["method"] == "mc"
    assert row["reference"] == pytest.approx(0.542659281427229)


def test_seed_is_echoed_when_drawn(capsys):
    _, out, _ = run(capsys, "estimate", "--target", "disk", "--n", "10")
    seed = json.loads(out)["params"]["seed"]
    assert isinstance(seed, int) and 0 <= seed < 2**64
    _, again, _ = run(capsys, "estimate", "--target", "disk", "--n", "10", "--seed", str(seed))
    assert json.loads(again)["results"] == json.loads(out)["results"]


def test_trivial_vertex(capsys):
    _, out, _ = run(capsys, "estimate", "--target", "config:320", "--vertex", "3", "--n", "1000", "--seed", "2")
    (row,) = json.loads(out)["results"]
    assert row["value"] == 0.0 and row["target"] == "320*"


def test_aux_target_finds_reference(capsys):
    _, out, _ = run(capsys, "estimate", "--target", "aux:L+L+U", "--n", "1000", "--seed", "2")
    (row,) = json.loads(out)["results"]
    assert row["reference"] == pytest.approx(121 / 7350 + 3.141592653589793 / 2688)
    _, out, _ = run(capsys, "estimate", "--target", "aux:U+U", "--n", "10", "--seed", "2")
    assert json.loads(out)["results"][0]["reference"] is None


@pytest.mark.parametrize("argv", [
    ["estimate", "--target", "ball", "--n", "0"],
    ["estimate", "--target", "tetrahedron", "--n", "10"],
    ["estimate", "--target", "config:322v", "--n", "10"],
    ["estimate", "--target", "config:32*1r", "--vertex", "1", "--n", "10"],
    ["estimate", "--target", "aux:L+Q", "--n", "10"],
    ["quadrature", "3*33"],
    ["exact", "octahedron"],
])
def test_usage_errors_exit_nonzero(capsys, argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code != 0


def test_csv_mirrors_results(capsys):
    _, out, _ = run(capsys, "quadrature", "320", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1 and rows[0]["method"] == "quad" and rows[0]["target"] == "320"
    assert abs(float(rows[0]["z_or_dev"])) <= 1e-8


def test_exact_digits(capsys):
    _, out, _ = run(capsys, "exact", "cube", "--digits", "15")
    assert json.loads(out)["results"][0]["value"] == "0.542659281427229"


def test_bodies_rows(capsys):
    _, out, _ = run(capsys, "bodies", "--n", "1000", "--seed", "3", "--digits", "4")
    rows = {r["target"]: r for r in json.loads(out)["results"]}
    assert set(rows) == {"disk", "square", "triangle", "ball", "cube"}
    assert rows["disk"]["closed_form"] == "9/8 - 4/pi^2" and rows["disk"]["decimal"] == "0.7197"
    assert rows["triangle"]["decimal"] == "0.7481"  # truncated; 0.74819...
    assert rows["ball"]["decimal"] == "0.5285"


def test_table1_alias(capsys):
    _, a, _ = run(capsys, "bodies", "--n", "100", "--seed", "3")
    _, b, _ = run(capsys, "table1", "--n", "100", "--seed", "3")
    assert json.loads(a)["results"] == json.loads(b)["results"]


def test_timing_only_on_request(capsys):
    _, out, _ = run(capsys, "exact", "ball")
    assert "seconds" not in json.loads(out)
    _, out, _ = run(capsys, "exact", "ball", "--timing")
    assert "seconds" in json.loads(out)


def test_verify_exit_code(capsys, monkeypatch):
    from obtusity import verify
    from obtusity.verify import CheckResult

    monkeypatch.setattr(verify, "run_checks",
                        lambda *a, **k: [CheckResult("a", True, ""), CheckResult("b", False, "boom")])
    code, out, err = run(capsys, "verify", "quick", "--seed", "1")
    assert code == 1 and json.loads(out)["passed"] is False and "FAIL  b" in err
    monkeypatch.setattr(verify, "run_checks", lambda *a, **k: [CheckResult("a", True, "")])
    code, out, _ = run(capsys, "verify", "quick", "--seed", "1")
    assert code == 0 and json.loads(out)["passed"] is True


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "obtusity", "exact", "ball", "--digits", "4",
                           "--format", "csv"], capture_output=True, text=True, check=True)
    assert "0.5285" in proc.stdout
