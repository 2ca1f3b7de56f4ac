"""End-to-end runs of ``python3 -m cauchykit`` in a subprocess."""

import csv
import io
import json
import subprocess
import sys

import pytest

from cauchykit import crofton, curvature

PARABOLA = '{"parametric": {"x": "t", "y": "t^2", "t0": -1, "t1": 1}}'
SEGMENT = '{"polyline": [[0, 0], [1, 0]]}'
CIRCLE = '{"parametric": {"x": "cos(t)", "y": "sin(t)", "t0": 0, "t1": 6.283185307179586}, "segments": 256}'

# (name, argv, expected exit code)
FIXTURES = [
    ("length-csv", ["--format", "csv", "length", SEGMENT, "--n", "4..64", "--offsets", "4"], 0),
    ("length-random", ["--seed", "5", "length", CIRCLE, "--n", "8", "--random", "500", "--format", "json"], 0),
    ("curvature-range", ["curvature", PARABOLA, "--range=-1:1:5", "--format", "csv"], 0),
    ("curvature-line", ["curvature", '{"parametric": {"x": "t", "y": "2*t", "t0": 0, "t1": 1}}', "--t", "0.5"], 0),
    ("delta", ["delta", "cos(m)", "--alpha", "1e-6", "--eps", "1e-2"], 0),
    ("probe-sum", ["probe", "--sum", "sin(k*x)/k", "--ladder", "100,1000", "--format", "csv"], 0),
    ("probe-micro", ["probe", "1/t", "--micro", "eps", "eps^2", "--format", "json"], 0),
    ("bad-spec", ["length", '{"polyline": [[0, 0]]}'], 2),
    ("window-too-small", ["--order", "32:3", "curvature", PARABOLA, "--t", "0"], 2),
    ("numeric-failure", ["delta", "log(m)", "--a", "0.005", "--alpha", "1e-3", "--eps", "1e-2"], 1),
]


def run(args, **kw):
    return subprocess.run([sys.executable, "-m", "cauchykit", *args], capture_output=True, **kw)


@pytest.fixture(scope="module")
def results():
    return {name: run(args) for name, args, _ in FIXTURES}


@pytest.mark.parametrize("name, args, code", FIXTURES)
def test_exit_codes(results, name, args, code):
    r = results[name]
    assert r.returncode == code, r.stderr.decode()
    if code:
        assert r.stdout == b"" and r.stderr.startswith(b"cauchykit")
    else:
        assert r.stdout


@pytest.mark.parametrize("name, args, code", FIXTURES)
def test_repeated_runs_are_byte_identical(results, name, args, code):
    again = run(args)
    assert (again.returncode, again.stdout, again.stderr) == (
        results[name].returncode, results[name].stdout, results[name].stderr)


def _csv(result):
    return list(csv.reader(io.StringIO(result.stdout.decode())))


def test_length_csv_columns(results):
    rows = _csv(results["length-csv"])
    assert tuple(rows[0]) == crofton.CSV_COLUMNS
    assert len(rows) == 1 + 5 * 4
    assert all(float(r[5]) <= float(r[6]) for r in rows[1:])


def test_curvature_csv_columns(results):
    rows = _csv(results["curvature-range"])
    assert tuple(rows[0]) == curvature.CSV_COLUMNS
    vertex = rows[3]
    assert float(vertex[0]) == 0.0 and float(vertex[4]) == 0.5 and float(vertex[6]) == 0.5


def test_flagged_row_for_straight_line(results):
    assert b"InfiniteRadius" in results["curvature-line"].stdout


def test_random_row_in_json(results):
    doc = json.loads(results["length-random"].stdout)
    assert doc["rows"][-1]["offset"] == "random"
    assert doc["rows"][-1]["n"] == 500


def test_seed_changes_random_row():
    a = run(["--seed", "1", "length", SEGMENT, "--n", "4", "--random", "100", "--format", "csv"])
    b = run(["--seed", "2", "length", SEGMENT, "--n", "4", "--random", "100", "--format", "csv"])
    assert a.stdout.splitlines()[:2] == b.stdout.splitlines()[:2]
    assert a.stdout != b.stdout


def test_stdin_and_out_file(tmp_path):
    out = tmp_path / "o.csv"
    r = run(["length", "-", "--n", "4", "--format", "csv", "--out", str(out)], input=SEGMENT.encode())
    assert r.returncode == 0 and r.stdout == b""
    assert out.read_text().startswith(",".join(crofton.CSV_COLUMNS))


def test_spec_error_names_json_path():
    r = run(["curvature", '{"parametric": {"x": "t", "y": "t^2", "t0": "a", "t1": 1}}', "--t", "0"])
    assert r.returncode == 2 and b"$.parametric.t0" in r.stderr
