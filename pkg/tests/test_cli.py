import csv
import json
import math
import os
import subprocess
import sys

import pytest

from hilbertop import cli

BASE = ["--lambda", "1", "--mu", "0", "--nu", "0", "--alpha", "0", "--beta", "0"]
CLASSIFY_KEYS = {"status", "theorem", "sharp_norm", "advisory", "inputs"}
ADVISORY_KEYS = {"adjoint_condition", "disagrees", "equality_residual", "reason"}
INPUT_KEYS = {"lambda", "mu", "nu", "p", "q", "alpha", "beta", "continuous"}
NORM_KEYS = {"method", "inputs", "value", "lower", "upper", "lower_method", "upper_method", "certified", "parameters"}

# default bracket for classical p = 2: spectral section norm at N = 2048 below,
# the exact norm pi above
DEFAULT_BRACKET_LOWER = 2.33044616017446


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_bounded(capsys):
    code, out, _ = run(capsys, "classify", "--p", "2", "--q", "2", *BASE)
    doc = json.loads(out)
    assert code == 0
    assert set(doc) == CLASSIFY_KEYS
    assert set(doc["advisory"]) == ADVISORY_KEYS and set(doc["inputs"]) == INPUT_KEYS
    assert doc["status"] == "bounded" and doc["theorem"] == "discrete-lp-lq"
    assert doc["sharp_norm"] == pytest.approx(math.pi, rel=1e-15)


def test_classify_continuous_unbounded(capsys):
    code, out, _ = run(capsys, "classify", "--p", "2", "--q", "2", *BASE, "--continuous", "--lambda", "2")
    doc = json.loads(out)
    assert code == 1 and doc["status"] == "unbounded" and doc["sharp_norm"] is None
    assert set(doc) == CLASSIFY_KEYS and set(doc["advisory"]) == ADVISORY_KEYS


def test_classify_inapplicable(capsys):
    code, out, _ = run(capsys, "classify", "--p", "2", "--q", "1", *BASE)
    doc = json.loads(out)
    assert code == 2 and doc["status"] == "inapplicable" and doc["advisory"]["reason"]


def test_classify_infinite_exponents(capsys):
    code, out, _ = run(capsys, "classify", "--p", "inf", "--q", "inf", "--lambda", "2")
    doc = json.loads(out)
    assert code == 0 and doc["inputs"]["p"] == "inf" and doc["theorem"] == "discrete-linf-linf"


def test_schema_types_stable_across_verdicts(capsys):
    docs = []
    for argv in (["--p", "2", "--q", "2", "--lambda", "1"], ["--p", "1", "--q", "1", "--lambda", "1"],
                 ["--p", "3", "--q", "2", "--lambda", "1"], ["--p", "2", "--q", "2", "--lambda", "1", "--continuous"]):
        _, out, _ = run(capsys, "classify", *argv)
        docs.append(json.loads(out))
    for d in docs:
        assert set(d) == CLASSIFY_KEYS and set(d["advisory"]) == ADVISORY_KEYS
        assert isinstance(d["inputs"]["p"], str) and isinstance(d["inputs"]["lambda"], float)


def test_json_numbers_round_trip(capsys):
    _, out, _ = run(capsys, "classify", "--p", "3", "--q", "3", "--lambda", "1")
    doc = json.loads(out)
    assert doc["sharp_norm"] == pytest.approx(math.pi / math.sin(math.pi / 3), rel=1e-14)
    assert float(doc["inputs"]["p"]) == 3.0
    from hilbertop.classifier import sharp_norm
    from hilbertop.operator import Problem
    assert doc["sharp_norm"] == sharp_norm(Problem.of(1, 0, 0, 3, 3))


@pytest.mark.parametrize("argv", [
    ["classify", "--p", "two", "--q", "2", "--lambda", "1"],
    ["classify", "--p", "0.5", "--q", "2", "--lambda", "1"],
    ["classify", "--q", "2", "--lambda", "1"],
    ["classify", "--p", "2", "--q", "2", "--lambda", "nan"],
    ["bogus"],
    [],
    ["norm", "--p", "2", "--q", "2", "--lambda", "1", "--method", "magic"],
    ["norm", "--p", "2", "--q", "2", "--lambda", "1", "--trunc", "0"],
])
def test_bad_flags_exit_64(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 64 and out == "" and err


def test_norm_sharp(capsys):
    code, out, _ = run(capsys, "norm", "--p", "2", "--q", "2", "--lambda", "1", "--method", "sharp")
    doc = json.loads(out)
    assert code == 0 and set(doc) == NORM_KEYS
    assert doc["value"] == pytest.approx(math.pi) and doc["certified"] == {"lower": True, "upper": True}


def test_norm_sharp_unavailable_cites_condition(capsys):
    code, out, err = run(capsys, "norm", "--p", "2", "--q", "2", "--lambda", "3", "--mu", "1", "--beta", "2",
                         "--method", "sharp")
    assert code == 2 and out == ""
    assert "alpha + 1 >= p*mu" in err


def test_norm_spectral_trunc1(capsys):
    code, out, _ = run(capsys, "norm", "--p", "2", "--q", "2", "--lambda", "1", "--method", "spectral", "--trunc", "1")
    assert code == 0 and json.loads(out)["value"] == 0.5


def test_norm_spectral_wrong_shape(capsys):
    code, _, err = run(capsys, "norm", "--p", "3", "--q", "3", "--lambda", "1", "--method", "spectral")
    assert code == 2 and "p = q = 2" in err


def test_norm_schur_and_extremal(capsys):
    _, out, _ = run(capsys, "norm", "--p", "2", "--q", "2", "--lambda", "2", "--method", "schur", "--grid", "16")
    doc = json.loads(out)
    assert doc["upper"] is not None and doc["lower"] is None
    _, out, _ = run(capsys, "norm", "--p", "2", "--q", "2", "--lambda", "1", "--method", "extremal",
                    "--trunc", "500", "--eps", "0.05")
    doc = json.loads(out)
    assert 0 < doc["value"] < math.pi and doc["lower_method"].startswith("extremal")


def test_norm_schur_unbounded(capsys):
    code, _, err = run(capsys, "norm", "--p", "1", "--q", "1", "--lambda", "1", "--method", "schur")
    assert code == 2 and "unbounded" in err


def test_norm_bracket_default_schedule_gap(capsys):
    code, out, _ = run(capsys, "norm", "--p", "2", "--q", "2", "--lambda", "1", "--method", "bracket")
    doc = json.loads(out)
    assert code == 0
    assert doc["upper"] == pytest.approx(math.pi, rel=1e-15) and doc["upper_method"] == "sharp"
    assert doc["lower"] == pytest.approx(DEFAULT_BRACKET_LOWER, rel=1e-9)
    assert doc["lower"] <= math.pi <= doc["upper"]
    # the achieved gap at N = 2048 is about 0.81, set by the finite section
    assert math.pi - doc["lower"] == pytest.approx(0.8111465, abs=1e-6)


def test_norm_bracket_continuous(capsys):
    code, out, _ = run(capsys, "norm", "--p", "2", "--q", "2", "--lambda", "1", "--continuous",
                       "--method", "bracket", "--grid", "16")
    doc = json.loads(out)
    assert code == 0 and doc["lower"] < math.pi and doc["upper"] == pytest.approx(math.pi)


def test_norm_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("trunc = 1\niters = 5\n")
    code, out, _ = run(capsys, "norm", "--p", "2", "--q", "2", "--lambda", "1", "--method", "spectral",
                       "--config", str(cfg))
    doc = json.loads(out)
    assert code == 0 and doc["value"] == 0.5 and doc["parameters"]["trunc"] == 1
    # flags beat the file
    code, out, _ = run(capsys, "norm", "--p", "2", "--q", "2", "--lambda", "1", "--method", "spectral",
                       "--config", str(cfg), "--trunc", "2")
    assert json.loads(out)["parameters"]["trunc"] == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    code, _, _ = run(capsys, "norm", "--p", "2", "--q", "2", "--lambda", "1", "--config", str(bad))
    assert code == 64


def _sweep(capsys, tmp_path, *argv):
    path = tmp_path / "out.csv"
    code, _, _ = run(capsys, "sweep", *argv, "--out", str(path))
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return code, rows


def test_sweep_lambda(capsys, tmp_path):
    code, rows = _sweep(capsys, tmp_path, "--vary", "lambda", "--start", "0.5", "--stop", "3", "--step", "0.25",
                        "--p", "2", "--q", "2")
    assert code == 0
    assert rows[0] == ["value", "status", "sharp_norm", "schur_best", "lower"]
    body = rows[1:]
    assert len(body) == 11
    for value, status, sharp, schur, lower in body:
        assert (status == "bounded") == (float(value) >= 1.0)
        assert schur == "" and lower == ""
    assert body[2][:2] == ["1.0", "bounded"] and float(body[2][2]) == pytest.approx(math.pi, rel=1e-14)


def test_sweep_beta_flip_point(capsys, tmp_path):
    code, rows = _sweep(capsys, tmp_path, "--vary", "beta", "--start", "-0.5", "--stop", "3.5", "--step", "0.5",
                        "--p", "2", "--q", "2", "--lambda", "1")
    body = rows[1:]
    assert code == 0 and len(body) == 9
    # lam >= 1 + beta/2 holds only for beta <= 0, so the first unbounded value is 0.5
    statuses = {float(r[0]): r[1] for r in body}
    assert statuses[0.0] == "bounded" and statuses[0.5] == "unbounded"
    assert all(s == "unbounded" for v, s in statuses.items() if v >= 0.5)


def test_sweep_single_point_and_columns(capsys, tmp_path):
    code, rows = _sweep(capsys, tmp_path, "--vary", "lambda", "--start", "1", "--stop", "1", "--step", "0.5",
                        "--p", "2", "--q", "2", "--schur", "--lower", "--trunc", "200", "--grid", "16")
    assert code == 0 and len(rows) == 2
    value, status, sharp, schur, lower = rows[1]
    assert float(lower) < float(sharp) <= float(schur) + 1e-12


def test_sweep_floats_round_trip(capsys, tmp_path):
    _, rows = _sweep(capsys, tmp_path, "--vary", "p", "--start", "1.1", "--stop", "1.3", "--step", "0.1",
                     "--q", "3", "--lambda", "1")
    assert [float(r[0]) for r in rows[1:]] == [1.1 + i * 0.1 for i in range(3)]


def test_sweep_unwritable(capsys, tmp_path):
    code, _, err = run(capsys, "sweep", "--vary", "lambda", "--start", "1", "--stop", "2", "--step", "0.5",
                       "--p", "2", "--q", "2", "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 73 and err


@pytest.mark.parametrize("extra", [["--step", "0"], ["--step", "-1"]])
def test_sweep_bad_spec(capsys, tmp_path, extra):
    code, _, _ = run(capsys, "sweep", "--vary", "lambda", "--start", "1", "--stop", "2", *extra,
                     "--p", "2", "--q", "2", "--out", str(tmp_path / "x.csv"))
    assert code == 64


def test_sweep_start_after_stop(capsys, tmp_path):
    code, _, _ = run(capsys, "sweep", "--vary", "lambda", "--start", "3", "--stop", "2", "--step", "0.5",
                     "--p", "2", "--q", "2", "--out", str(tmp_path / "x.csv"))
    assert code == 64


def test_verify_list_and_only(capsys):
    code, out, _ = run(capsys, "verify", "--list")
    ids = out.split()
    assert code == 0 and len(ids) == 12 and "power-integral" in ids
    code, out, _ = run(capsys, "verify", "--only", "power-integral")
    assert code == 0 and out.startswith("[PASS] power-integral") and "1/1 passed" in out
    code, _, _ = run(capsys, "verify", "--only", "nope")
    assert code == 64


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "hilbertop", "classify", "--p", "2", "--q", "2", "--lambda", "1"],
                         capture_output=True, text=True, env={**os.environ})
    assert res.returncode == 0 and json.loads(res.stdout)["status"] == "bounded"
