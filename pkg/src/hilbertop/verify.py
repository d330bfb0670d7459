"""Acceptance checks: each one recomputes a known constant or property and
reports pass/fail together with the numbers it measured.
"""

import contextlib
import csv
import io
import json
import math
import os
import tempfile
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .classifier import Status, classify, classify_discrete, continuous_condition_systems
from .continuous import continuous_lower_bound, verify_power_integrals
from .kernel import sum_S_partial, sum_lower_bound, sum_upper_bound
from .normest import extremal_lower_bound, optimize_schur, sharp_schur_params, schur_upper_bound, spectral_norm_l2
from .operator import Problem, assemble_l2_matrix, duality_gap
from .seqspace import TruncatedSequence

__all__ = ["CriterionResult", "CRITERIA", "run", "criterion_ids"]

# extremal quotient for classical p = 2, eps = 1e-3, N = 1e5, from an
# independent FFT-convolution evaluation of the same finite sums
EXTREMAL_ORACLE_1E5 = 2.57578405406025
EXTREMAL_ORACLE_GAP = math.pi - EXTREMAL_ORACLE_1E5
# first and last witness values for classical p = q = 1 (digamma closed form)
WITNESS_ORACLE = (2.7637247692262124, 9.501878458392829)

CLASSICAL_P = (4.0 / 3.0, 2.0, 3.0, 4.0)


@dataclass
class CriterionResult:
    ident: str
    title: str
    passed: bool
    measured: Dict[str, object] = field(default_factory=dict)
    seconds: float = 0.0
    budget: float = math.inf

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        vals = ", ".join(f"{k}={_fmt(v)}" for k, v in self.measured.items())
        return f"[{flag}] {self.ident}: {self.title} ({self.seconds:.3f}s / {self.budget:g}s) {vals}"


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def _classical(p, q=None, continuous=False, **kw):
    return Problem.of(kw.pop("lam", 1.0), 0.0, 0.0, p, p if q is None else q, continuous=continuous, **kw)


def _csc(p):
    return math.pi / math.sin(math.pi / p)


def check_sharp_norm():
    worst = 0.0
    ok = True
    for p in CLASSICAL_P:
        v = classify_discrete(_classical(p))
        ok &= v.status is Status.BOUNDED and v.sharp_norm is not None
        if v.sharp_norm is not None:
            worst = max(worst, abs(v.sharp_norm / _csc(p) - 1.0))
    return ok and worst <= 1e-12, {"max_rel_err": worst}


def check_schur_optimum():
    opt_err = exact_err = slowest = 0.0
    for p in CLASSICAL_P:
        prob = _classical(p)
        t0 = time.perf_counter()
        best = optimize_schur(prob, 64).best
        slowest = max(slowest, time.perf_counter() - t0)
        opt_err = max(opt_err, abs(best - _csc(p)))
        exact = schur_upper_bound(prob, sharp_schur_params(prob))
        exact_err = max(exact_err, abs(exact / _csc(p) - 1.0))
    ok = opt_err <= 1e-6 and exact_err <= 1e-12 and slowest < 5.0
    return ok, {"max_abs_err_search": opt_err, "max_rel_err_closed": exact_err, "slowest_s": slowest}


def check_extremal_convergence():
    prob = _classical(2.0)
    vals = [extremal_lower_bound(prob, eps, 10**5) for eps in (1e-1, 1e-2, 1e-3)]
    increasing = all(b > a for a, b in zip(vals, vals[1:]))
    below = all(v <= math.pi + 1e-9 for v in vals)
    gap = math.pi - vals[-1]
    within = gap <= EXTREMAL_ORACLE_GAP * (1.0 + 1e-9)
    return increasing and below and within, {"values": vals, "gap_to_pi": gap, "oracle_gap": EXTREMAL_ORACLE_GAP}


def check_finite_section():
    prob = _classical(2.0)
    sizes = (64, 256, 1024)
    vals = [spectral_norm_l2(prob, N) for N in sizes]
    dense_err = 0.0
    for N, v in zip(sizes, vals):
        if N <= 256:
            ref = float(np.linalg.svd(assemble_l2_matrix(prob, N), compute_uv=False)[0])
            dense_err = max(dense_err, abs(v - ref))
    ok = all(b > a for a, b in zip(vals, vals[1:])) and all(v < math.pi for v in vals) and dense_err <= 1e-8
    return ok, {"values": vals, "dense_abs_err": dense_err}


def check_power_integrals():
    rep = verify_power_integrals()
    return len(rep) == 36 and rep.max_gap < 1e-8, {"points": len(rep), "max_gap": rep.max_gap}


def check_sum_sandwich():
    ok = True
    tightest = math.inf
    for tau, lam in ((-0.5, 1.5), (0.0, 2.0), (0.5, 3.0), (2.0, 5.0)):
        for n in (1, 10, 100, 1000):
            lo = sum_lower_bound(n, tau, lam)
            br = sum_S_partial(n, tau, lam)
            hi = sum_upper_bound(n, tau, lam)
            ok &= lo <= br.lower and br.upper <= hi
            tightest = min(tightest, hi - br.upper, br.lower - lo)
    return ok, {"min_margin": tightest}


DUALITY_TUPLES = (
    (3.0, 0.5, 0.25, 0.5, 1.0),
    (1.0, 0.0, 0.0, 0.0, 0.0),
    (2.0, -0.3, 0.4, -0.5, 0.2),
    (1.5, 1.0, -0.25, 1.0, -0.5),
    (4.0, 2.0, 1.0, 0.0, 2.0),
)


def check_adjoint_duality(pairs=100, N=200, seed=20240607):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(pairs):
        lam, mu, nu, a, b = DUALITY_TUPLES[i % len(DUALITY_TUPLES)]
        prob = Problem.of(lam, mu, nu, 2.0, 2.0, a, b)
        x = TruncatedSequence(rng.standard_normal(N))
        y = TruncatedSequence(rng.standard_normal(N))
        worst = max(worst, duality_gap(x, y, prob))
    return worst < 1e-12, {"pairs": pairs, "max_gap": worst}


def check_discrete_vs_continuous():
    d = classify(Problem.of(2.0, 0.0, 0.0, 2.0, 2.0))
    c = classify(Problem.of(2.0, 0.0, 0.0, 2.0, 2.0, continuous=True))
    best = optimize_schur(Problem.of(2.0, 0.0, 0.0, 2.0, 2.0), 64).best
    ok = d.status is Status.BOUNDED and c.status is Status.UNBOUNDED and math.isfinite(best)
    return ok, {"discrete": d.status.value, "continuous": c.status.value, "schur_best": best}


def check_unbounded_witness():
    prob = _classical(1.0)
    v = classify_discrete(prob)
    vals = [extremal_lower_bound(prob, eps, math.ceil(eps ** -2)) for eps in (1e-1, 1e-2, 1e-3, 1e-4)]
    increasing = all(b > a for a, b in zip(vals, vals[1:]))
    oracle = abs(vals[0] / WITNESS_ORACLE[0] - 1.0) < 1e-9 and abs(vals[-1] / WITNESS_ORACLE[1] - 1.0) < 1e-9
    ok = v.status is Status.UNBOUNDED and increasing and vals[-1] > 2.0 * vals[0] and oracle
    return ok, {"status": v.status.value, "values": vals}


def check_condition_equivalence(count=10_000, seed=7):
    rng = np.random.default_rng(seed)
    disagree = 0
    for _ in range(count):
        p = 1.0 + 4.0 * rng.random()
        q = p + 4.0 * rng.random()
        mu, nu, a, b = rng.uniform(-2.0, 2.0, 4)
        lam = mu + nu + 1.0 + (b + 1.0) / q - (a + 1.0) / p
        prob = Problem.of(lam, mu, nu, p, q, a, b, continuous=True)
        first, second = continuous_condition_systems(prob)
        disagree += first != second
    return disagree == 0, {"tuples": count, "disagreements": disagree}


def check_continuous_lower():
    prob = _classical(2.0, continuous=True)
    vals = [continuous_lower_bound(prob, z) for z in (1.0, 10.0, 100.0, 1000.0)]
    ok = (abs(vals[0] - math.log(2.0)) <= 1e-9
          and all(b > a for a, b in zip(vals, vals[1:]))
          and vals[-1] <= math.pi + 1e-9)
    return ok, {"values": vals}


def _run_cli(argv):
    from . import cli

    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = cli.main(argv)
    return code, out.getvalue()


def _sweep_rows(argv):
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "sweep.csv")
        code, _ = _run_cli(["sweep", *argv, "--out", path])
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
    return code, rows


def _first_flip(rows, status):
    for r in rows:
        if r["status"] == status:
            return float(r["value"])
    return None


def check_cli_contract():
    base = ["--lambda", "1", "--mu", "0", "--nu", "0", "--alpha", "0", "--beta", "0"]
    keys = {"status", "theorem", "sharp_norm", "advisory", "inputs"}
    cases = [
        (["classify", "--p", "2", "--q", "2", *base], 0, "bounded"),
        (["classify", "--p", "2", "--q", "2", *base, "--continuous", "--lambda", "2"], 1, "unbounded"),
        (["classify", "--p", "2", "--q", "1", *base], 2, "inapplicable"),
    ]
    classify_ok = True
    for argv, code_want, status_want in cases:
        code, out = _run_cli(argv)
        doc = json.loads(out)
        classify_ok &= code == code_want and set(doc) == keys and doc["status"] == status_want
    code, out = _run_cli(cases[0][0])
    classify_ok &= abs(json.loads(out)["sharp_norm"] - math.pi) < 1e-12

    fixed = ["--p", "2", "--q", "2", "--mu", "0", "--nu", "0", "--alpha", "0"]
    _, lam_rows = _sweep_rows(["--vary", "lambda", "--start", "0.5", "--stop", "3", "--step", "0.25",
                               *fixed, "--beta", "0"])
    lam_flip = _first_flip(lam_rows, "bounded")
    lam_ok = len(lam_rows) == 11 and lam_flip == 1.0 and all(
        (r["status"] == "bounded") == (float(r["value"]) >= 1.0) for r in lam_rows)

    _, beta_rows = _sweep_rows(["--vary", "beta", "--start", "-0.5", "--stop", "3.5", "--step", "0.5",
                                *fixed, "--lambda", "1"])
    beta_flip = _first_flip(beta_rows, "unbounded")
    beta_ok = len(beta_rows) == 9 and beta_flip == 1.0 and all(
        (r["status"] == "unbounded") == (float(r["value"]) >= 1.0) for r in beta_rows)

    _, one = _sweep_rows(["--vary", "lambda", "--start", "1", "--stop", "1", "--step", "0.5", *fixed, "--beta", "0"])
    ok = classify_ok and lam_ok and beta_ok and len(one) == 1
    return ok, {
        "classify_ok": classify_ok,
        "lambda_rows": len(lam_rows), "lambda_flip": lam_flip,
        "beta_rows": len(beta_rows), "beta_first_unbounded": beta_flip,
        "single_point_rows": len(one),
    }


@dataclass(frozen=True)
class Criterion:
    ident: str
    title: str
    check: Callable
    budget: float


CRITERIA: Sequence[Criterion] = (
    Criterion("sharp-norm", "classical sharp norms pi/sin(pi/p)", check_sharp_norm, 1e-3),
    Criterion("schur-optimum", "Schur search reaches the sharp norm", check_schur_optimum, 20.0),
    Criterion("extremal-convergence", "extremal quotients increase towards pi", check_extremal_convergence, 30.0),
    Criterion("finite-section", "finite-section norms increase below pi", check_finite_section, 20.0),
    Criterion("power-integral", "power integral quadrature vs Beta closed form", check_power_integrals, 2.0),
    Criterion("sum-sandwich", "power sum lower/upper bounds enclose the sum", check_sum_sandwich, 5.0),
    Criterion("adjoint-duality", "weighted adjoint pairing identity", check_adjoint_duality, 2.0),
    Criterion("discrete-vs-continuous", "lam=2 bounded on sequences, unbounded on functions",
              check_discrete_vs_continuous, 5.0),
    Criterion("unbounded-witness", "p=q=1 extremal quotients grow without bound", check_unbounded_witness, 60.0),
    Criterion("condition-equivalence", "continuous condition systems agree", check_condition_equivalence, 1.0),
    Criterion("continuous-lower", "continuous lower functional rises from ln 2 to below pi",
              check_continuous_lower, 5.0),
    Criterion("cli-contract", "classify exit codes/JSON and sweep flip points", check_cli_contract, 1.0),
)


def criterion_ids() -> List[str]:
    return [c.ident for c in CRITERIA]


def run_one(c: Criterion) -> CriterionResult:
    t0 = time.perf_counter()
    try:
        ok, measured = c.check()
    except Exception as exc:  # a crash is a failure, reported not raised
        ok, measured = False, {"error": f"{type(exc).__name__}: {exc}"}
    dt = time.perf_counter() - t0
    if dt > c.budget:
        measured = dict(measured, over_budget=True)
        ok = False
    return CriterionResult(c.ident, c.title, bool(ok), measured, dt, c.budget)


def run(only: Optional[Sequence[str]] = None) -> List[CriterionResult]:
    chosen = CRITERIA if not only else [c for c in CRITERIA if c.ident in set(only)]
    return [run_one(c) for c in chosen]
