"""Command-line front end.

    hilbertop classify --p 2 --q 2 --lambda 1
    hilbertop norm --p 2 --q 2 --lambda 1 --method bracket
    hilbertop sweep --vary lambda --start 0.5 --stop 3 --step 0.25 --p 2 --q 2 --out sweep.csv
    hilbertop verify [--only ID ...] [--list]

classify and norm print one JSON object. Exit codes: 0 bounded / success,
1 unbounded, 2 inapplicable or method not available for the problem,
64 bad flags, 73 output not writable.
"""

import argparse
import configparser
import csv
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional

from .classifier import Status, classify, sharp_norm_obstruction
from .continuous import continuous_lower_bound, optimize_continuous_schur
from .errors import HilbertOpError
from .normest import extremal_lower_bound, norm_bracket, optimize_schur, spectral_norm_l2
from .operator import Problem

EXIT_OK = 0
EXIT_UNBOUNDED = 1
EXIT_INAPPLICABLE = 2
EXIT_USAGE = 64
EXIT_CANTCREAT = 73

# every numerical default in one place; overridable by --config and flags
DEFAULTS = {
    "trunc": 2048,
    "eps": (1e-1, 1e-2, 1e-3),
    "grid": 64,
    "iters": 10_000,
}

STATUS_EXIT = {
    Status.BOUNDED: EXIT_OK,
    Status.UNBOUNDED: EXIT_UNBOUNDED,
    Status.INAPPLICABLE: EXIT_INAPPLICABLE,
}

SWEEP_HEADER = ["value", "status", "sharp_norm", "schur_best", "lower"]
SWEEP_PARAMS = ("lambda", "mu", "nu", "alpha", "beta", "p", "q")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _exponent(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number or 'inf': {text!r}")
    if not v >= 1.0:
        raise argparse.ArgumentTypeError(f"exponent must be >= 1 or 'inf', got {text!r}")
    return v


def _real(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _positive_real(text: str) -> float:
    v = _real(text)
    if not v > 0.0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _add_problem_flags(ap, required=True):
    ap.add_argument("--p", type=_exponent, required=required, help="source exponent (number or 'inf')")
    ap.add_argument("--q", type=_exponent, required=required, help="target exponent (number or 'inf')")
    ap.add_argument("--lambda", dest="lam", type=_real, required=required)
    ap.add_argument("--mu", type=_real, default=0.0)
    ap.add_argument("--nu", type=_real, default=0.0)
    ap.add_argument("--alpha", type=_real, default=0.0, help="source weight exponent")
    ap.add_argument("--beta", type=_real, default=0.0, help="target weight exponent")
    ap.add_argument("--continuous", action="store_true", help="integral operator on (0, inf)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="hilbertop", description="Boundedness and norms of Hilbert-type operators.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="decide boundedness")
    _add_problem_flags(c)

    n = sub.add_parser("norm", help="estimate or compute the operator norm")
    _add_problem_flags(n)
    n.add_argument("--method", choices=("sharp", "schur", "extremal", "spectral", "bracket"), default="bracket")
    n.add_argument("--trunc", type=_positive_int, help=f"truncation N (default {DEFAULTS['trunc']})")
    n.add_argument("--eps", type=_positive_real, help="single extremal eps (default: the eps schedule)")
    n.add_argument("--grid", type=_positive_int, help=f"Schur grid density (default {DEFAULTS['grid']})")
    n.add_argument("--iters", type=_positive_int, help=f"power iterations (default {DEFAULTS['iters']})")
    n.add_argument("--config", help="key = value file overriding trunc, eps, grid, iters")

    s = sub.add_parser("sweep", help="classify along a parameter range, write CSV")
    _add_problem_flags(s, required=False)
    s.add_argument("--vary", choices=SWEEP_PARAMS, required=True)
    s.add_argument("--start", type=_real, required=True)
    s.add_argument("--stop", type=_real, required=True)
    s.add_argument("--step", type=_real, required=True)
    s.add_argument("--out", required=True, help="CSV path")
    s.add_argument("--schur", action="store_true", help="fill the schur_best column")
    s.add_argument("--lower", action="store_true", help="fill the lower column")
    s.add_argument("--trunc", type=_positive_int)
    s.add_argument("--eps", type=_positive_real)
    s.add_argument("--grid", type=_positive_int)
    s.add_argument("--config")

    v = sub.add_parser("verify", help="run the acceptance checks")
    v.add_argument("--only", action="append", metavar="ID", help="run only this check (repeatable)")
    v.add_argument("--list", action="store_true", help="list check identifiers")
    return ap


def _problem(args) -> Problem:
    return Problem.of(args.lam, args.mu, args.nu, args.p, args.q, args.alpha, args.beta,
                      continuous=args.continuous)


def _num(x) -> Optional[float]:
    """JSON has no infinities; non-finite values become null."""
    if x is None or not math.isfinite(x):
        return None
    return float(x)


def _exp_text(x: float) -> str:
    return "inf" if math.isinf(x) else repr(float(x))


def _inputs(prob: Problem) -> dict:
    return {
        "lambda": prob.e.lam, "mu": prob.e.mu, "nu": prob.e.nu,
        "p": _exp_text(prob.p), "q": _exp_text(prob.q),
        "alpha": prob.alpha, "beta": prob.beta,
        "continuous": not prob.discrete,
    }


def _emit(doc: dict):
    print(json.dumps(doc, allow_nan=False))


def load_settings(args) -> dict:
    cfg = dict(DEFAULTS)
    path = getattr(args, "config", None)
    if path:
        parser = configparser.ConfigParser()
        try:
            with open(path) as fh:
                parser.read_string("[settings]\n" + fh.read())
        except (OSError, configparser.Error) as exc:
            raise UsageError(f"cannot read config {path!r}: {exc}")
        sec = parser["settings"]
        try:
            for key in ("trunc", "grid", "iters"):
                if key in sec:
                    cfg[key] = _positive_int(sec[key])
            if "eps" in sec:
                cfg["eps"] = tuple(_positive_real(x) for x in sec["eps"].split(","))
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"config {path!r}: {exc}")
        unknown = set(sec) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"config {path!r}: unknown keys {sorted(unknown)}")
    for key in ("trunc", "grid", "iters"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    if getattr(args, "eps", None) is not None:
        cfg["eps"] = (args.eps,)
    return cfg


def cmd_classify(args) -> int:
    prob = _problem(args)
    v = classify(prob)
    adv = v.advisory
    _emit({
        "status": v.status.value,
        "theorem": v.theorem_tag,
        "sharp_norm": _num(v.sharp_norm),
        "advisory": {
            "adjoint_condition": adv.get("adjoint_condition"),
            "disagrees": adv.get("disagrees"),
            "equality_residual": _num(adv.get("equality_residual")),
            "reason": v.reason,
        },
        "inputs": _inputs(prob),
    })
    return STATUS_EXIT[v.status]


class Incompatible(Exception):
    pass


def _norm_doc(prob, method, cfg):
    doc = {
        "method": method, "inputs": _inputs(prob),
        "value": None, "lower": None, "upper": None,
        "lower_method": None, "upper_method": None,
        "certified": {"lower": False, "upper": False},
        "parameters": {"trunc": cfg["trunc"], "eps": list(cfg["eps"]), "grid": cfg["grid"], "iters": cfg["iters"]},
    }
    verdict = classify(prob)
    bounded = verdict.status is Status.BOUNDED
    pp = prob.p == prob.q and math.isfinite(prob.p)

    if method == "sharp":
        why = sharp_norm_obstruction(prob)
        if why is not None:
            raise Incompatible(f"no exact norm: {why}")
        val = verdict.sharp_norm
        doc.update(value=val, lower=val, upper=val, lower_method="sharp", upper_method="sharp",
                   certified={"lower": True, "upper": True})
        return doc

    if method == "spectral":
        if not prob.discrete or not (prob.p == 2.0 and prob.q == 2.0):
            raise Incompatible("spectral estimate needs a discrete problem with p = q = 2")
        val = spectral_norm_l2(prob, cfg["trunc"], cfg["iters"])
        doc.update(value=val, lower=val, lower_method=f"spectral(N={cfg['trunc']})",
                   certified={"lower": True, "upper": False})
        return doc

    if method == "extremal":
        if not pp:
            raise Incompatible("extremal lower bound needs p = q < inf")
        eps = cfg["eps"][-1]
        if prob.discrete:
            val = extremal_lower_bound(prob, eps, cfg["trunc"])
            label = f"extremal(eps={eps:g}, N={cfg['trunc']})"
        else:
            if not bounded:
                raise Incompatible(f"continuous lower functional needs a bounded problem ({verdict.status.value})")
            val = continuous_lower_bound(prob, 1.0 / eps)
            label = f"continuous(z={1.0 / eps:g})"
        doc.update(value=val, lower=val, lower_method=label, certified={"lower": True, "upper": False})
        return doc

    if not bounded:
        raise Incompatible(f"problem is {verdict.status.value}; no finite upper bound exists")

    if method == "schur":
        best, label = _schur_best(prob, cfg)
        doc.update(value=_num(best), upper=_num(best), upper_method=label,
                   certified={"lower": False, "upper": math.isfinite(best)})
        return doc

    # bracket
    if not pp:
        raise Incompatible("a norm bracket needs p = q < inf")
    if prob.discrete:
        br = norm_bracket(prob, [(e, cfg["trunc"]) for e in cfg["eps"]], cfg["grid"], cfg["iters"])
        doc.update(lower=br.lower, upper=_num(br.upper), lower_method=br.lower_method,
                   upper_method=br.upper_method, certified=br.certified)
        doc["parameters"]["schur_best"] = _num(br.parameters["schur_best"])
        doc["parameters"]["spectral"] = br.parameters["spectral"]
        return doc
    lower = max(continuous_lower_bound(prob, 1.0 / e) for e in cfg["eps"])
    best, label = _schur_best(prob, cfg)
    upper, umethod = best, label
    if verdict.sharp_norm is not None:
        upper, umethod = verdict.sharp_norm, "sharp"
    doc.update(lower=lower, upper=_num(upper), lower_method="continuous", upper_method=umethod,
               certified={"lower": True, "upper": math.isfinite(upper)})
    return doc


def _schur_best(prob, cfg):
    if prob.discrete:
        if not (1.0 <= prob.p <= prob.q < math.inf):
            raise Incompatible("Schur bound needs 1 <= p <= q < inf")
        return optimize_schur(prob, cfg["grid"]).best, "schur"
    if not (1.0 < prob.p <= prob.q < math.inf):
        raise Incompatible("continuous Schur bound needs 1 < p <= q < inf")
    return optimize_continuous_schur(prob, cfg["grid"])[0], "schur"


def cmd_norm(args) -> int:
    prob = _problem(args)
    cfg = load_settings(args)
    try:
        doc = _norm_doc(prob, args.method, cfg)
    except Incompatible as exc:
        sys.stderr.write(f"norm --method {args.method}: {exc}\n")
        return EXIT_INAPPLICABLE
    _emit(doc)
    return EXIT_OK


@dataclass(frozen=True)
class SweepSpec:
    vary: str
    start: float
    stop: float
    step: float
    out: str

    def __post_init__(self):
        if not self.step > 0.0:
            raise UsageError("step must be positive")
        if not self.start <= self.stop:
            raise UsageError("start must not exceed stop")

    def values(self):
        count = math.floor((self.stop - self.start) / self.step + 1e-9) + 1
        return [self.start + i * self.step for i in range(count)]


_SWEEP_ATTR = {"lambda": "lam", "mu": "mu", "nu": "nu", "alpha": "alpha", "beta": "beta", "p": "p", "q": "q"}


def _csv_num(x) -> str:
    return "" if x is None else repr(float(x))


def _sweep_row(args, value, cfg, want_schur, want_lower):
    vals = {k: getattr(args, a) for k, a in _SWEEP_ATTR.items()}
    vals[args.vary] = value
    missing = [k for k in ("p", "q", "lambda") if vals[k] is None]
    if missing:
        raise UsageError(f"missing fixed parameters: {', '.join('--' + m for m in missing)}")
    prob = Problem.of(vals["lambda"], vals["mu"], vals["nu"], vals["p"], vals["q"], vals["alpha"], vals["beta"],
                      continuous=args.continuous)
    v = classify(prob)
    schur = lower = None
    bounded = v.status is Status.BOUNDED
    if want_schur and bounded:
        try:
            schur, _ = _schur_best(prob, cfg)
        except Incompatible:
            schur = None
    if want_lower and prob.p == prob.q and math.isfinite(prob.p):
        eps = cfg["eps"][-1]
        if prob.discrete:
            lower = extremal_lower_bound(prob, eps, cfg["trunc"])
        elif bounded:
            lower = continuous_lower_bound(prob, 1.0 / eps)
    return [repr(float(value)), v.status.value, _csv_num(v.sharp_norm),
            "" if schur is None else ("inf" if math.isinf(schur) else repr(schur)), _csv_num(lower)]


def cmd_sweep(args) -> int:
    spec = SweepSpec(args.vary, args.start, args.stop, args.step, args.out)
    if args.vary == "p" or args.vary == "q":
        if spec.start < 1.0:
            raise UsageError("exponents must be >= 1")
    cfg = load_settings(args)
    rows = [_sweep_row(args, x, cfg, args.schur, args.lower) for x in spec.values()]
    try:
        with open(spec.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(SWEEP_HEADER)
            w.writerows(rows)
    except OSError as exc:
        sys.stderr.write(f"cannot write {spec.out!r}: {exc}\n")
        return EXIT_CANTCREAT
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import verify

    ids = verify.criterion_ids()
    if args.list:
        print("\n".join(ids))
        return EXIT_OK
    if args.only:
        unknown = [x for x in args.only if x not in ids]
        if unknown:
            raise UsageError(f"unknown check ids: {', '.join(unknown)}")
    results = verify.run(args.only)
    for r in results:
        print(r.line(), flush=True)
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} passed")
    return EXIT_OK if failed == 0 else EXIT_UNBOUNDED


COMMANDS = {"classify": cmd_classify, "norm": cmd_norm, "sweep": cmd_sweep, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help exits 0; everything else argparse rejects is a usage error
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"hilbertop {args.command}: {exc}\n")
        return EXIT_USAGE
    except HilbertOpError as exc:
        sys.stderr.write(f"hilbertop {args.command}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
