"""Numerical norm brackets for the discrete operator.

Upper bounds come from a two-weight Schur test: the kernel is split as
k**(1/s) m**A * k**(1/t) m**-A, Hoelder and Minkowski reduce everything to
two one-variable sums S(n), and :func:`hilbertop.kernel.power_sum_constant`
bounds those. The free parameters (t, A) -- or (s, D) when p = 1 -- are
searched on a grid that is repeatedly zoomed around the best cell.

Lower bounds are Rayleigh quotients of finite test vectors: the extremal
power sequences, and for p = q = 2 the top singular value of a finite
section. Both are valid for any truncation.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .classifier import Status, _at_least, classify_discrete, critical_lambda
from .errors import ContractViolation, DomainError, InternalInconsistency
from .kernel import power_sum_constant
from .operator import Problem, apply, assemble_l2_matrix
from .powersum import power_kernel_sum, smooth_sum
from .seqspace import TruncatedSequence, extremal_sequence, weighted_norm

__all__ = [
    "SchurParams",
    "SchurEvaluation",
    "SchurOptimum",
    "NormBracket",
    "schur_evaluate",
    "schur_upper_bound",
    "schur_upper_bound_p1",
    "sharp_schur_params",
    "optimize_schur",
    "extremal_lower_bound",
    "rayleigh_quotient",
    "spectral_norm_l2",
    "norm_bracket",
    "DENSE_BUDGET",
]

INF = math.inf
# largest N * out_len handled by the literal dense product
DENSE_BUDGET = 1 << 22
BRACKET_SLACK = 1e-9


@dataclass(frozen=True)
class SchurParams:
    """Conjugate Schur exponents s, t and the free weight exponent.

    ``case == "A"`` is the p > 1 construction (weight m**A); ``case == "D"``
    is the p = 1 construction, where the slot holds D.
    """

    s: float
    t: float
    A: float
    case: str = "A"

    def __post_init__(self):
        if not (self.s > 1.0 and self.t > 1.0):
            raise DomainError("Schur exponents must exceed 1")
        if abs(1.0 / self.s + 1.0 / self.t - 1.0) > 1e-14:
            raise DomainError("1/s + 1/t must equal 1")
        if self.case not in ("A", "D"):
            raise DomainError("case must be 'A' or 'D'")

    @classmethod
    def from_t(cls, t: float, A: float, case: str = "A") -> "SchurParams":
        return cls(t / (t - 1.0), t, A, case)

    @classmethod
    def from_s(cls, s: float, D: float) -> "SchurParams":
        return cls(s, s / (s - 1.0), D, "D")

    @property
    def D(self) -> float:
        return self.A


class SchurEvaluation(NamedTuple):
    bound: float
    c1: float
    c2: float
    beta_form1: bool
    beta_form2: bool
    admissible: bool
    certified: bool = True


_INADMISSIBLE = SchurEvaluation(INF, INF, INF, False, False, False)


def _sum_constant(tau, lam):
    """(constant, used_beta_form) for sum_m m**tau/(m+n)**lam <= C n**(tau+1-lam)."""
    c = power_sum_constant(tau, lam)
    return c, tau <= 0.0


def _check_shape(prob: Problem, want_p1: bool):
    if not prob.discrete:
        raise ContractViolation("discrete Schur bounds need a discrete problem")
    p, q = prob.p, prob.q
    if not (1.0 <= p <= q < INF):
        raise ContractViolation("Schur bounds need 1 <= p <= q < inf")
    if want_p1 and p != 1.0:
        raise ContractViolation("schur_upper_bound_p1 needs p = 1")
    if not want_p1 and p == 1.0:
        raise ContractViolation("p = 1 uses schur_upper_bound_p1")


def A_window(prob: Problem, s: float):
    """Open interval of admissible A for given s (p > 1)."""
    e, p, q = prob.e, prob.p, prob.q
    pc = p / (p - 1.0)
    base = -1.0 / pc - e.mu / s
    shift = -(prob.beta + 1.0) / q - e.nu
    lo = max(base, shift + base + e.lam / s)
    hi = min(base + e.lam / s, shift + base + e.lam)
    return lo, hi


def D_window(prob: Problem, s: float):
    """Open interval of admissible D for given s (p = 1)."""
    e, q = prob.e, prob.q
    t = s / (s - 1.0)
    lo = max(-e.nu / t - (prob.beta + 1.0) / q, (e.nu - e.lam) / s)
    hi = min((e.lam - e.nu) / t - (prob.beta + 1.0) / q, e.nu / s)
    return lo, hi


def schur_evaluate(prob: Problem, sp: SchurParams) -> SchurEvaluation:
    """Schur bound C1**(1/p') * C2**(1/q) for p > 1, with branch metadata."""
    _check_shape(prob, want_p1=False)
    if sp.case != "A":
        raise ContractViolation("p > 1 takes an A-type parameter set")
    if not _at_least(prob.e.lam, critical_lambda(prob)):
        return _INADMISSIBLE
    e, p, q, s, t, A = prob.e, prob.p, prob.q, sp.s, sp.t, sp.A
    pc = p / (p - 1.0)
    tau1 = e.mu * pc / s + pc * A
    lam1 = e.lam * pc / s
    Bexp = q * (e.nu / s + e.mu / s + A + 1.0 / pc - e.lam / s)
    tau2 = e.nu * q / t + Bexp + prob.beta
    lam2 = e.lam * q / t
    if not (tau1 > -1.0 and lam1 - tau1 - 1.0 > 0.0):
        return _INADMISSIBLE
    if not (tau2 > -1.0 and lam2 - tau2 - 1.0 > 0.0):
        return _INADMISSIBLE
    c1, b1 = _sum_constant(tau1, lam1)
    c2, b2 = _sum_constant(tau2, lam2)
    bound = math.exp(math.log(c1) / pc + math.log(c2) / q)
    return SchurEvaluation(bound, c1, c2, b1, b2, True)


def schur_upper_bound(prob: Problem, sp: SchurParams) -> float:
    """Certified upper bound on ||H|| from l^p_alpha to l^q_beta, 1 < p <= q < inf.

    Returns +inf when (s, t, A) is outside the admissible windows or the
    exponent balance lam >= mu + nu + 1 + (beta+1)/q - (alpha+1)/p fails.
    """
    return schur_evaluate(prob, sp).bound


def _sup_power_ratio(a, c):
    """sup over x in (0, 1) of x**a (1 - x)**c for a, c > 0."""
    return math.exp(a * math.log(a) + c * math.log(c) - (a + c) * math.log(a + c))


def schur_evaluate_p1(prob: Problem, sp: SchurParams) -> SchurEvaluation:
    _check_shape(prob, want_p1=True)
    if sp.case != "D":
        raise ContractViolation("p = 1 takes a D-type parameter set")
    if not _at_least(prob.e.lam, critical_lambda(prob)):
        return _INADMISSIBLE
    e, q, s, t, D = prob.e, prob.q, sp.s, sp.t, sp.D
    lo, hi = D_window(prob, s)
    if not lo < D < hi:
        return _INADMISSIBLE
    # m**a n**(-b) / (m+n)**(lam/s) with a - b = lam/s is a function of
    # m/(m+n) alone, so its sup is the continuous one
    a = (e.lam - e.nu) / s + D
    c = e.nu / s - D
    c3 = _sup_power_ratio(a, c)
    tau4 = e.nu * q / t + q * D + prob.beta
    lam4 = e.lam * q / t
    c4, b4 = _sum_constant(tau4, lam4)
    bound = c3 * math.exp(math.log(c4) / q)
    return SchurEvaluation(bound, c3, c4, True, b4, True)


def schur_upper_bound_p1(prob: Problem, sp: SchurParams) -> float:
    """Certified upper bound for p = 1 <= q < inf: C3 * C4**(1/q), +inf if inadmissible."""
    return schur_evaluate_p1(prob, sp).bound


def sharp_schur_params(prob: Problem) -> SchurParams:
    """s = p', t = p, A = -(alpha+1)/(p p'): the choice that is sharp when p = q."""
    p = prob.p
    if not 1.0 < p < INF:
        raise ContractViolation("needs 1 < p < inf")
    pc = p / (p - 1.0)
    return SchurParams(pc, p, -(prob.alpha + 1.0) / (p * pc))


@dataclass
class SchurOptimum:
    best: float
    params: Optional[SchurParams]
    evaluation: Optional[SchurEvaluation]
    evaluations: int
    passes: int
    diagnostics: str = ""


def _zoom_search(objective, u_range, G, max_passes=12, min_width=1e-11):
    """Minimise objective(u, w), w in (0, 1), by repeated grid zooming."""
    u_lo, u_hi = u_range
    w_lo, w_hi = 0.0, 1.0
    best = (INF, None, None)
    count = passes = 0
    for passes in range(1, max_passes + 1):
        du = (u_hi - u_lo) / G
        dw = (w_hi - w_lo) / G
        for i in range(G):
            u = u_lo + (i + 0.5) * du
            for j in range(G):
                w = w_lo + (j + 0.5) * dw
                val = objective(u, w)
                count += 1
                if val < best[0]:
                    best = (val, u, w)
        if best[1] is None:
            break
        u, w = best[1], best[2]
        u_lo, u_hi = u - du, u + du
        w_lo, w_hi = max(0.0, w - dw), min(1.0, w + dw)
        if du < min_width and dw < min_width:
            break
    return best, count, passes


def optimize_schur(prob: Problem, grid_density: int = 64) -> SchurOptimum:
    """Smallest Schur bound over the free parameters.

    p > 1: t - 1 on a log grid over (0, 10 q], A across its admissible
    window at that t. p = 1: same for s and D. The grid is re-centred and
    shrunk around the best cell until cells are ~1e-11 wide.
    """
    if grid_density < 2:
        raise DomainError("grid_density must be at least 2")
    verdict = classify_discrete(prob)
    if verdict.status is not Status.BOUNDED:
        return SchurOptimum(INF, None, None, 0, 0,
                            f"problem is {verdict.status.value}; no Schur bound exists")
    if not (1.0 <= prob.p <= prob.q < INF):
        return SchurOptimum(INF, None, None, 0, 0, "Schur construction needs 1 <= p <= q < inf")

    p1 = prob.p == 1.0
    window = D_window if p1 else A_window
    evaluate = schur_evaluate_p1 if p1 else schur_evaluate

    def make(u, w):
        x = 1.0 + math.exp(u)  # t for p > 1, s for p = 1
        other = x / (x - 1.0)
        s = x if p1 else other
        lo, hi = window(prob, s)
        if not hi > lo:
            return None
        v = lo + w * (hi - lo)
        return SchurParams.from_s(x, v) if p1 else SchurParams.from_t(x, v)

    def objective(u, w):
        try:
            sp = make(u, w)
        except DomainError:
            return INF
        if sp is None:
            return INF
        return evaluate(prob, sp).bound

    u_range = (math.log(1e-3), math.log(10.0 * prob.q))
    (val, u, w), count, passes = _zoom_search(objective, u_range, grid_density)
    if u is None or not math.isfinite(val):
        return SchurOptimum(INF, None, None, count, passes, "no admissible Schur parameters found on the grid")
    sp = make(u, w)
    return SchurOptimum(val, sp, evaluate(prob, sp), count, passes)


def _require_pp(prob: Problem):
    if not prob.discrete:
        raise ContractViolation("needs a discrete problem")
    if not (prob.p == prob.q and math.isfinite(prob.p)):
        raise ContractViolation("needs p = q < inf")


def _extremal_dense(prob, eps, N, out_len):
    a = extremal_sequence(eps, prob.p, prob.alpha, N)
    Ha = apply(a, prob.e, out_len)
    return weighted_norm(Ha, prob.target) / weighted_norm(a, prob.source)


def _extremal_summed(prob, eps, N, out_len):
    p, e = prob.p, prob.e
    tau = e.mu - (prob.alpha + 1.0 + eps) / p
    out_exp = prob.beta + p * e.nu

    def image_mass(n):
        return np.exp(out_exp * np.log(n)) * power_kernel_sum(n, tau, e.lam, N) ** p

    num = float(smooth_sum(image_mass, 1, out_len))
    den = float(smooth_sum(lambda m: np.exp((-1.0 - eps) * np.log(m)), 1, N))
    return (num / den) ** (1.0 / p)


def extremal_lower_bound(prob: Problem, eps: float, N: int, out_len: Optional[int] = None) -> float:
    """||H a||_{p,beta} / ||a||_{p,alpha} for the extremal sequence cut at N terms.

    The output is measured on n = 1..out_len (default N). Any truncation is
    an admissible test vector, so the value is a lower bound on the norm.
    Small problems use the literal dense product; large ones evaluate the
    same finite sums with :mod:`hilbertop.powersum`.
    """
    _require_pp(prob)
    if not eps > 0.0:
        raise DomainError("eps must be positive")
    if N < 1:
        raise DomainError("N must be a positive integer")
    L = N if out_len is None else int(out_len)
    if N * L <= DENSE_BUDGET:
        return _extremal_dense(prob, eps, N, L)
    return _extremal_summed(prob, eps, N, L)


def rayleigh_quotient(a: TruncatedSequence, prob: Problem, out_len: int) -> float:
    """||H a||_{q,beta} / ||a||_{p,alpha} over the stored terms and n <= out_len."""
    if not (math.isfinite(prob.p) and math.isfinite(prob.q)):
        raise ContractViolation("needs finite p and q")
    den = weighted_norm(a, prob.source)
    if den == 0.0:
        raise DomainError("zero test vector")
    return weighted_norm(apply(a, prob.e, out_len), prob.target) / den


def spectral_norm_l2(prob: Problem, N: int, iters: int = 10_000, tol: float = 1e-10) -> float:
    """Largest singular value of the N-section via power iteration on M^T M.

    Starts from the normalised all-ones vector. Every iterate ||M x|| with
    ||x|| = 1 is itself a lower bound on the section norm.
    """
    M = assemble_l2_matrix(prob, N)
    x = np.full(N, 1.0 / math.sqrt(N))
    sigma = 0.0
    for _ in range(iters):
        y = M @ x
        new = float(np.linalg.norm(y))
        z = M.T @ y
        nz = float(np.linalg.norm(z))
        if nz == 0.0:
            return new
        x = z / nz
        if abs(new - sigma) < tol:
            sigma = new
            break
        sigma = new
    return sigma


@dataclass
class NormBracket:
    lower: float
    upper: float
    lower_method: str
    upper_method: str
    parameters: dict = field(default_factory=dict)
    certified: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.lower > self.upper + BRACKET_SLACK:
            raise InternalInconsistency(
                f"lower bound {self.lower!r} exceeds upper bound {self.upper!r}")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float, slack: float = BRACKET_SLACK) -> bool:
        return self.lower - slack <= value <= self.upper + slack


DEFAULT_SCHEDULE = ((1e-1, 2048), (1e-2, 2048), (1e-3, 2048))


def norm_bracket(prob: Problem, schedule: Sequence = DEFAULT_SCHEDULE,
                 grid_density: int = 64, iters: int = 10_000) -> NormBracket:
    """Combine extremal, spectral, Schur and sharp-formula estimates."""
    _require_pp(prob)
    verdict = classify_discrete(prob)
    if verdict.status is not Status.BOUNDED:
        raise ContractViolation(f"norm_bracket needs a bounded problem, got {verdict.status.value}")
    if not schedule:
        raise DomainError("schedule must not be empty")

    lower, lower_method = 0.0, "none"
    lowers = []
    for eps, N in schedule:
        v = extremal_lower_bound(prob, eps, N)
        lowers.append({"eps": eps, "N": N, "value": v})
        if v > lower:
            lower, lower_method = v, f"extremal(eps={eps:g}, N={N})"
    spectral = None
    if prob.p == 2.0:
        Nmax = max(N for _, N in schedule)
        spectral = spectral_norm_l2(prob, Nmax, iters)
        if spectral > lower:
            lower, lower_method = spectral, f"spectral(N={Nmax})"

    opt = optimize_schur(prob, grid_density)
    upper, upper_method = opt.best, "schur"
    sharp = verdict.sharp_norm
    if sharp is not None:
        # the exact norm; a search result can only undercut it by rounding
        upper, upper_method = sharp, "sharp"
    params = {
        "extremal": lowers,
        "spectral": spectral,
        "schur_best": opt.best,
        "schur_params": None if opt.params is None else
        {"s": opt.params.s, "t": opt.params.t, "A": opt.params.A, "case": opt.params.case},
        "sharp_norm": sharp,
        "grid_density": grid_density,
    }
    certified = {"lower": True, "upper": math.isfinite(upper)}
    return NormBracket(lower, upper, lower_method, upper_method, params, certified)
