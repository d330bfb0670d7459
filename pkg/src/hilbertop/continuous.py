"""The integral operator (Hf)(y) = int_0^inf x**mu y**nu / (x + y)**lam f(x) dx.

Everything here reduces to power-ratio integrals, which are either closed
Beta values or adaptive quadrature on a finite interval after substitution.
"""

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, List, Tuple

from .classifier import Status, _balanced, classify_continuous
from .errors import ContractViolation, DivergentIntegral, DomainError
from .kernel import integral_I_closed
from .operator import Problem
from .quadrature import QuadResult, beta_kernel_integral, power_ratio_tail
from .specfun import ln_beta

__all__ = [
    "QuadResult",
    "integral_I_quad",
    "continuous_lower_bound",
    "DEFAULT_POWER_GRID",
    "PowerIntegralReport",
    "verify_power_integrals",
    "continuous_schur_upper_bound",
    "optimize_continuous_schur",
]


def integral_I_quad(y: float, tau: float, lam: float) -> QuadResult:
    """int_0^inf x**tau / (x + y)**lam dx by quadrature.

    With u = x/(x + y) the integral becomes y**(tau+1-lam) times
    int_0^1 u**tau (1 - u)**(lam - tau - 2) du.
    """
    if not y > 0.0:
        raise DomainError("y must be positive")
    if not (tau > -1.0 and lam - tau - 1.0 > 0.0):
        raise DivergentIntegral(f"I(y) diverges for tau={tau}, lam={lam}")
    r = beta_kernel_integral(tau, lam - tau - 2.0, 1.0, abs_tol=1e-13, rel_tol=1e-12)
    scale = math.exp((tau + 1.0 - lam) * math.log(y))
    return QuadResult(scale * r.value, scale * r.abs_error_estimate, r.subdivisions)


DEFAULT_POWER_GRID: Tuple[Tuple[float, float, float], ...] = tuple(
    (y, tau, tau + 1.0 + gap)
    for tau, gap, y in itertools.product((-0.5, 0.0, 1.0, 2.5), (0.5, 1.0, 2.0), (0.5, 1.0, 10.0))
)


@dataclass
class PowerIntegralReport:
    rows: List[dict] = field(default_factory=list)

    @property
    def max_gap(self) -> float:
        return max((r["gap"] for r in self.rows), default=0.0)

    @property
    def estimates_cover(self) -> bool:
        """Every quadrature error estimate bounds its actual deviation."""
        return all(r["abs_diff"] <= r["abs_error_estimate"] for r in self.rows)

    def __len__(self):
        return len(self.rows)


def verify_power_integrals(grid: Iterable[Tuple[float, float, float]] = DEFAULT_POWER_GRID) -> PowerIntegralReport:
    """Compare quadrature with the closed form y**(tau+1-lam) B(tau+1, lam-tau-1).

    ``grid`` holds (y, tau, lam) triples.
    """
    report = PowerIntegralReport()
    for y, tau, lam in grid:
        quad = integral_I_quad(y, tau, lam)
        closed = integral_I_closed(y, tau, lam)
        diff = abs(quad.value - closed)
        report.rows.append({
            "y": y, "tau": tau, "lam": lam,
            "quad": quad.value, "closed": closed,
            "abs_diff": diff, "abs_error_estimate": quad.abs_error_estimate,
            "gap": diff / abs(closed),
        })
    return report


def continuous_lower_bound(prob: Problem, z: float) -> float:
    """||H f_eps||_{p,beta} lower estimate with eps = 1/z and ||f_eps||_{p,alpha} = 1.

    f_eps(x) = eps**(1/p) x**(-(alpha+1+eps)/p) on [1, inf). Restricting the
    output to y >= 1 and substituting x = y t gives

        (eps**eps)**(1/p) * int_{1/z}^inf t**(mu - (alpha+1)/p - eps/p) / (1+t)**lam dt,

    which never exceeds the true norm.
    """
    if prob.discrete:
        raise ContractViolation("continuous_lower_bound needs a continuous problem")
    p = prob.p
    if not (prob.p == prob.q and math.isfinite(p)):
        raise ContractViolation("needs p = q < inf")
    if not z >= 1.0:
        raise DomainError("z must be >= 1")
    verdict = classify_continuous(prob)
    if verdict.status is not Status.BOUNDED:
        raise ContractViolation(f"needs a bounded problem, got {verdict.status.value}")
    eps = 1.0 / z
    tau = prob.e.mu - (prob.alpha + 1.0) / p - eps / p
    r = power_ratio_tail(tau, prob.e.lam, eps, abs_tol=1e-14, rel_tol=1e-13)
    return math.exp(eps * math.log(eps) / p) * r.value


def continuous_schur_upper_bound(prob: Problem, s: float, A: float) -> float:
    """Schur bound for the integral operator with exact Beta constants.

    Same splitting as the discrete construction with 1/s + 1/t = 1, but the
    one-variable sums are the integrals I(y), so C1 and C2 are Beta values
    and the powers of y cancel only under the balance equality. Returns +inf
    outside the admissible windows.
    """
    if prob.discrete:
        raise ContractViolation("needs a continuous problem")
    p, q, e = prob.p, prob.q, prob.e
    if not (1.0 < p <= q < math.inf):
        raise ContractViolation("needs 1 < p <= q < inf")
    if not s > 1.0:
        raise DomainError("s must exceed 1")
    if not _balanced(prob):
        return math.inf
    t = s / (s - 1.0)
    pc = p / (p - 1.0)
    tau1 = e.mu * pc / s + pc * A
    lam1 = e.lam * pc / s
    tau2 = e.nu * q / t + q * (e.nu / s + e.mu / s + A + 1.0 / pc - e.lam / s) + prob.beta
    lam2 = e.lam * q / t
    if not (tau1 > -1.0 and lam1 - tau1 - 1.0 > 0.0 and tau2 > -1.0 and lam2 - tau2 - 1.0 > 0.0):
        return math.inf
    return math.exp(ln_beta(tau1 + 1.0, lam1 - tau1 - 1.0) / pc
                    + ln_beta(tau2 + 1.0, lam2 - tau2 - 1.0) / q)


def optimize_continuous_schur(prob: Problem, grid_density: int = 64):
    """Minimise :func:`continuous_schur_upper_bound`; returns (best, s, A)."""
    from .normest import A_window, _zoom_search

    if not prob.discrete and classify_continuous(prob).status is not Status.BOUNDED:
        return math.inf, None, None

    def objective(u, w):
        t = 1.0 + math.exp(u)
        s = t / (t - 1.0)
        lo, hi = A_window(prob, s)
        if not hi > lo:
            return math.inf
        return continuous_schur_upper_bound(prob, s, lo + w * (hi - lo))

    (val, u, w), _, _ = _zoom_search(objective, (math.log(1e-3), math.log(10.0 * prob.q)), grid_density)
    if u is None or not math.isfinite(val):
        return math.inf, None, None
    t = 1.0 + math.exp(u)
    s = t / (t - 1.0)
    lo, hi = A_window(prob, s)
    return val, s, lo + w * (hi - lo)
