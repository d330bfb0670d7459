"""The kernel k(m, n) = m**mu * n**nu / (m + n)**lam and the estimates for
the one-variable sums and integrals it generates.

S(n) = sum_{m>=1} m**tau / (m + n)**lam  and  I(y) = int_0^inf x**tau / (x + y)**lam dx
are the workhorses of every Schur-type bound in :mod:`hilbertop.normest`.
All powers go through exp/log so nothing overflows for m, n <= 1e12 and
exponents up to 50 in magnitude.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import DivergentIntegral, DivergentSeries, DomainError
from .quadrature import power_ratio_tail
from .specfun import beta

__all__ = [
    "Exponents",
    "kernel_eval",
    "integral_I_closed",
    "SumBracket",
    "sum_S_partial",
    "sum_upper_bound",
    "power_sum_constant",
    "sum_lower_bound",
    "kernel_sup_check",
]


@dataclass(frozen=True)
class Exponents:
    """Kernel exponents; ``lam`` is the homogeneity of the denominator."""

    lam: float
    mu: float
    nu: float

    def __post_init__(self):
        for name in ("lam", "mu", "nu"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)


def kernel_eval(m, n, e: Exponents):
    """Evaluate k(m, n) elementwise; m and n broadcast like numpy arrays."""
    m = np.asarray(m, dtype=float)
    n = np.asarray(n, dtype=float)
    if np.any(m <= 0) or np.any(n <= 0):
        raise DomainError("kernel arguments must be positive")
    out = np.exp(e.mu * np.log(m) + e.nu * np.log(n) - e.lam * np.log(m + n))
    return float(out) if out.ndim == 0 else out


def _check_series(tau, lam):
    if not (lam - tau - 1.0 > 0.0):
        raise DivergentSeries(f"sum of m**{tau}/(m+n)**{lam} diverges (need lam - tau - 1 > 0)")


def integral_I_closed(y: float, tau: float, lam: float) -> float:
    """Closed form of int_0^inf x**tau / (x + y)**lam dx = y**(tau+1-lam) B(tau+1, lam-tau-1)."""
    if not y > 0:
        raise DomainError("y must be positive")
    if not (tau > -1.0 and lam - tau - 1.0 > 0.0):
        raise DivergentIntegral(f"I(y) = +inf for tau={tau}, lam={lam}")
    return math.exp((tau + 1.0 - lam) * math.log(y)) * beta(tau + 1.0, lam - tau - 1.0)


class SumBracket(NamedTuple):
    partial: float
    tail_hi: float
    terms: int
    tail_lo: float = 0.0

    @property
    def lower(self) -> float:
        return self.partial + self.tail_lo

    @property
    def upper(self) -> float:
        return self.partial + self.tail_hi


def _decreasing_from(n, tau, lam):
    # the summand x**tau/(x+n)**lam is nonincreasing for x >= tau*n/(lam-tau)
    return max(0.0, tau * n / (lam - tau))


def sum_S_partial(n: int, tau: float, lam: float, terms: int = 10_000) -> SumBracket:
    """Certified bracket partial + tail_lo <= S(n) <= partial + tail_hi.

    ``terms`` is raised, if needed, so that the omitted tail starts where
    the summand is decreasing; the tail then lies between the integrals
    from ``terms + 1`` and from ``terms`` to infinity (each widened by its
    quadrature error estimate).
    """
    _check_series(tau, lam)
    if n < 1 or terms < 1:
        raise DomainError("n and terms must be positive integers")
    T = max(int(terms), math.ceil(abs(tau / (lam - tau)) * n) + 1)
    m = np.arange(1, T + 1, dtype=float)
    partial = math.fsum(np.exp(tau * np.log(m) - lam * np.log(m + n)))
    r = power_ratio_tail(tau, lam, T / n)
    scale = math.exp((tau + 1.0 - lam) * math.log(n))
    tail_hi = scale * (r.value + r.abs_error_estimate)
    r_lo = power_ratio_tail(tau, lam, (T + 1) / n)
    tail_lo = scale * max(0.0, r_lo.value - r_lo.abs_error_estimate)
    return SumBracket(partial, tail_hi, T, tail_lo)


def power_sum_constant(tau: float, lam: float) -> Optional[float]:
    """Constant C with S(n) <= C * n**(tau + 1 - lam) for every n >= 1.

    For -1 < tau <= 0 this is B(tau+1, lam-tau-1). For tau > 0 the summand
    is split at its maximum; writing tau = omega + tau' with omega a
    nonnegative integer and tau' in (-1, 0] gives
    C = (lam/(lam-tau))**tau * (tau/(lam-tau))**(1-lam) + B(tau'+1, lam-tau-1).
    Returns None for tau <= -1, where no Beta-form bound is available.
    """
    _check_series(tau, lam)
    if tau <= -1.0:
        return None
    if tau <= 0.0:
        return beta(tau + 1.0, lam - tau - 1.0)
    omega = math.ceil(tau)
    tau_p = tau - omega
    head = math.exp(
        tau * math.log(lam / (lam - tau)) + (1.0 - lam) * math.log(tau / (lam - tau))
    )
    return head + beta(tau_p + 1.0, lam - tau - 1.0)


def sum_upper_bound(n: int, tau: float, lam: float) -> Optional[float]:
    """Upper bound C * n**(tau+1-lam) on S(n); None when tau <= -1."""
    c = power_sum_constant(tau, lam)
    if c is None:
        return None
    return c * math.exp((tau + 1.0 - lam) * math.log(n))


def sum_lower_bound(n: int, tau: float, lam: float) -> float:
    """Lower bound on S(n) by the integral over [|tau/(lam-tau)| n + 1, inf).

    The quadrature error estimate is subtracted so the result stays a bound.
    """
    _check_series(tau, lam)
    if n < 1:
        raise DomainError("n must be a positive integer")
    x0 = abs(tau / (lam - tau)) * n + 1.0
    r = power_ratio_tail(tau, lam, x0 / n)
    scale = math.exp((tau + 1.0 - lam) * math.log(n))
    return scale * max(0.0, r.value - r.abs_error_estimate)


def kernel_sup_check(a: float, b: float, lam: float, grid: int):
    """Check boundedness of m**a n**(-b) / (m+n)**lam over the positive integers.

    Returns ``(holds, observed_sup)``: ``holds`` is the sufficient condition
    lam >= a - b, lam >= a, lam >= -b; ``observed_sup`` is the maximum of
    the quantity over 1 <= m, n <= grid.
    """
    if grid < 1:
        raise DomainError("grid must be a positive integer")
    holds = lam >= a - b and lam >= a and lam >= -b
    idx = np.arange(1, grid + 1, dtype=float)
    logs = np.log(idx)
    best = -math.inf
    step = max(1, 2_000_000 // grid)
    for start in range(0, grid, step):
        lm = logs[start:start + step, None]
        vals = a * lm - b * logs[None, :] - lam * np.log(idx[start:start + step, None] + idx[None, :])
        best = max(best, float(vals.max()))
    return holds, math.exp(best)
