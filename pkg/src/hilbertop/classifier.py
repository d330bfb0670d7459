"""Exact boundedness verdicts for H_{lam,mu,nu} between weighted spaces.

Discrete criteria (sequence spaces), by shape of (p, q):

* 1 <= p <= q < inf, provided beta + 1 > -q nu:
  bounded iff lam >= mu + nu + 1 + (beta+1)/q - (alpha+1)/p and beta + 1 < q (lam - nu)
* p = 1, q = inf: bounded iff lam >= mu + nu - alpha, lam >= nu, lam >= mu - alpha
* 1 < p < inf, q = inf, provided alpha + 1 < p (mu + 1):
  bounded iff lam >= mu + nu + 1 - (alpha+1)/p and p (mu + 1 - lam) < alpha + 1
* p = q = inf, provided mu > -1: bounded iff lam >= mu + nu + 1 and lam > mu + 1

Continuous criteria replace every ``lam >= ...`` by an equality. Equalities
and the non-strict ``>=`` comparisons accept values within a relative 1e-12
of the boundary, because lam is usually a typed decimal and the critical
value is itself rounded. Strict inequalities are applied exactly.

When p = q the operator norm is B(mu + 1 - (alpha+1)/p, nu + (beta+1)/p)
for the continuous operator whenever it is bounded, and for the discrete
one under the balance condition lam = mu + nu + 1 + (beta - alpha)/p plus
the side conditions alpha + 1 >= p mu and beta + 1 <= p (1 - nu).
"""

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import ContractViolation
from .operator import Problem
from .specfun import beta as beta_fn

__all__ = [
    "Status",
    "Verdict",
    "EQUALITY_RTOL",
    "critical_lambda",
    "balance_residual",
    "classify_discrete",
    "classify_continuous",
    "classify",
    "sharp_norm",
    "sharp_norm_value",
    "sharp_side_conditions",
    "continuous_condition_systems",
    "sharp_norm_obstruction",
]

EQUALITY_RTOL = 1e-12


class Status(enum.Enum):
    BOUNDED = "bounded"
    UNBOUNDED = "unbounded"
    INAPPLICABLE = "inapplicable"


@dataclass(frozen=True)
class Verdict:
    status: Status
    theorem_tag: str
    sharp_norm: Optional[float] = None
    reason: str = ""
    advisory: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.sharp_norm is not None and self.status is not Status.BOUNDED:
            raise ValueError("sharp_norm only accompanies a bounded verdict")

    @property
    def bounded(self) -> bool:
        return self.status is Status.BOUNDED


def _inv(x):
    return 0.0 if math.isinf(x) else 1.0 / x


def critical_lambda(prob: Problem) -> float:
    """mu + nu + 1 + (beta+1)/q - (alpha+1)/p, with 1/inf read as 0."""
    e = prob.e
    return e.mu + e.nu + 1.0 + (prob.beta + 1.0) * _inv(prob.q) - (prob.alpha + 1.0) * _inv(prob.p)


def balance_residual(prob: Problem) -> float:
    return prob.e.lam - critical_lambda(prob)


def _close(x: float, y: float) -> bool:
    return abs(x - y) <= EQUALITY_RTOL * max(1.0, abs(x), abs(y))


def _at_least(x: float, y: float) -> bool:
    """Non-strict x >= y; values within rounding of the boundary count as on it."""
    return x >= y or _close(x, y)


def _balanced(prob: Problem) -> bool:
    return _close(prob.e.lam, critical_lambda(prob))


def sharp_norm_value(prob: Problem) -> float:
    """B(mu + 1 - (alpha+1)/p, nu + (beta+1)/p), without checking hypotheses."""
    p, e = prob.p, prob.e
    return beta_fn(e.mu + 1.0 - (prob.alpha + 1.0) / p, e.nu + (prob.beta + 1.0) / p)


def sharp_side_conditions(prob: Problem) -> bool:
    """alpha + 1 >= p mu and beta + 1 <= p (1 - nu)."""
    p, e = prob.p, prob.e
    return prob.alpha + 1.0 >= p * e.mu and prob.beta + 1.0 <= p * (1.0 - e.nu)


def continuous_condition_systems(prob: Problem):
    """The two equivalent strict-inequality systems for the continuous p <= q case.

    Returns ``(weights_form, exponents_form)``:
    -q nu < beta + 1 < q (lam - nu) and p (mu + 1 - lam) < alpha + 1 < p (mu + 1).
    Under the balance equality they are equivalent.
    """
    e, p, q = prob.e, prob.p, prob.q
    first = -q * e.nu < prob.beta + 1.0 < q * (e.lam - e.nu)
    second = p * (e.mu + 1.0 - e.lam) < prob.alpha + 1.0 < p * (e.mu + 1.0)
    return first, second


def _discrete_sharp(prob: Problem) -> Optional[float]:
    p, q, e = prob.p, prob.q, prob.e
    if not (p == q and 1.0 < p < math.inf):
        return None
    if not _balanced(prob):
        return None
    if not (-p * e.nu < prob.beta + 1.0 < p * (e.lam - e.nu)):
        return None
    if not sharp_side_conditions(prob):
        return None
    return sharp_norm_value(prob)


def classify_discrete(prob: Problem) -> Verdict:
    if not prob.discrete:
        raise ContractViolation("classify_discrete needs a discrete problem")
    e, p, q, a, b = prob.e, prob.p, prob.q, prob.alpha, prob.beta
    lam, mu, nu = e.lam, e.mu, e.nu
    inf = math.inf

    if p <= q < inf:
        tag = "discrete-lp-lq"
        if not b + 1.0 > -q * nu:
            return Verdict(Status.INAPPLICABLE, tag,
                           reason="beta + 1 <= -q*nu: no known criterion when this weight precondition fails")
        ok = _at_least(lam, critical_lambda(prob)) and b + 1.0 < q * (lam - nu)
        # necessary condition obtained from the adjoint; implied by the two above
        adj = a + 1.0 > p * (mu + 1.0 - lam)
        advisory = {"adjoint_condition": adj, "disagrees": ok and not adj}
        if not ok:
            return Verdict(Status.UNBOUNDED, tag, advisory=advisory)
        return Verdict(Status.BOUNDED, tag, sharp_norm=_discrete_sharp(prob), advisory=advisory)

    if p == 1.0 and q == inf:
        ok = _at_least(lam, mu + nu - a) and _at_least(lam, nu) and _at_least(lam, mu - a)
        return Verdict(Status.BOUNDED if ok else Status.UNBOUNDED, "discrete-l1-linf")

    if 1.0 < p < inf and q == inf:
        tag = "discrete-lp-linf"
        if not a + 1.0 < p * (mu + 1.0):
            return Verdict(Status.INAPPLICABLE, tag,
                           reason="alpha + 1 >= p*(mu + 1): outside the known criterion")
        ok = _at_least(lam, critical_lambda(prob)) and p * (mu + 1.0 - lam) < a + 1.0
        return Verdict(Status.BOUNDED if ok else Status.UNBOUNDED, tag)

    if p == inf and q == inf:
        tag = "discrete-linf-linf"
        if not mu > -1.0:
            return Verdict(Status.INAPPLICABLE, tag, reason="mu <= -1: outside the known criterion")
        ok = _at_least(lam, mu + nu + 1.0) and lam > mu + 1.0
        return Verdict(Status.BOUNDED if ok else Status.UNBOUNDED, tag)

    return Verdict(Status.INAPPLICABLE, "outside-p-gt-q",
                   reason="p > q is not covered by any known criterion")


def classify_continuous(prob: Problem) -> Verdict:
    if prob.discrete:
        raise ContractViolation("classify_continuous needs a continuous problem")
    e, p, q = prob.e, prob.p, prob.q
    inf = math.inf
    advisory = {"equality_residual": balance_residual(prob)}

    if p <= q < inf:
        tag = "continuous-lp-lq"
        ok = _balanced(prob) and continuous_condition_systems(prob)[0]
        if not ok:
            return Verdict(Status.UNBOUNDED, tag, advisory=advisory)
        sharp = sharp_norm_value(prob) if p == q else None
        return Verdict(Status.BOUNDED, tag, sharp_norm=sharp, advisory=advisory)

    if 1.0 < p < inf and q == inf:
        tag = "continuous-lp-linf"
        ok = _balanced(prob) and 0.0 < e.nu < e.lam
        return Verdict(Status.BOUNDED if ok else Status.UNBOUNDED, tag, advisory=advisory)

    return Verdict(Status.INAPPLICABLE, "outside-continuous",
                   reason="no known criterion for this (p, q) shape", advisory=advisory)


def classify(prob: Problem) -> Verdict:
    return classify_discrete(prob) if prob.discrete else classify_continuous(prob)


def sharp_norm(prob: Problem) -> Optional[float]:
    """Exact operator norm when a sharp-norm result applies, else None."""
    return classify(prob).sharp_norm


def sharp_norm_obstruction(prob: Problem) -> Optional[str]:
    """Why no exact norm formula applies, or None when one does."""
    verdict = classify(prob)
    if verdict.status is not Status.BOUNDED:
        return f"problem is {verdict.status.value}"
    if verdict.sharp_norm is not None:
        return None
    p, e = prob.p, prob.e
    if not (prob.p == prob.q and 1.0 < p < math.inf):
        return "an exact norm is only known for p = q"
    if not _balanced(prob):
        return (f"balance condition lam = mu + nu + 1 + (beta - alpha)/p fails "
                f"(residual {balance_residual(prob)!r})")
    if not (-p * e.nu < prob.beta + 1.0 < p * (e.lam - e.nu)):
        return "weight window -p*nu < beta + 1 < p*(lam - nu) fails"
    return "side conditions alpha + 1 >= p*mu and beta + 1 <= p*(1 - nu) fail"
