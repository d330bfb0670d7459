"""Log-Gamma and the Euler Beta function for positive real arguments."""

import math

from .errors import DomainError

__all__ = ["ln_gamma", "ln_beta", "beta"]


def ln_gamma(x: float) -> float:
    """Return ln Gamma(x) for x > 0."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"ln_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def ln_beta(x: float, y: float) -> float:
    """Return ln B(x, y) for x, y > 0."""
    x, y = float(x), float(y)
    if not (x > 0.0 and y > 0.0):
        raise DomainError(f"Beta integral diverges for x={x!r}, y={y!r}")
    return math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y)


def beta(x: float, y: float) -> float:
    """Return B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y), computed in log space."""
    return math.exp(ln_beta(x, y))
