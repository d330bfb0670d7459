"""Weighted sequence spaces l^p_theta and l^inf on the index set 1, 2, 3, ...

A :class:`TruncatedSequence` stores a_1..a_N densely. Its ``tail_note``,
when present, is a certified upper bound on the weighted p-th power mass
of the omitted terms; consumers either propagate it or say they drop it.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ContractViolation, DivergentSeries, DomainError

__all__ = [
    "SpaceIndex",
    "TruncatedSequence",
    "weighted_norm",
    "sup_norm",
    "extremal_sequence",
    "power_tail_bound",
]


@dataclass(frozen=True)
class SpaceIndex:
    """Exponent p in [1, inf] and weight exponent theta (unused when p = inf)."""

    p: float
    theta: float = 0.0

    def __post_init__(self):
        p = float(self.p)
        if not p >= 1.0:
            raise DomainError(f"p must be >= 1, got {p!r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "theta", float(self.theta))

    @property
    def finite(self) -> bool:
        return math.isfinite(self.p)

    @property
    def conjugate(self) -> float:
        if self.p == 1.0:
            return math.inf
        if not self.finite:
            return 1.0
        return self.p / (self.p - 1.0)


@dataclass(frozen=True)
class TruncatedSequence:
    values: np.ndarray
    tail_note: Optional[float] = None
    start_index: int = field(default=1)

    def __post_init__(self):
        v = np.array(self.values, dtype=float, copy=True).ravel()
        if v.size < 1:
            raise DomainError("a truncated sequence needs at least one term")
        if not np.all(np.isfinite(v)):
            raise DomainError("sequence entries must be finite")
        if self.start_index != 1:
            raise DomainError("sequences start at index 1")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size

    @property
    def indices(self) -> np.ndarray:
        return np.arange(1, self.values.size + 1, dtype=float)

    def scaled(self, c: float) -> "TruncatedSequence":
        tail = None if self.tail_note is None else abs(c) * self.tail_note
        return TruncatedSequence(c * self.values, tail)


def _pnorm(w: np.ndarray, p: float) -> float:
    # scale by the largest entry so w**p neither overflows nor underflows
    top = float(np.max(w)) if w.size else 0.0
    if top == 0.0:
        return 0.0
    if p == 1.0:
        return math.fsum(w)
    return top * math.fsum((w / top) ** p) ** (1.0 / p)


def weighted_norm(a: TruncatedSequence, s: SpaceIndex) -> float:
    """(sum_{m<=N} m**theta |a_m|**p)**(1/p) over the stored terms (tail dropped)."""
    if not s.finite:
        raise ContractViolation("weighted_norm needs finite p; use sup_norm for l^inf")
    w = np.abs(a.values)
    if s.theta != 0.0:
        w = w * np.exp((s.theta / s.p) * np.log(a.indices))
    return _pnorm(w, s.p)


def sup_norm(a: TruncatedSequence) -> float:
    return float(np.max(np.abs(a.values)))


def power_tail_bound(exponent: float, N: int) -> float:
    """Upper bound N**(exponent+1) / (-exponent-1) on sum_{n>N} n**exponent."""
    if not exponent < -1.0:
        raise DivergentSeries(f"sum of n**{exponent} diverges")
    if N < 1:
        raise DomainError("N must be a positive integer")
    return math.exp((exponent + 1.0) * math.log(N)) / (-exponent - 1.0)


def extremal_sequence(eps: float, p: float, alpha: float, N: int) -> TruncatedSequence:
    """Test sequence a_n = n**(-(alpha+1)/p - eps/p), n = 1..N.

    Its weighted p-th power mass is sum n**(-1-eps); ``tail_note`` bounds the
    part beyond N by N**(-eps)/eps.
    """
    if not eps > 0.0:
        raise DomainError("eps must be positive")
    if not p >= 1.0:
        raise DomainError("p must be >= 1")
    if N < 1:
        raise DomainError("N must be a positive integer")
    n = np.arange(1, N + 1, dtype=float)
    vals = np.exp(-((alpha + 1.0 + eps) / p) * np.log(n))
    return TruncatedSequence(vals, power_tail_bound(-1.0 - eps, N))
