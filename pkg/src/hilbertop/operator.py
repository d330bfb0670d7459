"""Applying the Hilbert-type operator and its weighted adjoint to truncated
sequences.

(H a)(n) = sum_m m**mu n**nu / (m + n)**lam * a_m. Inputs are taken as
exactly their stored terms. Each output entry is an independent dot
product accumulated with ``math.fsum``, so results are correctly rounded
sums of the rounded products and do not depend on evaluation order.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation
from .kernel import Exponents
from .seqspace import SpaceIndex, TruncatedSequence

__all__ = [
    "Setting",
    "Problem",
    "apply",
    "apply_adjoint",
    "duality_gap",
    "assemble_l2_matrix",
]

_ROW_BLOCK = 256


class Setting(enum.Enum):
    DISCRETE = "discrete"
    CONTINUOUS = "continuous"


@dataclass(frozen=True)
class Problem:
    """H_{lam,mu,nu} viewed as a map from l^p_alpha (or L^p_alpha) to l^q_beta."""

    e: Exponents
    source: SpaceIndex
    target: SpaceIndex
    setting: Setting = Setting.DISCRETE

    @classmethod
    def of(cls, lam, mu, nu, p, q, alpha=0.0, beta=0.0, continuous=False) -> "Problem":
        return cls(
            Exponents(lam, mu, nu),
            SpaceIndex(p, alpha),
            SpaceIndex(q, beta),
            Setting.CONTINUOUS if continuous else Setting.DISCRETE,
        )

    @property
    def p(self) -> float:
        return self.source.p

    @property
    def q(self) -> float:
        return self.target.p

    @property
    def alpha(self) -> float:
        return self.source.theta

    @property
    def beta(self) -> float:
        return self.target.theta

    @property
    def discrete(self) -> bool:
        return self.setting is Setting.DISCRETE

    def as_dict(self) -> dict:
        return {
            "lambda": self.e.lam, "mu": self.e.mu, "nu": self.e.nu,
            "p": self.p, "q": self.q, "alpha": self.alpha, "beta": self.beta,
            "continuous": not self.discrete,
        }


def _weighted_matvec(log_row_w, log_col_w, lam, x):
    """y_n = fsum_m exp(log_row_w[n] + log_col_w[m] - lam*log(m+n)) * x_m."""
    n_out = log_row_w.size
    n_in = x.size
    cols = np.arange(1, n_in + 1, dtype=float)
    out = np.empty(n_out)
    for start in range(0, n_out, _ROW_BLOCK):
        rows = np.arange(start + 1, min(n_out, start + _ROW_BLOCK) + 1, dtype=float)
        logk = log_row_w[start:start + rows.size, None] + log_col_w[None, :] \
            - lam * np.log(rows[:, None] + cols[None, :])
        prods = np.exp(logk) * x[None, :]
        for i, row in enumerate(prods):
            out[start + i] = math.fsum(row)
    return out


def apply(a: TruncatedSequence, e: Exponents, out_len: int) -> TruncatedSequence:
    """(H a)(n) for n = 1..out_len from the stored terms of ``a`` (tail dropped)."""
    if out_len < 1:
        raise ContractViolation("out_len must be a positive integer")
    m = a.indices
    n = np.arange(1, out_len + 1, dtype=float)
    return TruncatedSequence(_weighted_matvec(e.nu * np.log(n), e.mu * np.log(m), e.lam, a.values))


def apply_adjoint(a: TruncatedSequence, prob: Problem, out_len: int) -> TruncatedSequence:
    """Adjoint with respect to the weighted pairings of l^p_alpha and l^q_beta.

    (H* a)(n) = sum_m m**(nu+beta) n**(mu-alpha) / (m + n)**lam * a_m.
    """
    if not prob.discrete:
        raise ContractViolation("apply_adjoint is defined for the discrete setting")
    if out_len < 1:
        raise ContractViolation("out_len must be a positive integer")
    e = prob.e
    m = a.indices
    n = np.arange(1, out_len + 1, dtype=float)
    return TruncatedSequence(_weighted_matvec(
        (e.mu - prob.alpha) * np.log(n), (e.nu + prob.beta) * np.log(m), e.lam, a.values))


def duality_gap(a: TruncatedSequence, b: TruncatedSequence, prob: Problem) -> float:
    """Relative mismatch between <H a, b>_beta and <a, H* b>_alpha on one finite box."""
    Ha = apply(a, prob.e, len(b)).values
    Hb = apply_adjoint(b, prob, len(a)).values
    lhs = math.fsum(np.exp(prob.beta * np.log(b.indices)) * Ha * b.values)
    rhs = math.fsum(np.exp(prob.alpha * np.log(a.indices)) * a.values * Hb)
    return abs(lhs - rhs) / max(1.0, abs(lhs))


def assemble_l2_matrix(prob: Problem, N: int) -> np.ndarray:
    """N x N matrix M[n-1, m-1] = n**(beta/2) k(m, n) m**(-alpha/2).

    For p = q = 2 the N-section of H : l^2_alpha -> l^2_beta has the same
    norm as M on plain l^2.
    """
    if prob.p != 2.0 or prob.q != 2.0:
        raise ContractViolation("assemble_l2_matrix needs p = q = 2")
    if N < 1:
        raise ContractViolation("N must be a positive integer")
    e = prob.e
    idx = np.arange(1, N + 1, dtype=float)
    logi = np.log(idx)
    logk = (e.nu + prob.beta / 2.0) * logi[:, None] \
        + (e.mu - prob.alpha / 2.0) * logi[None, :] \
        - e.lam * np.log(idx[:, None] + idx[None, :])
    return np.exp(logk)
