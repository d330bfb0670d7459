"""Accurate finite sums of smooth, slowly varying sequences.

``smooth_sum(f, a, b)`` returns sum_{n=a}^{b} f(n) at a cost independent of
b - a. The first ``head`` terms are added directly; the rest is

    int_c^b f + (f(c) + f(b))/2 + sum_k g_k (nabla^k f(b) + (-1)^k Delta^k f(c))

(Gregory's end corrections, with finite differences taken at integer
points inside the range), where the integral is done by Gauss-Legendre
panels in the variable s = log x. This is exact up to rounding for the
power-type summands used here, x**tau * (x + y)**(-lam), whose derivatives
decay like x**-k once x >= head.
"""

import math
from fractions import Fraction

import numpy as np

__all__ = ["smooth_sum", "power_kernel_sum"]

# |G_{k+1}| for k = 1..9 (Gregory coefficients)
_GREGORY = np.array([float(c) for c in (
    Fraction(1, 12), Fraction(1, 24), Fraction(19, 720), Fraction(3, 160),
    Fraction(863, 60480), Fraction(275, 24192), Fraction(33953, 3628800),
    Fraction(8183, 1036800), Fraction(3250433, 479001600),
)])
_ORDER = _GREGORY.size
_GL_X, _GL_W = np.polynomial.legendre.leggauss(20)

HEAD = 64


def _log_integral(f, c, b):
    """int_c^b f(x) dx over [c, b], c > 0, as a panel rule in s = log x."""
    lc, lb = math.log(c), math.log(b)
    panels = max(1, math.ceil(2.0 * (lb - lc)))
    edges = np.linspace(lc, lb, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    s = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
    x = np.exp(s)
    w = (half[:, None] * _GL_W[None, :]).ravel() * x
    return np.sum(f(x) * w, axis=-1)


def smooth_sum(f, a: int, b: int, head: int = HEAD):
    """sum_{n=a}^{b} f(n) for a vectorised ``f``.

    ``f`` receives a 1-d float array of indices and returns an array whose
    last axis runs over those indices; leading axes are carried through, so
    a whole family of sums is evaluated at once.
    """
    a, b = int(a), int(b)
    if b < a:
        raise ValueError("empty range")
    if b - a + 1 <= head + 2 * (_ORDER + 1):
        return np.sum(f(np.arange(a, b + 1, dtype=float)), axis=-1)
    c = a + head
    total = np.sum(f(np.arange(a, c, dtype=float)), axis=-1)
    fw = f(np.arange(c, c + _ORDER + 1, dtype=float))
    bw = f(np.arange(b - _ORDER, b + 1, dtype=float))
    total = total + _log_integral(f, c, b) + 0.5 * (fw[..., 0] + bw[..., -1])
    for k in range(1, _ORDER + 1):
        fwd = np.diff(fw, k, axis=-1)[..., 0]
        bwd = np.diff(bw, k, axis=-1)[..., -1]
        total = total + _GREGORY[k - 1] * (bwd + (-1) ** k * fwd)
    return total


def power_kernel_sum(y, tau: float, lam: float, N: int):
    """sum_{m=1}^{N} m**tau / (m + y)**lam for each y in the array ``y``."""
    y = np.atleast_1d(np.asarray(y, dtype=float))

    def term(m):
        return np.exp(tau * np.log(m)[None, :] - lam * np.log(m[None, :] + y[:, None]))

    return smooth_sum(term, 1, N)
