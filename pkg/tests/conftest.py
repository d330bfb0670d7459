import math

import pytest

from hilbertop.operator import Problem


def classical(p, q=None, lam=1.0, continuous=False, **kw):
    return Problem.of(lam, 0.0, 0.0, p, p if q is None else q, continuous=continuous, **kw)


def csc_norm(p):
    return math.pi / math.sin(math.pi / p)


@pytest.fixture
def classical_p2():
    return classical(2.0)
