import math

import numpy as np
import pytest
import scipy.signal
import scipy.special
from hypothesis import given, settings, strategies as st

from conftest import classical, csc_norm
from hilbertop.classifier import Status, classify_discrete, sharp_norm
from hilbertop.errors import ContractViolation, DomainError, InternalInconsistency
from hilbertop.normest import (
    A_window,
    D_window,
    NormBracket,
    SchurParams,
    _extremal_dense,
    _extremal_summed,
    extremal_lower_bound,
    norm_bracket,
    optimize_schur,
    sharp_schur_params,
    rayleigh_quotient,
    schur_evaluate,
    schur_evaluate_p1,
    schur_upper_bound,
    schur_upper_bound_p1,
    spectral_norm_l2,
)
from hilbertop.operator import Problem, assemble_l2_matrix
from hilbertop.seqspace import TruncatedSequence

# Schur optimum for lam = 2, p = q = 2 (no sharp norm), recorded from the grid search
LAM2_SCHUR_BEST = 1.6121388624401127


def test_schur_params_validation():
    with pytest.raises(DomainError):
        SchurParams(2.0, 3.0, 0.0)
    with pytest.raises(DomainError):
        SchurParams(1.0, math.inf, 0.0)
    sp = SchurParams.from_t(4.0, -0.1)
    assert sp.s == pytest.approx(4 / 3)


def test_schur_classical_p2_is_pi():
    prob = classical(2.0)
    ev = schur_evaluate(prob, SchurParams(2.0, 2.0, -0.25))
    assert ev.bound == pytest.approx(math.pi, rel=1e-14)
    assert ev.c1 == pytest.approx(math.pi) and ev.c2 == pytest.approx(math.pi)
    assert ev.beta_form1 and ev.beta_form2


def test_schur_inadmissible_is_inf():
    prob = classical(2.0)
    lo, hi = A_window(prob, 2.0)
    assert schur_upper_bound(prob, SchurParams(2.0, 2.0, hi + 0.1)) == math.inf
    assert schur_upper_bound(prob, SchurParams(2.0, 2.0, lo - 0.1)) == math.inf


def test_schur_classical_p4_is_pi_sqrt2():
    prob = classical(4.0)
    assert schur_upper_bound(prob, SchurParams(4 / 3, 4.0, -3 / 16)) == pytest.approx(math.pi * math.sqrt(2), rel=1e-13)


def test_schur_shape_errors():
    with pytest.raises(ContractViolation):
        schur_upper_bound(classical(1.0), SchurParams(2.0, 2.0, 0.0))
    with pytest.raises(ContractViolation):
        schur_upper_bound(Problem.of(1, 0, 0, 3, 2), SchurParams(2.0, 2.0, 0.0))
    with pytest.raises(ContractViolation):
        schur_upper_bound_p1(classical(2.0), SchurParams.from_s(2.0, 0.0))


def test_schur_positive_tau_branch_fires():
    # A large enough that mu p'/s + p' A > 0 uses the split constant
    prob = Problem.of(3.0, 0.5, 0.5, 2, 2)
    s = 2.0
    lo, hi = A_window(prob, s)
    A = 0.5 * (max(lo, -0.25) + hi) if hi > -0.25 else None
    assert A is not None and A > -0.25
    ev = schur_evaluate(prob, SchurParams(s, 2.0, A))
    assert ev.admissible and not ev.beta_form1 and math.isfinite(ev.bound)


@pytest.mark.parametrize("p", [4 / 3, 2.0, 3.0, 4.0])
def test_balanced_choice_is_sharp(p):
    prob = classical(p)
    assert schur_upper_bound(prob, sharp_schur_params(prob)) == pytest.approx(csc_norm(p), rel=1e-12)


@pytest.mark.parametrize("lam,mu,nu,p,alpha,beta", [
    (1.25, 0.0, 0.0, 2.0, 0.0, 0.5),
    (1.5, 0.25, 0.25, 3.0, 0.5, 0.5),
    (1.0, 0.0, 0.0, 2.0, 0.5, 0.5),
])
def test_balanced_choice_is_sharp_weighted(lam, mu, nu, p, alpha, beta):
    prob = Problem.of(lam, mu, nu, p, p, alpha, beta)
    ref = sharp_norm(prob)
    assert ref is not None
    assert schur_upper_bound(prob, sharp_schur_params(prob)) == pytest.approx(ref, rel=1e-12)


def test_p1_example_from_corrected_tuple():
    # beta = -0.5 keeps beta + 1 > -q nu; s = 4 admits D in (-1/4, 0)
    prob = Problem.of(1.0, 0.0, 0.0, 1, 1, 0.0, -0.5)
    assert classify_discrete(prob).status is Status.BOUNDED
    lo, hi = D_window(prob, 4.0)
    assert (lo, hi) == pytest.approx((-0.25, 0.0))
    assert math.isfinite(schur_upper_bound_p1(prob, SchurParams.from_s(4.0, -0.1)))


def test_p1_listed_tuple_is_outside_the_criterion():
    # beta = -1.5 violates beta + 1 > -q nu; no (s, D) is admissible either
    prob = Problem.of(1.0, 0.0, 0.0, 1, 1, 0.0, -1.5)
    assert classify_discrete(prob).status is Status.INAPPLICABLE
    finite = [schur_upper_bound_p1(prob, SchurParams.from_s(s, D))
              for s in np.linspace(1.01, 20, 100) for D in np.linspace(-3, 3, 100)]
    assert not any(math.isfinite(v) for v in finite)
    assert optimize_schur(prob).best == math.inf


def _p1_grid(prob):
    return [schur_upper_bound_p1(prob, SchurParams.from_s(s, D))
            for s in np.linspace(1.01, 20, 100) for D in np.linspace(-3, 3, 100)]


def test_p1_feasibility_oracle():
    vals = _p1_grid(Problem.of(1.0, 0.0, 0.0, 1, 2, 0.0, -0.5))
    assert sum(math.isfinite(v) for v in vals) > 0


def test_unbounded_p1_every_grid_point_inf():
    prob = classical(1.0)
    assert classify_discrete(prob).status is Status.UNBOUNDED
    assert all(v == math.inf for v in _p1_grid(prob))


def test_p1_sup_constant_dominates_integer_grid():
    prob = Problem.of(1.0, 0.0, 0.0, 1, 1, 0.0, -0.5)
    s, D = 4.0, -0.1
    ev = schur_evaluate_p1(prob, SchurParams.from_s(s, D))
    a, c = (1.0 - 0.0) / s + D, 0.0 / s - D
    idx = np.arange(1, 2001, dtype=float)
    m, n = idx[:, None], idx[None, :]
    grid_sup = np.max(np.exp(a * np.log(m) + c * np.log(n) - (1.0 / s) * np.log(m + n)))
    assert grid_sup <= ev.c1 * (1 + 1e-12)
    assert grid_sup == pytest.approx(ev.c1, rel=1e-6)


@pytest.mark.parametrize("p", [2.0, 4.0])
def test_optimize_schur_reaches_sharp(p):
    opt = optimize_schur(classical(p), 64)
    assert abs(opt.best - csc_norm(p)) < 1e-6
    assert opt.best >= csc_norm(p) * (1 - 1e-13)


def test_optimize_schur_lam2_recorded():
    opt = optimize_schur(classical(2.0, lam=2.0), 64)
    assert opt.best == pytest.approx(LAM2_SCHUR_BEST, rel=1e-6)


def test_optimize_schur_p1_bounded():
    opt = optimize_schur(Problem.of(1.0, 0.0, 0.0, 1, 2, 0.0, -0.5), 32)
    assert math.isfinite(opt.best) and opt.params.case == "D"


def test_optimize_schur_reports_unbounded():
    opt = optimize_schur(classical(1.0))
    assert opt.best == math.inf and "unbounded" in opt.diagnostics
    with pytest.raises(DomainError):
        optimize_schur(classical(2.0), 1)


@pytest.mark.parametrize("prob", [
    classical(2.0), classical(3.0, lam=1.5), Problem.of(2.0, 0.3, 0.2, 2, 2, 0.5, -0.25), Problem.of(2.5, 0, 1, 1.5, 1.5),
])
def test_extremal_dense_and_summed_agree(prob):
    for eps in (0.3, 0.01):
        for N, L in ((3000, 3000), (5000, 800)):
            d = _extremal_dense(prob, eps, N, L)
            f = _extremal_summed(prob, eps, N, L)
            assert f == pytest.approx(d, rel=1e-12)


def _fft_quotient(eps, N):
    m = np.arange(1, N + 1, dtype=float)
    a = m ** (-(1 + eps) / 2)
    Ha = scipy.signal.fftconvolve(a[::-1], 1.0 / np.arange(2, 2 * N + 1, dtype=float))[N - 1:2 * N - 1]
    return math.sqrt(math.fsum(Ha**2) / math.fsum(a**2))


@pytest.mark.parametrize("eps", [1e-1, 1e-2, 1e-3])
def test_extremal_large_n_matches_fft_oracle(eps):
    N = 10**5
    assert extremal_lower_bound(classical(2.0), eps, N) == pytest.approx(_fft_quotient(eps, N), rel=1e-9)


def _digamma_witness(eps, N):
    m = np.arange(1, N + 1, dtype=float)
    w = m ** (-1.0 - eps)
    num = np.sum(w * (scipy.special.digamma(m + N + 1) - scipy.special.digamma(m + 1)))
    return num / np.sum(w)


@pytest.mark.parametrize("eps", [1e-1, 1e-2, 1e-3])
def test_p1_witness_matches_digamma_oracle(eps):
    N = math.ceil(eps**-2)
    assert extremal_lower_bound(classical(1.0), eps, N) == pytest.approx(_digamma_witness(eps, N), rel=1e-11)


def test_extremal_examples():
    prob = classical(2.0)
    v1 = extremal_lower_bound(prob, 1e-1, 10**4)
    v3 = extremal_lower_bound(prob, 1e-3, 10**4)
    assert v1 < math.pi and v3 > v1
    with pytest.raises(ContractViolation):
        extremal_lower_bound(Problem.of(1, 0, 0, 2, 3), 0.1, 10)
    with pytest.raises(DomainError):
        extremal_lower_bound(prob, 0.0, 10)


def test_rayleigh_unit_vector():
    q = rayleigh_quotient(TruncatedSequence([1.0]), classical(2.0), 10**6)
    assert q == pytest.approx(math.sqrt(math.pi**2 / 6 - 1), abs=1e-6)


def test_rayleigh_single_support_is_column_norm():
    prob = Problem.of(2.0, 0.5, 0.25, 2, 2, 0.3, 0.1)
    a = TruncatedSequence([0.0, 0.0, 1.0])
    n = np.arange(1, 501, dtype=float)
    col = 3.0**0.5 * n**0.25 / (3.0 + n) ** 2
    ref = math.sqrt(math.fsum(n**0.1 * col**2)) / 3.0 ** (0.3 / 2)
    assert rayleigh_quotient(a, prob, 500) == pytest.approx(ref, rel=1e-13)


def test_rayleigh_errors_and_scaling():
    prob = classical(2.0)
    a = TruncatedSequence(np.linspace(0.1, 1, 20))
    assert rayleigh_quotient(a.scaled(2.0), prob, 50) == pytest.approx(rayleigh_quotient(a, prob, 50), rel=1e-14)
    with pytest.raises(DomainError):
        rayleigh_quotient(TruncatedSequence([0.0]), prob, 5)


BOUNDED_PP = [
    classical(2.0), classical(3.0), classical(2.0, lam=2.0),
    Problem.of(2.0, 0.3, 0.2, 2, 2, 0.5, -0.25), Problem.of(3.0, 0.5, 0.25, 2, 2, 0.5, 1.0),
]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, len(BOUNDED_PP) - 1), st.integers(0, 2**32 - 1), st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_soundness_lower_below_every_admissible_upper(k, seed, tfrac, wfrac):
    prob = BOUNDED_PP[k]
    rng = np.random.default_rng(seed)
    a = TruncatedSequence(rng.random(rng.integers(1, 200)))
    low = rayleigh_quotient(a, prob, 300)
    t = 1.0 + 10.0 * prob.q * tfrac
    s = t / (t - 1.0)
    lo, hi = A_window(prob, s)
    if hi > lo:
        up = schur_upper_bound(prob, SchurParams(s, t, lo + wfrac * (hi - lo)))
        assert low <= up + 1e-9
    assert low <= optimize_schur(prob, 16).best + 1e-9


def test_spectral_examples():
    assert spectral_norm_l2(classical(2.0), 1) == pytest.approx(0.5, rel=1e-15)
    vals = [spectral_norm_l2(classical(2.0), N) for N in (64, 256, 1024)]
    assert vals == sorted(vals) and vals[-1] < math.pi


@pytest.mark.parametrize("prob,N", [(classical(2.0), 64), (classical(2.0), 256), (classical(2.0, lam=2.0), 256),
                                    (Problem.of(2.0, 0.3, 0.2, 2, 2, 0.5, -0.25), 200)])
def test_spectral_matches_dense_svd(prob, N):
    ref = np.linalg.svd(assemble_l2_matrix(prob, N), compute_uv=False)[0]
    assert spectral_norm_l2(prob, N) == pytest.approx(ref, abs=1e-8)


def test_spectral_monotone_in_n():
    prob = Problem.of(1.5, 0.1, 0.1, 2, 2, 0.2, 0.2)
    vals = [spectral_norm_l2(prob, N) for N in (1, 2, 5, 17, 60, 200)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_bracket_classical_contains_pi_and_shrinks():
    prob = classical(2.0)
    short = norm_bracket(prob, [(1e-1, 512)])
    long = norm_bracket(prob, [(1e-1, 512), (1e-2, 2048), (1e-3, 2048)])
    for br in (short, long):
        assert br.contains(math.pi)
        assert br.upper == pytest.approx(math.pi, rel=1e-14) and br.upper_method == "sharp"
    assert long.width < short.width


def test_bracket_lam2_endpoints():
    prob = classical(2.0, lam=2.0)
    br = norm_bracket(prob, [(1e-1, 256), (1e-2, 256)], 32)
    assert br.lower == pytest.approx(spectral_norm_l2(prob, 256), rel=1e-12)
    assert br.lower_method.startswith("spectral")
    assert br.upper == pytest.approx(optimize_schur(prob, 32).best, rel=1e-15)


def test_bracket_sharp_upper_is_beta():
    prob = Problem.of(1.0, 0, 0, 3, 3, 0.5, 0.5)
    br = norm_bracket(prob, [(1e-1, 256)], 16)
    assert br.upper == sharp_norm(prob)


def test_bracket_inversion_raises():
    with pytest.raises(InternalInconsistency):
        NormBracket(2.0, 1.0, "x", "y")
    with pytest.raises(ContractViolation):
        norm_bracket(classical(1.0), [(0.1, 10)])
