"""Boundedness criteria, sharp norms and certified norm brackets for the
Hilbert-type operator with kernel m**mu n**nu / (m + n)**lam between
weighted l^p spaces (and its integral counterpart on L^p(0, inf))."""

from .classifier import Status, Verdict, classify, classify_continuous, classify_discrete, sharp_norm
from .continuous import continuous_lower_bound, integral_I_quad, verify_power_integrals
from .errors import (
    ContractViolation,
    DivergentIntegral,
    DivergentSeries,
    DomainError,
    HilbertOpError,
    InternalInconsistency,
)
from .kernel import Exponents, integral_I_closed, kernel_eval, power_sum_constant
from .normest import (
    NormBracket,
    SchurParams,
    extremal_lower_bound,
    norm_bracket,
    optimize_schur,
    rayleigh_quotient,
    schur_upper_bound,
    schur_upper_bound_p1,
    spectral_norm_l2,
)
from .operator import Problem, Setting, apply, apply_adjoint
from .seqspace import SpaceIndex, TruncatedSequence, weighted_norm

__version__ = "0.1.0"

__all__ = [
    "Status", "Verdict", "classify", "classify_continuous", "classify_discrete", "sharp_norm",
    "continuous_lower_bound", "integral_I_quad", "verify_power_integrals",
    "ContractViolation", "DivergentIntegral", "DivergentSeries", "DomainError", "HilbertOpError",
    "InternalInconsistency",
    "Exponents", "integral_I_closed", "kernel_eval", "power_sum_constant",
    "NormBracket", "SchurParams", "extremal_lower_bound", "norm_bracket", "optimize_schur",
    "rayleigh_quotient", "schur_upper_bound", "schur_upper_bound_p1", "spectral_norm_l2",
    "Problem", "Setting", "apply", "apply_adjoint",
    "SpaceIndex", "TruncatedSequence", "weighted_norm",
]
