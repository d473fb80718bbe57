"""Numerical verification of Bloch-seminorm constants for weighted Berezin transforms on the unit ball."""

__version__ = "0.1.0"

from .ball import herm_inner, identity_residuals, mobius, norm2
from .kernel import KernelGradient, kernel, kernel_grad_real, kernel_grad_z
from .quadrature import IntegralEstimate, QuadratureConfig, integrate_lebesgue, integrate_weighted
from .seminorm import (
    BoundedSymbol,
    demonstrate_unbounded,
    extremal_complex,
    extremal_real,
    random_symbols,
    s_complex,
    s_real,
    scan_r,
    transform_at,
    verify_sharpness,
)
from .series import (
    DegenerateWeightError,
    RegimeError,
    RegimeReport,
    bound_function_complex,
    bound_function_real,
    classify,
    k_alpha,
    k_prime_alpha,
    sharp_constant_complex,
    sharp_constant_real,
    upper_bound_complex,
    upper_bound_real,
)
from .special import WeightContext, make_context
