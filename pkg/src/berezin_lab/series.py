"""Closed-form side: term sequences, turning indices, bound functions, constants.

Series sums form Gamma ratios in log space and exponentiate once per term.
The scalar term accessors ``a_seq``/``b_seq`` are evaluated in extended
precision so neighbouring ratios are exact to double rounding.
Generalised binomials that can vanish (alpha = 0) are treated as exact
zeros rather than limits.
"""

import math
from dataclasses import dataclass
from typing import Optional

import mpmath
import numpy as np
from scipy.special import gammaln, logsumexp

from .special import WeightContext, beta, gen_binomial, log_abs_binomial

REL_STOP = 1e-15
TAIL_TOL = 1e-12
BLOCK = 512
MAX_TERMS = 5_000_000
HALF_LOG_PI = 0.5 * math.log(math.pi)
_DPS = 40


class RegimeError(ValueError):
    """Parameters fall outside the regime an operation is valid for."""


class DegenerateWeightError(ZeroDivisionError):
    """A generalised binomial in a denominator vanishes for this weight."""


@dataclass(frozen=True)
class SeriesValue:
    value: float
    terms_used: int
    tail_bound: float


@dataclass(frozen=True)
class RegimeReport:
    n: int
    alpha: float
    case: str
    regime: str  # "unbounded" | "sharp" | "bounded-strict"
    constant_or_bound: float
    turning_index: Optional[int] = None


def _binom_vanishes(x, k):
    # some factor (x - k + i), i = 1..k, is exactly zero
    return float(x).is_integer() and 0 <= x <= k - 1


def _check_k(k):
    if k < 0 or int(k) != k:
        raise ValueError("k must be a nonnegative integer")
    return int(k)


# -- complex-case sequences ---------------------------------------------------


def _log_a(ctx, k):
    """log|a_k| and sign for an integer array ``k`` (alpha != 0)."""
    n, a = ctx.n, ctx.alpha
    lb, sign = log_abs_binomial(a + k - 1.0, k)
    return lb + gammaln(k + 1.5) - gammaln(k + a + n + 1.5), sign


def a_seq(ctx, k):
    """a_k = binom(alpha+k-1, k) Gamma(k+3/2) / Gamma(k+alpha+n+3/2)."""
    k = _check_k(k)
    if k >= 1 and _binom_vanishes(ctx.alpha + k - 1, k):
        return 0.0
    a = mpmath.mpf(ctx.alpha)
    with mpmath.workdps(_DPS):
        val = mpmath.binomial(a + k - 1, k) * mpmath.gamma(k + 1.5) / mpmath.gamma(k + a + ctx.n + 1.5)
    return float(val)


def k_alpha(ctx):
    """Index of the largest a_k: ceil((alpha - (2n+3)) / (2n+2)), floored at 0."""
    excess = ctx.alpha - (2 * ctx.n + 3)
    return max(0, math.ceil(excess / (2 * ctx.n + 2))) if excess > 0 else 0


def a_jk(k, j):
    """a_{j,k} = binom(k,j) Gamma(k-j+1) Gamma(j+3/2) = k! Gamma(j+3/2) / j!."""
    k = _check_k(k)
    if not 0 <= j <= k or int(j) != j:
        raise ValueError("need 0 <= j <= k")
    return math.exp(gammaln(k + 1) - gammaln(j + 1) + gammaln(j + 1.5))


# -- real-case sequences ------------------------------------------------------


def _log_b(ctx, k):
    n, a = ctx.n, ctx.alpha
    top, s_top = log_abs_binomial(2 * a + 2 * k - 1.0, 2 * k)
    bot, s_bot = log_abs_binomial(a + k - 1.0, k)
    return top - bot + gammaln(k + 1.0) - gammaln(k + a + n + 1.5), s_top * s_bot


def b_seq(ctx, k):
    """b_k = binom(2alpha+2k-1, 2k) / binom(alpha+k-1, k) * k! / Gamma(k+alpha+n+3/2)."""
    k = _check_k(k)
    a = ctx.alpha
    if k >= 1 and _binom_vanishes(a + k - 1, k):
        raise DegenerateWeightError(f"binom(alpha+k-1, k) vanishes for alpha={a}, k={k}")
    if k >= 1 and _binom_vanishes(2 * a + 2 * k - 1, 2 * k):
        return 0.0
    a = mpmath.mpf(ctx.alpha)
    with mpmath.workdps(_DPS):
        val = (mpmath.binomial(2 * a + 2 * k - 1, 2 * k) / mpmath.binomial(a + k - 1, k)
               * mpmath.factorial(k) / mpmath.gamma(k + a + ctx.n + 1.5))
    return float(val)


def k_prime_alpha(ctx):
    """Index of the largest b_k: ceil(alpha/(2n+1) - 1/2), floored at 0."""
    if ctx.alpha <= ctx.n + 0.5:
        return 0
    return max(0, math.ceil(ctx.alpha / (2 * ctx.n + 1) - 0.5))


def b_jk(k, j):
    """b_{j,k} = binom(2k,2j) / binom(k,j) * Gamma(k-j+1) Gamma(j+1/2)."""
    k = _check_k(k)
    if not 0 <= j <= k or int(j) != j:
        raise ValueError("need 0 <= j <= k")
    lg = (
        gammaln(2 * k + 1) - gammaln(2 * j + 1) - gammaln(2 * k - 2 * j + 1)
        - (gammaln(k + 1) - gammaln(j + 1) - gammaln(k - j + 1))
        + gammaln(k - j + 1) + gammaln(j + 0.5)
    )
    return math.exp(lg)


# -- series summation ---------------------------------------------------------


def _sum_series(log_terms, limit_ratio, k_min):
    """Sum exp(log_terms(k)) over k = 0, 1, ... with a certified geometric tail.

    Stops at the first k >= k_min whose term is below REL_STOP * partial sum,
    whose ratio to the previous term is < 1, and whose tail estimate
    t_k q / (1 - q), q = max(last ratio, limit_ratio), is below
    TAIL_TOL * max(1, |partial|).  Beyond k_min the term ratios are monotone,
    so q bounds every later ratio.
    """
    partial = 0.0
    prev = None
    start = 0
    while start < MAX_TERMS:
        ks = np.arange(start, start + BLOCK, dtype=float)
        terms = np.exp(log_terms(ks))
        for i, t in enumerate(terms):
            k = start + i
            partial += t
            if prev is not None and prev > 0 and k >= k_min:
                ratio = t / prev
                if ratio < 1.0 and t <= REL_STOP * abs(partial):
                    q = max(ratio, limit_ratio)
                    tail = t * q / (1.0 - q)
                    if tail < TAIL_TOL * max(1.0, abs(partial)):
                        return SeriesValue(float(partial), k + 1, float(tail))
            prev = t
        start += BLOCK
    raise RuntimeError("series did not converge within MAX_TERMS terms")


def _check_r(r):
    if not 0.0 <= r < 1.0:
        raise ValueError("r must lie in [0, 1)")


def _monotone_from(ctx):
    # past this index the term-ratio rational functions are monotone in k
    return int(math.ceil(4 * (abs(ctx.alpha) + ctx.n + 3)))


def bound_function_complex(ctx, r):
    """(n+1) c_alpha T(r): the series

        (1-r^2)^alpha (n+1) Gamma(n+alpha+1) sum_k binom(alpha+k-1,k)^2
            Gamma(k+3/2) / Gamma(k+alpha+n+3/2) r^(2k).
    """
    _check_r(r)
    n, a = ctx.n, ctx.alpha
    if a < 0:
        raise RegimeError("bound_function_complex needs alpha >= 0")
    log_pref = a * math.log1p(-r * r) + math.log(n + 1) + gammaln(n + a + 1)
    k0 = log_pref + gammaln(1.5) - gammaln(a + n + 1.5)
    if r == 0.0 or a == 0.0:
        return SeriesValue(math.exp(k0), 1, 0.0)
    log_r2 = 2.0 * math.log(r)

    def log_terms(k):
        la, _ = _log_a(ctx, k)
        lb, _ = log_abs_binomial(a + k - 1.0, k)
        return log_pref + la + lb + k * log_r2

    return _sum_series(log_terms, r * r, max(k_alpha(ctx), _monotone_from(ctx)))


def _log_real_inner(k, nu1, nu2):
    """log of sum_j binom(2k,2j) Gamma(k-j+1) Gamma(j+1/2) nu1^(2k-2j) nu2^(2j)."""
    j = np.arange(k + 1, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        l1 = math.log(abs(nu1)) if nu1 else -np.inf
        l2 = math.log(abs(nu2)) if nu2 else -np.inf
        pw1 = np.where(k - j == 0, 0.0, 2 * (k - j) * l1)
        pw2 = np.where(j == 0, 0.0, 2 * j * l2)
    lg = (
        gammaln(2 * k + 1) - gammaln(2 * j + 1) - gammaln(2 * k - 2 * j + 1)
        + gammaln(k - j + 1) + gammaln(j + 0.5) + pw1 + pw2
    )
    return logsumexp(lg)


def bound_function_real(ctx, r, nu1=1.0, nu2=0.0, majorant=False):
    """Real-ball series

        pi^(n-1) Gamma(alpha+1) sum_k binom(2k+2alpha-1, 2k) r^(2k) / Gamma(alpha+n+k+3/2)
            * sum_j binom(2k,2j) Gamma(k-j+1) Gamma(j+1/2) nu1^(2k-2j) nu2^(2j),

    equal to the integral over the real 2n-ball of
    |mu_1| (1-|mu|^2)^alpha / (1 - r mu_1 nu1 - r mu_2 nu2)^(2 alpha).
    With ``majorant=True`` the inner sum is replaced by its upper bound
    k! Gamma(1/2), attained at (nu1, nu2) = (1, 0).
    """
    _check_r(r)
    if abs(nu1 * nu1 + nu2 * nu2 - 1.0) > 1e-12:
        raise ValueError("(nu1, nu2) must be a unit vector")
    n, a = ctx.n, ctx.alpha
    if a < 0:
        raise RegimeError("bound_function_real needs alpha >= 0")
    log_pref = (n - 1) * math.log(math.pi) + gammaln(a + 1)
    k0 = log_pref + HALF_LOG_PI - gammaln(a + n + 1.5)
    if r == 0.0 or a == 0.0:
        return SeriesValue(math.exp(k0), 1, 0.0)
    log_r2 = 2.0 * math.log(r)

    def log_terms(k):
        lb, _ = log_abs_binomial(2 * a + 2 * k - 1.0, 2 * k)
        if majorant:
            inner = gammaln(k + 1.0) + HALF_LOG_PI
        else:
            inner = np.array([_log_real_inner(int(kk), nu1, nu2) for kk in k])
        return log_pref + lb + inner - gammaln(a + n + k + 1.5) + k * log_r2

    return _sum_series(log_terms, r * r, max(k_prime_alpha(ctx), _monotone_from(ctx)))


def bound_profile_real(ctx, r):
    """2 (n+1) c_alpha (1-r^2)^alpha times the majorant real series.

    Bounds (1-|z|^2)|grad B_alpha f(z)| at |z| = r for real f with sup norm 1;
    equals the sharp real constant at r = 0.
    """
    s = bound_function_real(ctx, r, majorant=True)
    scale = 2 * (ctx.n + 1) * ctx.c_alpha * (1.0 - r * r) ** ctx.alpha
    return SeriesValue(scale * s.value, s.terms_used, scale * s.tail_bound)


def parseval_series(rho1, rho2, c1, c2, alpha, k_max):
    """Truncated Parseval expansion of the double angular integral:

        4 pi^2 sum_{k<=k_max} binom(alpha+k-1,k)^2 sum_j binom(k,j)^2 (c1 rho1)^(2j) (c2 rho2)^(2k-2j).
    """
    a, b = c1 * rho1, c2 * rho2
    if a < 0 or b < 0:
        raise ValueError("radii and coefficients must be nonnegative")
    if a + b >= 1.0:
        raise ValueError("series diverges unless c1*rho1 + c2*rho2 < 1")
    total = 0.0
    for k in range(int(k_max) + 1):
        g = gen_binomial(alpha + k - 1, k)
        if g == 0.0:
            continue
        j = np.arange(k + 1, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            la = np.where(j == 0, 0.0, 2 * j * np.log(a) if a > 0 else -np.inf)
            lb = np.where(k - j == 0, 0.0, 2 * (k - j) * np.log(b) if b > 0 else -np.inf)
        lc = 2 * (gammaln(k + 1) - gammaln(j + 1) - gammaln(k - j + 1))
        total += g * g * math.exp(logsumexp(lc + la + lb))
    return 4.0 * math.pi**2 * total


# -- constants and bounds -----------------------------------------------------


def sharp_constant_complex(ctx, enforce_regime=True):
    """(n+1)/2 B(n+alpha+1, 1/2)."""
    if enforce_regime and not 0 <= ctx.alpha <= 2 * ctx.n + 3:
        raise RegimeError(f"alpha={ctx.alpha} outside [0, 2n+3]")
    return (ctx.n + 1) / 2 * beta(ctx.n + ctx.alpha + 1, 0.5)


def sharp_constant_real(ctx, enforce_regime=True):
    """(2/pi)(n+1) B(alpha+n+1, 1/2)."""
    if enforce_regime and not 0 <= ctx.alpha <= ctx.n + 0.5:
        raise RegimeError(f"alpha={ctx.alpha} outside [0, n+1/2]")
    return 2 / math.pi * (ctx.n + 1) * beta(ctx.alpha + ctx.n + 1, 0.5)


def upper_bound_complex(ctx):
    """(n+1) Gamma(n+alpha+1) a_{k_alpha}, a strict bound for alpha > 2n+3."""
    if not ctx.alpha > 2 * ctx.n + 3:
        raise RegimeError(f"alpha={ctx.alpha} not above 2n+3")
    la, _ = _log_a(ctx, np.float64(k_alpha(ctx)))
    return (ctx.n + 1) * math.exp(gammaln(ctx.n + ctx.alpha + 1) + la)


def upper_bound_real(ctx):
    """(2/sqrt(pi)) (n+1) Gamma(alpha+n+1) b_{k'_alpha}, strict for alpha > n+1/2."""
    if not ctx.alpha > ctx.n + 0.5:
        raise RegimeError(f"alpha={ctx.alpha} not above n+1/2")
    lb, _ = _log_b(ctx, np.float64(k_prime_alpha(ctx)))
    return 2 / math.sqrt(math.pi) * (ctx.n + 1) * math.exp(gammaln(ctx.alpha + ctx.n + 1) + lb)


def sharp_threshold(n, case):
    if case == "complex":
        return 2 * n + 3
    if case == "real":
        return n + 0.5
    raise ValueError(f"case must be 'complex' or 'real', got {case!r}")


def classify(n, alpha, case):
    """Place (n, alpha) in the unbounded / sharp / bounded-strict regime."""
    threshold = sharp_threshold(n, case)
    ctx = WeightContext(n, alpha)
    if alpha < 0:
        return RegimeReport(ctx.n, ctx.alpha, case, "unbounded", math.inf)
    if alpha <= threshold:
        const = sharp_constant_complex(ctx) if case == "complex" else sharp_constant_real(ctx)
        return RegimeReport(ctx.n, ctx.alpha, case, "sharp", const)
    if case == "complex":
        return RegimeReport(ctx.n, ctx.alpha, case, "bounded-strict", upper_bound_complex(ctx), k_alpha(ctx))
    return RegimeReport(ctx.n, ctx.alpha, case, "bounded-strict", upper_bound_real(ctx), k_prime_alpha(ctx))
