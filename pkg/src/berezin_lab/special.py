"""Gamma/Beta helpers and the weighted-measure normaliser."""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special as sp


def log_gamma(x):
    """log Gamma(x) for x > 0 (scalar or array)."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("log_gamma requires x > 0")
    out = sp.gammaln(x)
    return float(out) if out.ndim == 0 else out


def beta(a, b):
    """Euler Beta function B(a, b) for a, b > 0."""
    if a <= 0 or b <= 0:
        raise ValueError("beta requires positive arguments")
    # sum the two log-gammas in a fixed commutative order so beta(a,b) == beta(b,a)
    lo, hi = sorted((a, b))
    return math.exp(log_gamma(lo) + log_gamma(hi) - log_gamma(a + b))


def gen_binomial(x, k):
    """Generalised binomial coefficient binom(x, k) = prod_{i=1..k} (x-k+i)/i.

    Uses the k-fold product so that a vanishing factor yields an exact 0.
    """
    if k < 0 or int(k) != k:
        raise ValueError("k must be a nonnegative integer")
    out = 1.0
    for i in range(1, int(k) + 1):
        out *= (x - k + i) / i
    return out


def log_abs_binomial(x, k):
    """``(log|binom(x,k)|, sign)`` via log-gamma; vectorised over ``k``.

    Valid whenever ``x - k + 1`` is not a nonpositive integer; callers are
    responsible for the exact-zero cases (use :func:`gen_binomial` there).
    """
    x = np.asarray(x, dtype=float)
    k = np.asarray(k, dtype=float)
    top, bot = x + 1.0, x - k + 1.0
    logabs = sp.gammaln(top) - sp.gammaln(k + 1.0) - sp.gammaln(bot)
    sign = sp.gammasgn(top) * sp.gammasgn(bot)
    return logabs, sign


def normalizer(n, alpha):
    """c_alpha = Gamma(alpha+n+1) / (Gamma(alpha+1) pi^n)."""
    if alpha + n + 1 < 171.0:
        return math.gamma(alpha + n + 1) / math.gamma(alpha + 1) / math.pi**n
    return math.exp(log_gamma(alpha + n + 1) - log_gamma(alpha + 1) - n * math.log(math.pi))


@dataclass(frozen=True)
class WeightContext:
    """Complex dimension ``n`` and weight exponent ``alpha`` with cached c_alpha."""

    n: int
    alpha: float
    c_alpha: float = field(init=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        if not self.alpha > -1:
            raise ValueError(f"alpha must exceed -1, got {self.alpha}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "c_alpha", normalizer(self.n, self.alpha))


def make_context(n, alpha):
    return WeightContext(n, alpha)
