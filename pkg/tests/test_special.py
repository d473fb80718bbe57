import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from berezin_lab.quadrature import QuadratureConfig, integrate_lebesgue
from berezin_lab.special import (
    WeightContext,
    beta,
    gen_binomial,
    log_abs_binomial,
    log_gamma,
    make_context,
    normalizer,
)


@pytest.mark.parametrize("x", [0.5, 1.0, 1.5, 3.7, 20.25, 171.5, 1e4])
def test_log_gamma_matches_mpmath(x):
    assert log_gamma(x) == pytest.approx(float(mpmath.loggamma(x)), rel=1e-14, abs=1e-15)


def test_log_gamma_rejects_nonpositive():
    with pytest.raises(ValueError):
        log_gamma(0.0)


@pytest.mark.parametrize("a,b", [(1, 0.5), (3, 0.5), (2.5, 0.5), (50.0, 0.5), (7.3, 2.2)])
def test_beta_matches_mpmath(a, b):
    assert beta(a, b) == pytest.approx(float(mpmath.beta(a, b)), rel=1e-13)
    assert beta(a, b) == beta(b, a)


def test_beta_hand_values():
    # Gamma-ratio values worked out by hand
    assert beta(2, 0.5) == pytest.approx(4 / 3, rel=1e-15)
    assert beta(3, 0.5) == pytest.approx(16 / 15, rel=1e-15)


@pytest.mark.parametrize("x,k", [(0.5, 3), (-0.5, 4), (2.0, 5), (7.25, 6), (-3.0, 2), (10.0, 0)])
def test_gen_binomial_matches_mpmath(x, k):
    assert gen_binomial(x, k) == pytest.approx(float(mpmath.binomial(x, k)), rel=1e-13, abs=1e-300)


def test_gen_binomial_exact_zeros():
    # alpha = 0 makes binom(alpha+k-1, k) vanish for every k >= 1
    for k in range(1, 10):
        assert gen_binomial(k - 1, k) == 0.0
    assert gen_binomial(-1.0, 0) == 1.0


@given(st.floats(-20, 20, allow_nan=False), st.integers(1, 30))
@settings(max_examples=300, deadline=None)
def test_pascal_rule(x, k):
    lhs = gen_binomial(x, k)
    rhs = gen_binomial(x - 1, k) + gen_binomial(x - 1, k - 1)
    scale = max(1.0, abs(gen_binomial(x - 1, k)), abs(gen_binomial(x - 1, k - 1)))
    assert abs(lhs - rhs) <= 1e-12 * scale


def test_log_abs_binomial_sign_and_size():
    ks = np.arange(8.0)
    for x in (2.5, -0.5, 13.1):
        logabs, sign = log_abs_binomial(x, ks)
        for k in range(8):
            ref = mpmath.binomial(x, k)
            assert sign[k] * math.exp(logabs[k]) == pytest.approx(float(ref), rel=1e-12)


@pytest.mark.parametrize("n,alpha", [(1, 0.0), (2, 1.5), (3, -0.5), (200, 3.0)])
def test_normalizer_matches_mpmath(n, alpha):
    ref = mpmath.gamma(alpha + n + 1) / (mpmath.gamma(alpha + 1) * mpmath.pi**n)
    assert normalizer(n, alpha) == pytest.approx(float(ref), rel=1e-12)


@pytest.mark.parametrize("n,alpha", [(1, 0.0), (1, 2.0), (2, 0.5)])
def test_weighted_measure_is_probability(n, alpha):
    ctx = make_context(n, alpha)
    est = integrate_lebesgue(lambda w: ctx.c_alpha * (1 - np.sum(np.abs(w) ** 2, axis=1)) ** alpha,
                             n, QuadratureConfig(200_000, 5))
    assert est.sigma_distance(1.0) <= 4


def test_context_validation():
    assert WeightContext(2, 1).c_alpha == pytest.approx(6 / math.pi**2)
    for n, alpha in [(0, 1.0), (1.5, 1.0), (1, -1.0), (1, -3.0)]:
        with pytest.raises(ValueError):
            WeightContext(n, alpha)
