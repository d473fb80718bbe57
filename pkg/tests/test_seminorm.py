import math

import numpy as np
import pytest

from berezin_lab.quadrature import QuadratureConfig
from berezin_lab.series import RegimeError, sharp_constant_complex, sharp_constant_real
from berezin_lab.seminorm import (
    constant,
    custom,
    demonstrate_unbounded,
    e1,
    extremal_complex,
    extremal_real,
    random_symbols,
    s_complex,
    s_real,
    scan_r,
    transform_at,
    verify_sharpness,
)
from berezin_lab.special import make_context

CFG = QuadratureConfig(200_000, 17)


def random_unit(rng, n):
    a = rng.normal(size=n) + 1j * rng.normal(size=n)
    return a / np.linalg.norm(a)


def joint_sigma(a, b):
    return abs(a.value - b.value) / math.hypot(a.std_error, b.std_error)


def test_symbols_are_bounded():
    w = np.random.default_rng(0).normal(size=(1000, 3)) * 0.3 + 0j
    for f in random_symbols(3, 10, 1) + random_symbols(3, 10, 1, real=True):
        assert np.all(np.abs(f(w)) <= 1 + 1e-12)
    for f in random_symbols(2, 6, 1, real=True):
        assert np.all(f(w[:, :2]).imag == 0)


def test_symbol_catalog_is_reproducible():
    w = np.random.default_rng(1).normal(size=(50, 2)) * 0.4 + 0j
    a, b = random_symbols(2, 4, 99), random_symbols(2, 4, 99)
    assert all(np.array_equal(f(w), g(w)) for f, g in zip(a, b))


def test_extremal_symbols():
    a = e1(2)
    w = np.array([[0.3 - 0.4j, 0.1], [-0.2, 0.5j], [0.0, 0.2]])
    fc = extremal_complex(a)(w)
    assert np.allclose(fc[:2], [0.6 - 0.8j, -1.0])
    assert fc[2] == 0
    assert np.array_equal(extremal_real(a)(w).real, [1.0, -1.0, 0.0])
    with pytest.raises(ValueError):
        extremal_complex(np.array([1.0, 1.0]))


def test_custom_symbol_sup_norm_enforced():
    f = custom(1, lambda w: 2 * np.ones(len(w)))
    with pytest.raises(ValueError):
        f(np.zeros((3, 1)))
    with pytest.raises(ValueError):
        constant(1, 1.5)


def test_constant_symbol_transform_is_one():
    ctx = make_context(2, 0.0)
    est = transform_at(constant(2), np.array([0.3j, 0.2]), ctx, CFG)
    assert abs(est.value - 1.0) <= 4 * est.std_error


def test_constant_symbol_has_zero_seminorm():
    ctx = make_context(1, 0.0)
    s = s_complex(constant(1), np.array([0.4]), ctx, CFG)
    assert s.value <= 4 * s.std_error


@pytest.mark.parametrize("n,alpha", [(1, 0.0), (2, 1.5)])
def test_attainment_complex(n, alpha):
    ctx = make_context(n, alpha)
    s = s_complex(extremal_complex(e1(n)), np.zeros(n), ctx, CFG)
    assert abs(s.value - sharp_constant_complex(ctx)) <= 4 * s.std_error


@pytest.mark.parametrize("n,alpha", [(1, 0.0), (2, 0.5)])
def test_attainment_real(n, alpha):
    ctx = make_context(n, alpha)
    s = s_real(extremal_real(e1(n)), np.zeros(n), ctx, CFG)
    assert abs(s.value - sharp_constant_real(ctx)) <= 4 * s.std_error


def test_conjugate_gradient_symmetry():
    ctx = make_context(2, 1.0)
    f = extremal_complex(e1(2)).conjugate()
    s = s_complex(f, np.zeros(2), ctx, CFG, conjugate=True)
    assert abs(s.value - sharp_constant_complex(ctx)) <= 4 * s.std_error


def test_unitary_invariance_at_origin():
    ctx = make_context(2, 0.5)
    rng = np.random.default_rng(4)
    base_c = s_complex(extremal_complex(e1(2)), np.zeros(2), ctx, CFG)
    base_r = s_real(extremal_real(e1(2)), np.zeros(2), ctx, CFG)
    for seed in range(3):
        a = random_unit(rng, 2)
        cfg = QuadratureConfig(200_000, 1000 + seed)
        assert joint_sigma(s_complex(extremal_complex(a), np.zeros(2), ctx, cfg), base_c) <= 4
        assert joint_sigma(s_real(extremal_real(a), np.zeros(2), ctx, cfg), base_r) <= 4


def test_s_real_needs_real_symbol():
    ctx = make_context(1, 0.0)
    with pytest.raises(ValueError):
        s_real(extremal_complex(e1(1)), np.zeros(1), ctx, QuadratureConfig(1000, 0))


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        s_complex(extremal_complex(e1(2)), np.zeros(2), make_context(3, 0.0), CFG)


def test_grid_values_stay_below_constant():
    ctx = make_context(1, 1.0)
    const = sharp_constant_complex(ctx)
    f = extremal_complex(e1(1))
    for r in (0.2, 0.5, 0.8, 0.95):
        s = s_complex(f, np.array([r]), ctx, CFG)
        assert s.value <= const + 4 * s.std_error


def test_transform_gradient_against_finite_differences():
    # common random numbers make the difference quotient nearly noise free
    ctx = make_context(1, 0.0)
    f = extremal_complex(e1(1))
    z, h = np.array([0.3 + 0.1j]), 1e-4
    cfg = QuadratureConfig(100_000, 3)
    dx = (transform_at(f, z + h, ctx, cfg).value - transform_at(f, z - h, ctx, cfg).value) / (2 * h)
    dy = (transform_at(f, z + 1j * h, ctx, cfg).value - transform_at(f, z - 1j * h, ctx, cfg).value) / (2 * h)
    s = s_complex(f, z, ctx, cfg)
    assert (1 - 0.1) * abs(0.5 * (dx - 1j * dy)) == pytest.approx(s.value, rel=1e-3)


@pytest.mark.parametrize("case,n,alpha", [("complex", 1, 0.0), ("real", 1, 0.0), ("complex", 2, 7.0)])
def test_verify_sharpness(case, n, alpha):
    rep = verify_sharpness(case, make_context(n, alpha), QuadratureConfig(100_000, 7))
    assert rep.passed
    assert len(rep.checks) == 1 + 20 + 6


def test_verify_sharpness_rejects_strict_regime():
    with pytest.raises(RegimeError):
        verify_sharpness("complex", make_context(1, 6.0), CFG)


def test_scan_shapes():
    grid = np.round(np.arange(0, 1.0, 0.01), 10)
    res = scan_r("complex", make_context(1, 1.0), grid)
    assert res.argmax == 0 and res.consistent
    res = scan_r("complex", make_context(1, 10.0), grid)
    assert 0 < res.r_max < 1 and res.max_value < res.reference and res.consistent
    res = scan_r("real", make_context(1, 5.0), grid)
    assert 0 < res.r_max < 1 and res.consistent
    with pytest.raises(ValueError):
        scan_r("complex", make_context(1, 1.0), [])


def test_scan_oracle_column():
    ctx = make_context(1, 1.0)
    res = scan_r("complex", ctx, [0.0, 0.5], QuadratureConfig(200_000, 2))
    assert np.all(np.abs(res.oracle - res.values) <= 4 * res.oracle_stderr)


def test_demonstrate_unbounded():
    demo = demonstrate_unbounded(make_context(2, -0.1), cfg=QuadratureConfig(200_000, 5))
    assert demo.increasing
    with pytest.raises(RegimeError):
        demonstrate_unbounded(make_context(1, 0.0))
