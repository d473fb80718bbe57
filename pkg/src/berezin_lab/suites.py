"""Named verification suites, each returning a list of :class:`Check` rows."""

import math

import numpy as np

from . import series
from .ball import from_real, identity_residuals, mobius
from .kernel import kernel, kernel_grad_real, kernel_grad_z
from .oracles import (
    bound_integral_complex,
    bound_integral_real,
    quarter_disc_integral,
    real_ball_moment,
)
from .quadrature import QuadratureConfig, double_angle_integral, integrate_weighted
from .seminorm import SIGMA, Check, demonstrate_unbounded, scan_r, verify_sharpness
from .special import make_context

SUITES = ("identities", "sharp", "series", "turning", "parseval", "moments", "regimes", "all")


def _sigma_check(name, est_value, est_se, reference):
    dist = abs(est_value - reference) / est_se if est_se > 0 else (0.0 if est_value == reference else math.inf)
    rel = abs(est_value - reference) / abs(reference) if reference else None
    return Check(name, float(est_value), float(reference), float(dist), rel, bool(dist <= SIGMA))


def _rel_check(name, value, reference, tol):
    rel = abs(value - reference) / abs(reference)
    return Check(name, float(value), float(reference), None, float(rel), bool(rel <= tol))


def _random_ball(rng, count, n, radius):
    g = rng.standard_normal((count, 2 * n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return from_real(g * radius * rng.random(count)[:, None] ** (1.0 / (2 * n)))


def _fd_grad_z(z, w, ctx, h=1e-5):
    n = z.shape[0]
    out = np.empty(n, dtype=complex)
    for i in range(n):
        e = np.zeros(n, dtype=complex)
        e[i] = h
        dx = (kernel(z + e, w, ctx) - kernel(z - e, w, ctx)) / (2 * h)
        dy = (kernel(z + 1j * e, w, ctx) - kernel(z - 1j * e, w, ctx)) / (2 * h)
        out[i] = 0.5 * (dx - 1j * dy)
    return out


def identities(seed=7, samples=200_000, **_):
    rng = np.random.default_rng(seed)
    checks = []
    for n in (1, 2, 3):
        z = _random_ball(rng, 1000, n, 0.95)
        xi = _random_ball(rng, 1000, n, 0.95)
        worst3 = worst4 = worst_inv = 0.0
        for zi, xii in zip(z, xi):
            r3, r4 = identity_residuals(zi, xii)
            worst3, worst4 = max(worst3, float(r3)), max(worst4, float(r4))
            worst_inv = max(worst_inv, float(np.linalg.norm(mobius(zi, mobius(zi, xii)) - xii)))
        checks.append(Check(f"mobius-norm-identity n={n}", worst3, 0.0, None, worst3, worst3 <= 1e-10))
        checks.append(Check(f"mobius-product-identity n={n}", worst4, 0.0, None, worst4, worst4 <= 1e-10))
        checks.append(Check(f"mobius-involution n={n}", worst_inv, 0.0, None, worst_inv, worst_inv <= 1e-10))

        ctx = make_context(n, 0.0)
        zs, ws = _random_ball(rng, 100, n, 0.9), _random_ball(rng, 100, n, 0.9)
        worst = worst_real = 0.0
        for zk, wk in zip(zs, ws):
            g = kernel_grad_z(zk, wk, ctx).holomorphic
            fd = _fd_grad_z(zk, wk, ctx)
            worst = max(worst, float(np.max(np.abs(fd - g)) / np.linalg.norm(g)))
            gr = kernel_grad_real(zk, wk, ctx)
            worst_real = max(worst_real, abs(np.linalg.norm(gr) - 2 * np.linalg.norm(g)) / np.linalg.norm(gr))
        checks.append(Check(f"kernel-gradient-vs-fd n={n}", worst, 0.0, None, worst, worst <= 1e-6))
        checks.append(Check(f"real-gradient-norm n={n}", worst_real, 0.0, None, worst_real, worst_real <= 1e-12))

    cfg = QuadratureConfig(samples, seed)
    for n in (1, 2):
        ctx = make_context(n, 0.0)
        for r in (0.0, 0.5, 0.8):
            z = np.zeros(n, dtype=complex)
            z[0] = r
            est = integrate_weighted(lambda w: kernel(z, w, ctx), ctx, cfg)
            checks.append(_sigma_check(f"reproducing n={n} |z|={r}", est.value, est.std_error, 1.0))
    return checks


def sharp(n=1, alpha=0.0, case="complex", seed=7, samples=1_000_000, **_):
    ctx = make_context(n, alpha)
    report = verify_sharpness(case, ctx, QuadratureConfig(samples, seed))
    return [
        Check(f"{case} n={n} alpha={alpha} {c.check}", float(c.value), float(c.reference),
              None if c.sigma_distance is None else float(c.sigma_distance), c.rel_error, bool(c.passed))
        for c in report.checks
    ]


SERIES_GRID = tuple((n, a) for n in (1, 2) for a in (0.5, 1.0, 2.0))


def series_identity(seed=7, samples=1_000_000, grid=SERIES_GRID, radii=(0.0, 0.3, 0.7), **_):
    cfg = QuadratureConfig(samples, seed)
    checks = []
    for n, a in grid:
        ctx = make_context(n, a)
        for r in radii:
            est = bound_integral_complex(ctx, r, cfg)
            ref = series.bound_function_complex(ctx, r).value
            checks.append(_sigma_check(f"complex-series n={n} alpha={a} r={r}", est.value, est.std_error, ref))
    for n, a, r in ((1, 1.0, 0.4), (2, 0.5, 0.6)):
        ctx = make_context(n, a)
        est = bound_integral_real(ctx, r, 1.0, 0.0, cfg)
        ref = series.bound_function_real(ctx, r, 1.0, 0.0).value
        checks.append(_sigma_check(f"real-series n={n} alpha={a} r={r}", est.value, est.std_error, ref))
    return checks


def turning(seed=7, **_):
    rng = np.random.default_rng(seed)
    checks = []
    kmax = 500
    ks = np.arange(kmax + 1)
    for label in ("sharp", "strict"):
        ok_a = ok_b = True
        worst_ratio = 0.0
        for _ in range(50):
            n = int(rng.integers(1, 5))
            if label == "sharp":
                a_c, a_r = rng.uniform(0.01, 2 * n + 3), rng.uniform(0.01, n + 0.5)
            else:
                a_c, a_r = rng.uniform(2 * n + 3, 2 * n + 40), rng.uniform(n + 0.5, n + 30)
            ca, cb = make_context(n, a_c), make_context(n, a_r)
            av = np.array([series.a_seq(ca, int(k)) for k in ks])
            bv = np.array([series.b_seq(cb, int(k)) for k in ks])
            ok_a &= int(np.argmax(av)) == series.k_alpha(ca)
            ok_b &= int(np.argmax(bv)) == series.k_prime_alpha(cb)
            k = ks[:-1].astype(float)
            ra = (k + 1) * (k + a_c + n + 1.5) / ((a_c + k) * (k + 1.5))
            rb = (2 * k + 2 * a_r + 1) * (k + 1) / ((2 * k + 1) * (k + n + a_r + 1.5))
            worst_ratio = max(worst_ratio, float(np.max(np.abs(av[:-1] / av[1:] / ra - 1))),
                              float(np.max(np.abs(bv[1:] / bv[:-1] / rb - 1))))
        checks.append(Check(f"a_k argmax == k_alpha ({label})", float(ok_a), 1.0, None, None, bool(ok_a)))
        checks.append(Check(f"b_k argmax == k'_alpha ({label})", float(ok_b), 1.0, None, None, bool(ok_b)))
        checks.append(Check(f"ratio formulas ({label})", worst_ratio, 0.0, None, worst_ratio, worst_ratio <= 1e-12))
    return checks


PARSEVAL_SETS = (
    (1.0, 1.0, 0.2, 0.3, 1.5),
    (0.5, 0.8, 0.4, 0.25, 1.0),
    (0.9, 0.3, 0.5, 0.3, 2.5),
    (1.0, 1.0, 0.6, 0.0, 0.7),
    (0.7, 0.6, 0.3, 0.5, 3.0),
)


def parseval(**_):
    checks = []
    for p in PARSEVAL_SETS:
        checks.append(_rel_check(f"parseval {p}", series.parseval_series(*p, k_max=200),
                                 double_angle_integral(*p), 1e-8))
    return checks


BETA_TRIPLES = ((0, 0, 1.0), (2, 1, 0.5), (3, 3, 2.0))
MOMENT_CASES = ((1, 0, 0, 1.0), (2, 1, 1, 0.5), (2, 2, 1, 2.0))


def moments(seed=7, samples=1_000_000, **_):
    checks = []
    for k, j, a in BETA_TRIPLES:
        ref = 0.25 * math.exp(math.lgamma(a + 1) + math.lgamma(k - j + 1) + math.lgamma(j + 1.5)
                              - math.lgamma(a + k + 3.5))
        checks.append(_rel_check(f"quarter-disc k={k} j={j} alpha={a}", quarter_disc_integral(k, j, a), ref, 1e-6))
    cfg = QuadratureConfig(samples, seed)
    for n, k, j, a in MOMENT_CASES:
        est = real_ball_moment(n, k, j, a, cfg)
        ref = math.pi ** (n - 1) * math.exp(math.lgamma(a + 1) + math.lgamma(k - j + 1) + math.lgamma(j + 0.5)
                                            - math.lgamma(a + n + k + 1.5))
        checks.append(_sigma_check(f"real-ball-moment n={n} k={k} j={j} alpha={a}", est.value, est.std_error, ref))
    return checks


def regimes(seed=7, samples=1_000_000, **_):
    checks = []
    demo = demonstrate_unbounded(make_context(1, -0.5), (0.0, 0.5, 0.9, 0.99), QuadratureConfig(samples, seed))
    checks.append(Check("unbounded n=1 alpha=-0.5 ratio(0.99/0)", demo.ratio, 10.0, None, None,
                        bool(demo.ratio > 10.0)))
    checks.append(Check("unbounded n=1 alpha=-0.5 increasing", float(demo.increasing), 1.0, None, None,
                        bool(demo.increasing)))
    for n, a in ((1, 1.0), (2, 2.0)):
        ctx = make_context(n, a)
        lo, hi = series.bound_function_complex(ctx, 0.999).value, series.bound_function_complex(ctx, 0.0).value
        checks.append(Check(f"vanishing n={n} alpha={a}", lo / hi, 0.05, None, None, bool(lo < 0.05 * hi)))
    grid = np.round(np.arange(0.0, 0.995, 0.01), 10)
    for case, n, a in (("complex", 1, 10.0), ("real", 1, 5.0)):
        res = scan_r(case, make_context(n, a), grid)
        checks.append(Check(f"strict {case} n={n} alpha={a} interior argmax", res.r_max, 0.0, None, None,
                            bool(0.0 < res.r_max < 1.0)))
        checks.append(Check(f"strict {case} n={n} alpha={a} max < bound", res.max_value, res.reference, None,
                            (res.reference - res.max_value) / res.reference, bool(res.max_value < res.reference)))
    return checks


RUNNERS = {
    "identities": identities,
    "sharp": sharp,
    "series": series_identity,
    "turning": turning,
    "parseval": parseval,
    "moments": moments,
    "regimes": regimes,
}


def run_suite(name, **params):
    if name == "all":
        out = []
        for key in RUNNERS:
            out.extend(RUNNERS[key](**params))
        return out
    if name not in RUNNERS:
        raise ValueError(f"unknown suite {name!r}; expected one of {SUITES}")
    return RUNNERS[name](**params)
