"""The weighted Berezin transform, its gradients and Bloch-type seminorm samples."""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .ball import as_point, herm_inner, norm2
from .kernel import kernel, kernel_grad_real, kernel_grad_z
from .oracles import bound_integral_complex
from .quadrature import QuadratureConfig, integrate_weighted
from .series import (
    RegimeError,
    bound_function_complex,
    bound_profile_real,
    sharp_constant_complex,
    sharp_constant_real,
    sharp_threshold,
    upper_bound_complex,
    upper_bound_real,
)

SINGULAR_EPS = 1e-14
SIGMA = 4.0


@dataclass(frozen=True, eq=False)
class BoundedSymbol:
    """An L^infinity function on the ball with sup norm at most one.

    ``kind`` is one of ``constant``, ``extremal_complex``, ``extremal_real``
    or ``custom``.  Extremal symbols are set to 0 on their (null) singular set.
    """

    kind: str
    n: int
    c: complex = 0.0
    a: Optional[np.ndarray] = None
    fn: Optional[Callable] = None
    real: bool = False

    def __call__(self, w):
        w = as_point(w)
        if self.kind == "constant":
            return np.full(w.shape[:-1], self.c, dtype=complex)
        if self.kind == "extremal_complex":
            p = herm_inner(w, self.a)
            out = np.zeros(p.shape, dtype=complex)
            ok = np.abs(p) > SINGULAR_EPS
            out[ok] = np.abs(p[ok]) / np.conj(p[ok])
            return out
        if self.kind == "extremal_real":
            re = herm_inner(w, self.a).real
            return np.where(np.abs(re) > SINGULAR_EPS, np.sign(re), 0.0).astype(complex)
        vals = np.asarray(self.fn(w), dtype=complex)
        if np.any(np.abs(vals) > 1.0 + 1e-12):
            raise ValueError("custom symbol exceeds 1 in modulus at a sampled point")
        return vals

    def conjugate(self):
        """The pointwise complex conjugate, again a bounded symbol."""
        return custom(self.n, lambda w, f=self: np.conj(f(w)), real=self.real)


def _unit(a, n):
    a = as_point(a)
    if a.shape != (n,):
        raise ValueError(f"direction must have shape ({n},)")
    if abs(math.sqrt(norm2(a)) - 1.0) > 1e-12:
        raise ValueError("direction must lie on the unit sphere")
    return a


def constant(n, c=1.0):
    if abs(c) > 1.0:
        raise ValueError("|c| must be <= 1")
    return BoundedSymbol("constant", n, c=complex(c), real=complex(c).imag == 0)


def extremal_complex(a):
    """|<w,a>| / conj(<w,a>)."""
    a = as_point(a)
    return BoundedSymbol("extremal_complex", a.shape[-1], a=_unit(a, a.shape[-1]))


def extremal_real(a):
    """sgn Re <w,a>."""
    a = as_point(a)
    return BoundedSymbol("extremal_real", a.shape[-1], a=_unit(a, a.shape[-1]), real=True)


def custom(n, fn, real=False):
    return BoundedSymbol("custom", n, fn=fn, real=real)


def e1(n):
    out = np.zeros(n, dtype=complex)
    out[0] = 1.0
    return out


def random_symbols(n, count, seed, real=False, degree=3):
    """Reproducible catalogue of non-extremal bounded symbols.

    Even entries are random trigonometric polynomials in the coordinate
    phases, damped by powers of the moduli and clipped (to the unit disc, or
    to [-1, 1] for real symbols).  Odd entries are near-extremal: the
    extremal symbol for a random unit direction, with its phase perturbed
    (complex) or its sign blended with a polynomial (real).
    """
    out = []
    for i in range(count):
        rng = np.random.default_rng([seed, i])
        m = int(rng.integers(2, 6))
        freqs = rng.integers(-degree, degree + 1, size=(m, n))
        powers = rng.integers(0, 3, size=(m, n))
        coefs = rng.normal(size=m) + 1j * rng.normal(size=m)
        a = rng.normal(size=n) + 1j * rng.normal(size=n)
        a /= np.linalg.norm(a)
        eps = float(rng.uniform(0.05, 0.5))

        def poly(w, freqs=freqs, powers=powers, coefs=coefs):
            ang, mod = np.angle(w), np.abs(w)
            p = np.zeros(w.shape[:-1], dtype=complex)
            for f, q, c in zip(freqs, powers, coefs):
                p = p + c * np.exp(1j * (ang @ f)) * np.prod(mod**q, axis=-1)
            return p

        if i % 2 == 0:
            if real:
                def fn(w, poly=poly):
                    return np.clip(poly(w).real, -1.0, 1.0).astype(complex)
            else:
                def fn(w, poly=poly):
                    p = poly(w)
                    return p / np.maximum(1.0, np.abs(p))
        else:
            base = extremal_real(a) if real else extremal_complex(a)
            if real:
                def fn(w, poly=poly, base=base, eps=eps):
                    return np.clip((1 - eps) * base(w).real + eps * poly(w).real, -1.0, 1.0).astype(complex)
            else:
                def fn(w, poly=poly, base=base, eps=eps):
                    return base(w) * np.exp(1j * eps * poly(w).real)
        out.append(custom(n, fn, real=real))
    return out


@dataclass(frozen=True, eq=False)
class SeminormSample:
    z: np.ndarray
    value: float
    std_error: float


def _check_symbol(f, ctx):
    if f.n != ctx.n:
        raise ValueError(f"symbol lives in C^{f.n}, context in C^{ctx.n}")


def transform_at(f, z, ctx, cfg):
    """Monte-Carlo value of (B_alpha f)(z) = int K(z,w) f(w) dv_alpha(w)."""
    _check_symbol(f, ctx)
    z = as_point(z)
    return integrate_weighted(lambda w: kernel(z, w, ctx) * f(w), ctx, cfg)


def grad_transform_at(f, z, ctx, cfg, conjugate=False):
    """Componentwise Monte-Carlo of int dK/dz_i(z,w) f(w) dv_alpha(w).

    With ``conjugate=True`` the derivatives are taken in zbar_i instead.
    """
    _check_symbol(f, ctx)
    z = as_point(z)

    def integrand(w):
        g = kernel_grad_z(z, w, ctx)
        part = g.antiholomorphic if conjugate else g.holomorphic
        return part * f(w)[:, None]

    return integrate_weighted(integrand, ctx, cfg)


def _norm_with_error(est):
    """Euclidean norm of a vector estimate and its delta-method standard error."""
    v = np.atleast_1d(est.value)
    x = np.concatenate([v.real, v.imag]) if np.iscomplexobj(v) else v
    cov = est.covariance
    size = float(np.linalg.norm(x))
    if size == 0.0:
        return size, float(math.sqrt(np.trace(cov)))
    d = x / size
    return size, float(math.sqrt(max(d @ cov @ d, 0.0)))


def s_complex(f, z, ctx, cfg, conjugate=False):
    """S(z) = (1-|z|^2) |grad_z (B_alpha f)(z)| (or the zbar-gradient)."""
    z = as_point(z)
    size, se = _norm_with_error(grad_transform_at(f, z, ctx, cfg, conjugate))
    s = 1.0 - norm2(z)
    return SeminormSample(z, float(s * size), float(s * se))


def s_real(f, z, ctx, cfg):
    """(1-|z|^2) |grad (B_alpha f)(z)| with the real 2n-gradient, for real f."""
    _check_symbol(f, ctx)
    z = as_point(z)

    def integrand(w):
        vals = f(w)
        if np.any(np.abs(vals.imag) > 1e-9):
            raise ValueError("s_real requires a real-valued symbol")
        return kernel_grad_real(z, w, ctx) * vals.real[:, None]

    size, se = _norm_with_error(integrate_weighted(integrand, ctx, cfg))
    s = 1.0 - norm2(z)
    return SeminormSample(z, float(s * size), float(s * se))


# -- end-to-end experiments --------------------------------------------------


@dataclass
class Check:
    check: str
    value: float
    reference: float
    sigma_distance: Optional[float]
    rel_error: Optional[float]
    passed: bool


def _ctx_case_constant(case, ctx):
    if case == "complex":
        return sharp_constant_complex(ctx)
    if case == "real":
        return sharp_constant_real(ctx)
    raise ValueError(f"case must be 'complex' or 'real', got {case!r}")


def _seminorm(case, f, z, ctx, cfg):
    return s_complex(f, z, ctx, cfg) if case == "complex" else s_real(f, z, ctx, cfg)


@dataclass
class SharpnessReport:
    case: str
    n: int
    alpha: float
    constant: float
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)


def verify_sharpness(case, ctx, cfg, symbols=20, catalog_seed=2024,
                     radii=(0.0, 0.2, 0.4, 0.6, 0.8, 0.9)):
    """Attainment at z = 0 plus a no-counterexample sweep.

    (a) the extremal symbol at z = 0 must hit the constant within 4 sigma;
    (b) ``symbols`` seeded random symbols must stay below constant + 4 sigma;
    (c) the extremal symbol along the e_1 axis must stay below constant + 4 sigma.
    """
    const = _ctx_case_constant(case, ctx)
    n = ctx.n
    ext = extremal_complex(e1(n)) if case == "complex" else extremal_real(e1(n))
    report = SharpnessReport(case, n, ctx.alpha, const)

    s0 = _seminorm(case, ext, np.zeros(n), ctx, cfg)
    dist = abs(s0.value - const) / s0.std_error if s0.std_error > 0 else math.inf
    report.checks.append(Check("attainment@z=0", s0.value, const, dist,
                               abs(s0.value - const) / const, dist <= SIGMA))

    for i, f in enumerate(random_symbols(n, symbols, catalog_seed, real=(case == "real"))):
        z = radii[i % len(radii)] * e1(n)
        s = _seminorm(case, f, z, ctx, cfg)
        excess = (s.value - const) / s.std_error if s.std_error > 0 else -math.inf
        report.checks.append(Check(f"catalog[{i}]@|z|={radii[i % len(radii)]}", s.value, const,
                                   excess, None, s.value <= const + SIGMA * s.std_error))

    for rad in radii:
        s = _seminorm(case, ext, rad * e1(n), ctx, cfg)
        excess = (s.value - const) / s.std_error if s.std_error > 0 else -math.inf
        report.checks.append(Check(f"extremal@|z|={rad}", s.value, const, excess, None,
                                   s.value <= const + SIGMA * s.std_error))
    return report


@dataclass
class ScanResult:
    case: str
    n: int
    alpha: float
    r: np.ndarray
    values: np.ndarray
    regime: str
    reference: float  # sharp constant or strict upper bound
    oracle: Optional[np.ndarray] = None
    oracle_stderr: Optional[np.ndarray] = None

    @property
    def argmax(self):
        return int(np.argmax(self.values))

    @property
    def r_max(self):
        return float(self.r[self.argmax])

    @property
    def max_value(self):
        return float(self.values[self.argmax])

    @property
    def consistent(self):
        """Whether the scan shape matches what the regime predicts."""
        if self.regime == "sharp":
            return self.argmax == 0
        if self.regime == "bounded-strict":
            return 0.0 < self.r_max < 1.0 and self.argmax != 0 and self.max_value < self.reference
        return True


def bound_profile(case, ctx, r):
    if case == "complex":
        return bound_function_complex(ctx, r).value
    return bound_profile_real(ctx, r).value


def scan_r(case, ctx, r_grid, oracle_cfg=None):
    """Evaluate the case's bound function over ``r_grid``.

    For alpha < 0 the series side is not defined, so only the oracle column
    is produced (and used as the value column).
    """
    r = np.asarray(r_grid, dtype=float)
    if r.size == 0:
        raise ValueError("empty r grid")
    threshold = sharp_threshold(ctx.n, case)
    if ctx.alpha < 0:
        regime, ref = "unbounded", math.inf
    elif ctx.alpha <= threshold:
        regime, ref = "sharp", _ctx_case_constant(case, ctx)
    else:
        regime = "bounded-strict"
        ref = upper_bound_complex(ctx) if case == "complex" else upper_bound_real(ctx)

    oracle = oracle_se = None
    if oracle_cfg is not None or ctx.alpha < 0:
        if case != "complex":
            raise ValueError("the oracle column is available for the complex case only")
        cfg = oracle_cfg or QuadratureConfig()
        if ctx.alpha < 0:
            cfg = QuadratureConfig(cfg.samples, cfg.seed, "radial-importance", cfg.workers)
        ests = [bound_integral_complex(ctx, float(x), cfg) for x in r]
        oracle = np.array([e.value for e in ests])
        oracle_se = np.array([e.std_error for e in ests])

    if ctx.alpha < 0:
        values = oracle
    else:
        values = np.array([bound_profile(case, ctx, float(x)) for x in r])
    return ScanResult(case, ctx.n, ctx.alpha, r, values, regime, ref, oracle, oracle_se)


@dataclass
class UnboundedDemo:
    n: int
    alpha: float
    r: list
    values: list
    std_errors: list

    @property
    def increasing(self):
        """Every step up exceeds 4 joint standard errors."""
        return all(
            b - a > SIGMA * math.hypot(sa, sb)
            for a, b, sa, sb in zip(self.values, self.values[1:], self.std_errors, self.std_errors[1:])
        )

    @property
    def ratio(self):
        return self.values[-1] / self.values[0]


def demonstrate_unbounded(ctx, r_list=(0.0, 0.5, 0.9, 0.99), cfg=None):
    """Oracle values of (n+1) c_alpha T(r) for -1 < alpha < 0 at increasing r.

    Sampling uses dv_alpha directly (radial importance): against uniform
    points the weight (1-|w|^2)^alpha has infinite variance for alpha <= -1/2.
    """
    if not -1.0 < ctx.alpha < 0.0:
        raise RegimeError("demonstrate_unbounded needs -1 < alpha < 0")
    cfg = cfg or QuadratureConfig()
    cfg = QuadratureConfig(cfg.samples, cfg.seed, "radial-importance", cfg.workers)
    ests = [bound_integral_complex(ctx, float(r), cfg) for r in r_list]
    return UnboundedDemo(ctx.n, ctx.alpha, list(map(float, r_list)),
                         [e.value for e in ests], [e.std_error for e in ests])
