"""Seeded Monte-Carlo integration over real and complex unit balls.

Samples are produced in fixed-size chunks; chunk ``i`` draws from its own
counter-based (Philox) substream keyed by ``(seed, i)``.  The chunk layout
does not depend on the number of workers, and chunk results are reduced in
index order, so serial and threaded runs agree bit for bit.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .ball import from_real

CHUNK = 1 << 16
METHODS = ("uniform", "radial-importance")


@dataclass(frozen=True)
class QuadratureConfig:
    samples: int = 1_000_000
    seed: int = 0
    method: str = "uniform"
    workers: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


@dataclass
class IntegralEstimate:
    """Monte-Carlo mean with its standard error.

    ``value`` and ``std_error`` are scalars for scalar integrands and arrays
    (one entry per component) for vector integrands.  For complex entries
    ``std_error`` is sqrt(var(Re) + var(Im)) / sqrt(samples).
    ``covariance`` is the covariance of the estimate over the stacked real
    coordinates ``[Re v_1..Re v_m, Im v_1..Im v_m]`` (real parts only for
    real integrands).
    """

    value: object
    std_error: object
    samples: int
    seed: int
    covariance: Optional[np.ndarray] = None

    def sigma_distance(self, reference):
        se = np.asarray(self.std_error, dtype=float)
        diff = np.abs(np.asarray(self.value) - reference)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(se > 0, diff / np.where(se > 0, se, 1.0), np.where(diff > 0, np.inf, 0.0))
        return float(out) if out.ndim == 0 else out


def ball_volume(dim):
    """Lebesgue volume of the real unit ball in R^dim."""
    return math.pi ** (dim / 2) / math.gamma(dim / 2 + 1)


def _rng(seed, chunk):
    ss = np.random.SeedSequence(seed, spawn_key=(chunk,))
    return np.random.Generator(np.random.Philox(ss))


def _chunk_sizes(samples):
    full, rest = divmod(samples, CHUNK)
    return [CHUNK] * full + ([rest] if rest else [])


def _directions(rng, m, dim):
    g = rng.standard_normal((m, dim))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _uniform_chunk(rng, m, dim):
    radius = rng.random(m) ** (1.0 / dim)
    return _directions(rng, m, dim) * radius[:, None]


def sample_ball(dim, cfg):
    """Yield chunks of points uniformly distributed in the unit ball of R^dim."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    for i, m in enumerate(_chunk_sizes(cfg.samples)):
        yield _uniform_chunk(_rng(cfg.seed, i), m, dim)


def _map_chunks(fn, cfg):
    sizes = _chunk_sizes(cfg.samples)
    jobs = list(enumerate(sizes))
    if cfg.workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            return list(pool.map(lambda job: fn(_rng(cfg.seed, job[0]), job[1]), jobs))
    return [fn(_rng(cfg.seed, i), m) for i, m in jobs]


def _reduce(parts, cfg):
    vals = np.concatenate(parts, axis=0)
    if not np.all(np.isfinite(vals)):
        raise ValueError("integrand produced a non-finite value at a sampled point")
    scalar = vals.ndim == 1
    if scalar:
        vals = vals[:, None]
    n = vals.shape[0]
    mean = vals.mean(axis=0)
    if np.iscomplexobj(vals):
        stacked = np.concatenate([vals.real, vals.imag], axis=1)
    else:
        stacked = vals
    if n > 1:
        cov = np.atleast_2d(np.cov(stacked, rowvar=False)) / n
    else:
        cov = np.zeros((stacked.shape[1], stacked.shape[1]))
    var = np.diag(cov)
    m = vals.shape[1]
    se = np.sqrt(var[:m] + var[m:]) if np.iscomplexobj(vals) else np.sqrt(var)
    if scalar:
        value = complex(mean[0]) if np.iscomplexobj(vals) else float(mean[0])
        return IntegralEstimate(value, float(se[0]), cfg.samples, cfg.seed, cov)
    return IntegralEstimate(mean, se, cfg.samples, cfg.seed, cov)


def integrate_real_ball(f, dim, cfg):
    """Estimate the Lebesgue integral of ``f`` over the unit ball of R^dim.

    ``f`` receives an ``(m, dim)`` array and returns ``(m,)`` or ``(m, k)``.
    """
    vol = ball_volume(dim)

    def chunk(rng, m):
        return vol * np.asarray(f(_uniform_chunk(rng, m, dim)))

    return _reduce(_map_chunks(chunk, cfg), cfg)


def integrate_lebesgue(f, n, cfg):
    """Estimate the integral of ``f`` over the complex unit ball in C^n against dv."""
    return integrate_real_ball(lambda x: f(from_real(x)), 2 * n, cfg)


def weighted_points(rng, m, ctx, method):
    """Draw ``m`` points and importance weights for integration against dv_alpha.

    ``mean(f(w) * weight)`` is unbiased for the integral of f dv_alpha.
    With ``radial-importance`` the points follow dv_alpha exactly: |w|^2 is
    Beta(n, alpha+1) distributed, so every weight equals one.
    """
    n, alpha = ctx.n, ctx.alpha
    if method == "uniform":
        w = from_real(_uniform_chunk(rng, m, 2 * n))
        gap = 1.0 - np.sum(np.abs(w) ** 2, axis=1)
        weight = ball_volume(2 * n) * ctx.c_alpha * gap**alpha
        return w, weight
    # draw 1 - |w|^2 directly so the boundary layer keeps full relative precision
    gap = np.maximum(rng.beta(alpha + 1.0, n, size=m), 1e-15)
    w = from_real(_directions(rng, m, 2 * n) * np.sqrt(1.0 - gap)[:, None])
    return w, np.ones(m)


def integrate_weighted(f, ctx, cfg):
    """Estimate the integral of ``f`` against the probability measure dv_alpha."""

    def chunk(rng, m):
        w, weight = weighted_points(rng, m, ctx, cfg.method)
        vals = np.asarray(f(w))
        return vals * (weight if vals.ndim == 1 else weight[:, None])

    return _reduce(_map_chunks(chunk, cfg), cfg)


def double_angle_integral(rho1, rho2, c1, c2, alpha, nodes=512):
    """Tensor trapezoidal rule for the double angular integral

        int_0^{2pi} int_0^{2pi} |1 - (c1 rho1 e^{i t1} + c2 rho2 e^{i t2})|^(-2 alpha) dt1 dt2.

    The integrand is smooth and periodic, so the rule converges geometrically.
    """
    a, b = c1 * rho1, c2 * rho2
    if min(a, b, rho1, rho2, c1, c2) < 0:
        raise ValueError("radii and coefficients must be nonnegative")
    if a + b >= 1.0:
        raise ValueError("c1*rho1 + c2*rho2 must be < 1 for a finite integrand")
    t = 2.0 * np.pi * np.arange(nodes) / nodes
    e = np.exp(1j * t)
    mod = np.abs(1.0 - (a * e[:, None] + b * e[None, :]))
    h = 2.0 * np.pi / nodes
    return float(h * h * np.sum(mod ** (-2.0 * alpha)))
