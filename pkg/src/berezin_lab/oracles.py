"""Direct quadrature of the integrals that the series module sums in closed form.

Nothing here touches the series code; each function integrates the
defining expression itself, so agreement is an independent check.
"""

import math

import numpy as np
from scipy import integrate

from .quadrature import integrate_real_ball, integrate_weighted


def bound_integral_complex(ctx, r, cfg):
    """Monte-Carlo value of

        (n+1) c_alpha (1-r^2)^alpha int_B |zeta_1| (1-|zeta|^2)^alpha |1 - r zeta_1|^(-2 alpha) dv.

    The weight (1-|zeta|^2)^alpha c_alpha is carried by dv_alpha, leaving a
    bounded integrand for every alpha > -1.
    """
    if not 0.0 <= r < 1.0:
        raise ValueError("r must lie in [0, 1)")
    a = ctx.alpha

    def f(w):
        return np.abs(w[:, 0]) * np.abs(1.0 - r * w[:, 0]) ** (-2.0 * a)

    est = integrate_weighted(f, ctx, cfg)
    scale = (ctx.n + 1) * (1.0 - r * r) ** a
    est.value *= scale
    est.std_error *= scale
    est.covariance = est.covariance * scale**2
    return est


def bound_integral_real(ctx, r, nu1, nu2, cfg):
    """Monte-Carlo value over the real 2n-ball of

        |mu_1| (1-|mu|^2)^alpha / (1 - r mu_1 nu1 - r mu_2 nu2)^(2 alpha).
    """
    a = ctx.alpha

    def f(mu):
        lin = 1.0 - r * (mu[:, 0] * nu1 + mu[:, 1] * nu2)
        return np.abs(mu[:, 0]) * (1.0 - np.sum(mu * mu, axis=1)) ** a * lin ** (-2.0 * a)

    return integrate_real_ball(f, 2 * ctx.n, cfg)


def real_ball_moment(n, k, j, alpha, cfg):
    """Monte-Carlo value of int_{B_2n} |mu_1|^(2k-2j+1) mu_2^(2j) (1-|mu|^2)^alpha dv."""

    def f(mu):
        return (
            np.abs(mu[:, 0]) ** (2 * k - 2 * j + 1)
            * mu[:, 1] ** (2 * j)
            * (1.0 - np.sum(mu * mu, axis=1)) ** alpha
        )

    return integrate_real_ball(f, 2 * n, cfg)


def quarter_disc_integral(k, j, alpha, epsabs=0.0, epsrel=1e-12):
    """Adaptive 2-D quadrature of

        int int_{rho1^2 + rho2^2 < 1, rho > 0} (1 - rho1^2 - rho2^2)^alpha rho1^(2j+2) rho2^(2k-2j+1).
    """

    def integrand(rho2, rho1):
        return (1.0 - rho1 * rho1 - rho2 * rho2) ** alpha * rho1 ** (2 * j + 2) * rho2 ** (2 * k - 2 * j + 1)

    value, _ = integrate.dblquad(
        integrand, 0.0, 1.0, 0.0, lambda rho1: math.sqrt(max(0.0, 1.0 - rho1 * rho1)),
        epsabs=epsabs, epsrel=epsrel,
    )
    return value
