"""Primitives of the complex unit ball in C^n.

Points are complex numpy arrays whose last axis has length ``n``; leading
axes are batch axes, so every function here maps over sample clouds
without Python loops.  ``to_real``/``from_real`` convert to and from the
2n real coordinates (x_1, y_1, ..., x_n, y_n).
"""

import numpy as np


def as_point(z):
    """Coerce ``z`` to a complex array with at least one axis."""
    z = np.asarray(z, dtype=complex)
    if z.ndim == 0:
        z = z.reshape(1)
    if z.shape[-1] < 1:
        raise ValueError("points need n >= 1 coordinates")
    return z


def to_real(z):
    z = as_point(z)
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],))
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def from_real(x):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] % 2:
        raise ValueError("real coordinate vector must have even length")
    return x[..., 0::2] + 1j * x[..., 1::2]


def herm_inner(z, w):
    """Hermitian inner product sum_k z_k conj(w_k), linear in ``z``."""
    z, w = as_point(z), as_point(w)
    if z.shape[-1] != w.shape[-1]:
        raise ValueError(f"dimension mismatch: {z.shape[-1]} vs {w.shape[-1]}")
    return np.sum(z * np.conj(w), axis=-1)


def norm2(z):
    """|z|^2 as a real array."""
    return herm_inner(z, z).real


def check_in_ball(z, name="z"):
    # strict: no tolerance, closure points must be rescaled by the caller
    if np.any(norm2(z) >= 1.0):
        raise ValueError(f"{name} must lie in the open unit ball")


def mobius(z, xi):
    """Involutive automorphism phi_z of the ball, exchanging 0 and ``z``.

    For ``z = 0`` the defining quotient is 0/0 in its projection terms;
    the continuous limit ``-xi`` is returned.
    """
    z, xi = as_point(z), as_point(xi)
    check_in_ball(z, "z")
    check_in_ball(xi, "xi")
    if z.ndim != 1:
        raise ValueError("mobius expects a single centre z")
    zz = norm2(z)
    if zz == 0.0:
        return -xi
    xz = herm_inner(xi, z)[..., None]
    proj = xz / zz * z
    return (z - proj - np.sqrt(1.0 - zz) * (xi - proj)) / (1.0 - xz)


def identity_residuals(z, xi):
    """Absolute residuals of the two standard Mobius identities.

    Returns ``(r3, r4)`` where ``r3`` checks
    ``1 - |phi_z(xi)|^2 = (1-|z|^2)(1-|xi|^2)/|1-<z,xi>|^2`` and ``r4`` checks
    ``1 - |z|^2 = (1-<z,xi>)(1-<z,phi_z(xi)>)``.
    """
    z, xi = as_point(z), as_point(xi)
    phi = mobius(z, xi)
    zz, xx = norm2(z), norm2(xi)
    zx = herm_inner(z, xi)
    lhs3 = 1.0 - norm2(phi)
    rhs3 = (1.0 - zz) * (1.0 - xx) / np.abs(1.0 - zx) ** 2
    rhs4 = (1.0 - zx) * (1.0 - herm_inner(z, phi))
    return np.abs(lhs3 - rhs3), np.abs((1.0 - zz) - rhs4)


def jacobian_real(z, xi):
    """Real Jacobian determinant of phi_z at ``xi``."""
    z, xi = as_point(z), as_point(xi)
    check_in_ball(z, "z")
    check_in_ball(xi, "xi")
    n = z.shape[-1]
    return ((1.0 - norm2(z)) / np.abs(1.0 - herm_inner(z, xi)) ** 2) ** (n + 1)
