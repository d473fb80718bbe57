"""The Berezin kernel K(z, w) and its first derivatives in z.

K(z, w) = (1 - |z|^2)^(n+1) / |1 - <z, w>|^(2n+2).  ``z`` is a single
point, ``w`` may carry leading batch axes.
"""

from dataclasses import dataclass

import numpy as np

from .ball import as_point, herm_inner, norm2

# closest approach to the sphere accepted for the kernel's first argument
BOUNDARY_GAP = 1e-9


@dataclass(frozen=True)
class KernelGradient:
    holomorphic: np.ndarray  # dK/dz_i
    antiholomorphic: np.ndarray  # dK/dzbar_i, the conjugate since K is real

    def norm(self):
        return np.sqrt(np.sum(np.abs(self.holomorphic) ** 2, axis=-1))


def _ipow(x, m):
    """x**m for integer m >= 0 by repeated squaring (no complex logs)."""
    out = np.ones_like(x)
    base = x
    while m:
        if m & 1:
            out = out * base
        base = base * base
        m >>= 1
    return out


def _check(z, w):
    z, w = as_point(z), as_point(w)
    if z.ndim != 1:
        raise ValueError("kernel expects a single point z")
    if z.shape[-1] != w.shape[-1]:
        raise ValueError("dimension mismatch between z and w")
    if np.sqrt(norm2(z)) >= 1.0 - BOUNDARY_GAP:
        raise ValueError("|z| too close to (or beyond) the unit sphere")
    if np.any(norm2(w) >= 1.0):
        raise ValueError("w must lie in the open unit ball")
    return z, w


def kernel(z, w, ctx):
    z, w = _check(z, w)
    n = ctx.n
    return (1.0 - norm2(z)) ** (n + 1) / np.abs(1.0 - herm_inner(z, w)) ** (2 * n + 2)


def kernel_grad_z(z, w, ctx):
    z, w = _check(z, w)
    n = ctx.n
    s = 1.0 - norm2(z)
    q = 1.0 - herm_inner(z, w)
    denom = _ipow(q, n + 2) * _ipow(np.conj(q), n + 1)
    coef = (n + 1) * s**n / denom
    hol = coef[..., None] * (s * np.conj(w) - q[..., None] * np.conj(z))
    return KernelGradient(hol, np.conj(hol))


def kernel_grad_real(z, w, ctx):
    """Real gradient (d/dx_1, d/dy_1, ..., d/dx_n, d/dy_n) of K in z."""
    g = kernel_grad_z(z, w, ctx)
    dx = g.holomorphic + g.antiholomorphic
    dy = 1j * (g.holomorphic - g.antiholomorphic)
    scale = np.maximum(np.abs(dx), np.abs(dy)).max(initial=0.0)
    residue = max(np.abs(dx.imag).max(initial=0.0), np.abs(dy.imag).max(initial=0.0))
    if residue > 1e-12 * max(1.0, scale):
        raise ArithmeticError(f"real gradient carries imaginary residue {residue:.3e}")
    out = np.empty(dx.shape[:-1] + (2 * dx.shape[-1],))
    out[..., 0::2] = dx.real
    out[..., 1::2] = dy.real
    return out
