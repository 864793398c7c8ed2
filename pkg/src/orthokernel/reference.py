"""Closed-form reference values used as independent oracles.

Nothing here touches the recurrence machinery: Chebyshev kernels come from
trigonometric sums, Legendre kernels from scipy's classical polynomials, and
Maclaurin coefficients from a Cauchy-contour transform.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import eval_legendre

__all__ = [
    "chebyshev1_kernel",
    "legendre_kernel",
    "sine_kernel_det",
    "fixed_scale_sine_limit",
    "maclaurin_table",
    "sinc_generator_derivative",
]


def chebyshev1_kernel(n: int, x, y):
    """K_n for the weight (1 - x^2)^{-1/2}: (1/pi)(1 + 2 sum_{k=1}^{n-1} cos k theta cos k phi)."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    th = np.arccos(x)[..., None]
    ph = np.arccos(y)[..., None]
    k = np.arange(1, n)
    return (1.0 + 2.0 * np.sum(np.cos(k * th) * np.cos(k * ph), axis=-1)) / np.pi


def legendre_kernel(n: int, x, y):
    """K_n for the Legendre weight from scipy's P_k, orthonormalized by sqrt(k + 1/2)."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    k = np.arange(n)
    px = eval_legendre(k, x[..., None])
    py = eval_legendre(k, y[..., None])
    return np.sum((k + 0.5) * px * py, axis=-1)


def sine_kernel_det(xis) -> float:
    """det(sin pi(xi_i - xi_j) / pi(xi_i - xi_j))."""
    xis = np.asarray(xis, dtype=float)
    d = xis[:, None] - xis[None, :]
    with np.errstate(invalid="ignore", divide="ignore"):
        S = np.where(d == 0, 1.0, np.sin(np.pi * d) / (np.pi * d))
    return float(np.linalg.det(S))


def fixed_scale_sine_limit(x, a, b):
    """Limit of (1/n) K~_n(x + a/n, x + b/n): sin((a - b)/sqrt(1 - x^2)) / (pi (a - b))."""
    x, a, b = (np.asarray(v, dtype=float) for v in (x, a, b))
    s = np.sqrt(1.0 - x * x)
    d = a - b
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(d == 0, 1.0 / (np.pi * s), np.sin(d / s) / (np.pi * d))
    return float(out) if out.ndim == 0 else out


def maclaurin_table(f, order: int, radii=(4.0, 3.0), samples: int = 64) -> np.ndarray:
    """c[r, s] with f(a, b) = sum c[r, s] a^r b^s, for r, s <= order.

    Trapezoidal rule on the torus |a| = radii[0], |b| = radii[1] (a 2-D FFT);
    exponentially accurate for entire f.  Distinct radii keep a - b away from 0.
    """
    ra, rb = radii
    ang = 2.0 * np.pi * np.arange(samples) / samples
    A = ra * np.exp(1j * ang)[:, None]
    B = rb * np.exp(1j * ang)[None, :]
    F = np.fft.fft2(f(A, B)) / samples ** 2
    r = np.arange(order + 1)
    return (F[: order + 1, : order + 1] / (ra ** r[:, None] * rb ** r[None, :])).real


def _sin_over(a, b):
    z = a - b
    return np.sin(z) / z


def sinc_generator_derivative(r: int, s: int) -> float:
    """d^r/da^r d^s/db^s of sin(a - b)/(a - b) at the origin, by contour extraction."""
    order = max(r, s)
    c = maclaurin_table(_sin_over, order)
    return float(c[r, s] * math.factorial(r) * math.factorial(s))
