"""Orthonormal polynomials, reproducing kernels, Christoffel functions and correlation determinants."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .measure import Measure
from .recurrence import RecurrenceTable

__all__ = [
    "PolyColumns",
    "KernelValue",
    "poly_matrix",
    "poly_derivatives",
    "eval_polys",
    "kernel",
    "kernel_at",
    "christoffel",
    "deriv_kernel",
    "normalized_kernel",
    "correlation_det",
    "sinc",
]

MAX_DERIVATIVE = 6
_CD_MIN_GAP = 1e-6
_SINC_SWITCH = 1e-8


def _check_depth(t: RecurrenceTable, n: int):
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if n > t.max_degree + 1:
        raise ValueError(f"n={n} exceeds the table depth {t.max_degree}")


def poly_matrix(t: RecurrenceTable, n: int, x) -> np.ndarray:
    """p_0..p_{n-1} at ``x``; result has shape x.shape + (n,). Requires n <= N + 1."""
    _check_depth(t, n)
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape + (n,))
    out[..., 0] = t.gamma0
    if n > 1:
        out[..., 1] = (x - t.b[0]) * t.gamma0 / t.a[0]
    for k in range(1, n - 1):
        out[..., k + 1] = ((x - t.b[k]) * out[..., k] - t.a[k - 1] * out[..., k - 1]) / t.a[k]
    return out


def poly_derivatives(t: RecurrenceTable, n: int, x, r_max: int) -> np.ndarray:
    """p_k^{(r)}(x) for r = 0..r_max, k = 0..n-1; shape (r_max + 1,) + x.shape + (n,).

    Uses the r-times differentiated recurrence
    a_{k+1} p_{k+1}^{(r)} = (x - b_k) p_k^{(r)} + r p_k^{(r-1)} - a_k p_{k-1}^{(r)}.
    """
    if not 0 <= r_max <= MAX_DERIVATIVE:
        raise ValueError(f"derivative order must lie in [0, {MAX_DERIVATIVE}]")
    _check_depth(t, n)
    x = np.asarray(x, dtype=float)
    out = np.zeros((r_max + 1,) + x.shape + (n,))
    out[0] = poly_matrix(t, n, x)
    for r in range(1, r_max + 1):
        cur, lower = out[r], out[r - 1]
        # p_0 is constant, so p_0^{(r)} = 0 for r >= 1
        for k in range(0, n - 1):
            val = (x - t.b[k]) * cur[..., k] + r * lower[..., k]
            if k:
                val = val - t.a[k - 1] * cur[..., k - 1]
            cur[..., k + 1] = val / t.a[k]
    return out


@dataclass(frozen=True, eq=False)
class PolyColumns:
    point: float
    order: int
    values: np.ndarray  # (n, order + 1): entry (k, r) = p_k^{(r)}(point)

    @property
    def n(self) -> int:
        return self.values.shape[0]


def eval_polys(t: RecurrenceTable, n: int, x: float, r_max: int = 0) -> PolyColumns:
    if n > t.max_degree:
        raise ValueError(f"n={n} exceeds the table depth {t.max_degree}")
    vals = poly_derivatives(t, n, float(x), r_max)  # (r_max+1, n)
    return PolyColumns(float(x), int(r_max), np.ascontiguousarray(vals.T))


@dataclass(frozen=True)
class KernelValue:
    n: int
    x: float
    y: float
    K: float
    K_tilde: float | None
    cd_residual: float | None


def kernel(t: RecurrenceTable, n: int, x, y) -> np.ndarray:
    """K_n(x, y) = sum_{k<n} p_k(x) p_k(y), elementwise over broadcast x, y."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return np.einsum("...k,...k->...", poly_matrix(t, n, x), poly_matrix(t, n, y))


def _christoffel_darboux(t: RecurrenceTable, n: int, x: float, y: float) -> float:
    px = poly_matrix(t, n + 1, x)
    py = poly_matrix(t, n + 1, y)
    return float(t.a[n - 1] * (px[n] * py[n - 1] - px[n - 1] * py[n]) / (x - y))


def normalized_kernel(m: Measure, t: RecurrenceTable, n: int, x, y) -> np.ndarray:
    """w(x)^{1/2} w(y)^{1/2} K_n(x, y)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(np.abs(x) >= 1) or np.any(np.abs(y) >= 1):
        raise DomainError("normalized kernel needs points in (-1, 1)")
    return np.sqrt(m.weight.evaluate(x) * m.weight.evaluate(y)) * kernel(t, n, x, y)


def kernel_at(t: RecurrenceTable, n: int, x: float, y: float,
              measure: Measure | None = None) -> KernelValue:
    """K_n(x, y) by direct summation, cross-checked against Christoffel-Darboux.

    ``cd_residual`` is the relative gap between the two forms (None for
    |x - y| <= 1e-6 or when p_n is not available).  ``K_tilde`` uses ``measure``
    or the table's own measure.
    """
    x, y = float(x), float(y)
    K = float(kernel(t, n, x, y))
    cd_res = None
    if abs(x - y) > _CD_MIN_GAP and n <= t.max_degree:
        cd = _christoffel_darboux(t, n, x, y)
        scale = math.sqrt(float(kernel(t, n, x, x)) * float(kernel(t, n, y, y)))
        cd_res = abs(cd - K) / scale
    m = measure if measure is not None else t.measure
    K_tilde = None
    if m is not None and abs(x) < 1 and abs(y) < 1:
        wx, wy = m.weight(x), m.weight(y)
        if math.isfinite(wx) and math.isfinite(wy):
            K_tilde = math.sqrt(wx * wy) * K
    return KernelValue(n, x, y, K, K_tilde, cd_res)


def christoffel(t: RecurrenceTable, n: int, x):
    """lambda_n(x) = 1 / K_n(x, x)."""
    lam = 1.0 / kernel(t, n, x, x)
    return float(lam) if np.ndim(lam) == 0 else lam


def deriv_kernel(t: RecurrenceTable, n: int, x, r: int, s: int):
    """K_n^{(r,s)}(x, x) = sum_{k<n} p_k^{(r)}(x) p_k^{(s)}(x)."""
    if r < 0 or s < 0:
        raise ValueError("derivative orders must be nonnegative")
    d = poly_derivatives(t, n, x, max(r, s))
    val = np.einsum("...k,...k->...", d[r], d[s])
    return float(val) if np.ndim(val) == 0 else val


def correlation_det(m: Measure, t: RecurrenceTable, n: int, points) -> float:
    """det(K~_n(y_i, y_j)), LU with partial pivoting."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 1 or not 1 <= pts.size <= 8:
        raise ValueError("correlation_det takes between 1 and 8 points")
    M = normalized_kernel(m, t, n, pts[:, None], pts[None, :])
    return float(np.linalg.det(M))


def sinc(u):
    """sin(pi u) / (pi u), equal to 1 at u = 0."""
    u = np.asarray(u, dtype=float)
    z = np.pi * u
    small = np.abs(u) < _SINC_SWITCH
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(small, 1.0 - z * z / 6.0 + z ** 4 / 120.0, np.sin(z) / z)
    return float(out) if out.ndim == 0 else out
