"""Three-term recurrence coefficients of orthonormal polynomials.

Convention: x p_n = a_{n+1} p_{n+1} + b_n p_n + a_n p_{n-1}, p_{-1} = 0 and
p_0 = gamma0 = mu([-1, 1])^{-1/2}.  A table of depth N stores a_1..a_N and
b_0..b_{N-1}, enough to generate p_0..p_N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneracyError
from .measure import Jacobi, Measure
from .quadrature import CompositeScheme, composite_scheme, discretize

__all__ = [
    "RecurrenceTable",
    "stieltjes",
    "jacobi_closed_form",
    "nevai_diagnostic",
    "regularity_diagnostic",
    "orthonormality_residual",
]

_REORTH_RATIO = 1e-8


@dataclass(frozen=True, eq=False)
class RecurrenceTable:
    a: np.ndarray
    b: np.ndarray
    gamma0: float
    measure: Measure | None = field(default=None, repr=False)

    def __post_init__(self):
        a = np.array(self.a, dtype=float)
        b = np.array(self.b, dtype=float)
        if a.shape != b.shape or a.ndim != 1 or a.size == 0:
            raise ValueError("a and b must be 1-D arrays of equal, nonzero length")
        if not np.all(a > 0) or not np.all(np.isfinite(a)):
            raise DegeneracyError("recurrence coefficients a_n must be positive and finite")
        if not self.gamma0 > 0:
            raise DegeneracyError("gamma0 must be positive")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "gamma0", float(self.gamma0))

    @property
    def max_degree(self) -> int:
        return int(self.a.size)

    def log_gamma(self) -> np.ndarray:
        """log gamma_n for n = 0..N."""
        return math.log(self.gamma0) - np.concatenate(([0.0], np.cumsum(np.log(self.a))))

    def truncated(self, n: int) -> "RecurrenceTable":
        if not 1 <= n <= self.max_degree:
            raise ValueError(f"cannot truncate a depth-{self.max_degree} table to {n}")
        return RecurrenceTable(self.a[:n], self.b[:n], self.gamma0, self.measure)

    def rows(self):
        """(n, a_n, b_n) for n = 1..N; b index shifts with a so rows stay aligned."""
        return [(n, float(self.a[n - 1]), float(self.b[n - 1])) for n in range(1, self.max_degree + 1)]


def stieltjes(m: Measure, N: int, scheme: CompositeScheme | None = None) -> RecurrenceTable:
    """Stieltjes procedure on the discretized measure.

    Raises DegeneracyError when N exceeds the scheme capacity or a norm
    collapses to a non-positive or non-finite value.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    if scheme is None:
        scheme = composite_scheme(m)
    if N > scheme.capacity:
        raise DegeneracyError(
            f"N={N} exceeds the quadrature capacity {scheme.capacity} "
            f"({len(scheme.segments)} segments x {scheme.points_per_segment} points / 2)")
    x, w = discretize(m, scheme)
    mu0 = float(np.sum(w))
    if not (mu0 > 0 and math.isfinite(mu0)):
        raise DegeneracyError(f"total mass {mu0} is not positive and finite")
    a = np.empty(N)
    b = np.empty(N)
    p_prev = np.zeros_like(x)
    p = np.full_like(x, 1.0 / math.sqrt(mu0))
    a_prev = 0.0
    for n in range(N):
        wp = w * p
        b[n] = np.dot(wp, x * p)
        xp = x * p
        q = xp - b[n] * p - a_prev * p_prev
        norm = math.sqrt(np.dot(w, q * q))
        if norm < _REORTH_RATIO * math.sqrt(np.dot(w, xp * xp)):
            q -= np.dot(w, q * p) * p + np.dot(w, q * p_prev) * p_prev
            norm = math.sqrt(np.dot(w, q * q))
        if not (norm > 0 and math.isfinite(norm)):
            raise DegeneracyError(
                f"norm of p_{n + 1} is {norm}: measure supported on too few points "
                "or quadrature too coarse")
        a[n] = norm
        p_prev, p = p, q / norm
        a_prev = norm
    return RecurrenceTable(a, b, 1.0 / math.sqrt(mu0), m)


def _jacobi_mass(alpha: float, beta: float) -> float:
    return math.exp((alpha + beta + 1) * math.log(2.0) + math.lgamma(alpha + 1)
                    + math.lgamma(beta + 1) - math.lgamma(alpha + beta + 2))


def jacobi_closed_form(alpha: float, beta: float, N: int) -> RecurrenceTable:
    """Orthonormal recurrence for (1 - x)^alpha (1 + x)^beta from the classical formulas."""
    if not (alpha > -1 and beta > -1):
        raise ValueError(f"Jacobi parameters must exceed -1, got ({alpha}, {beta})")
    if N < 1:
        raise ValueError("N must be at least 1")
    al, be = float(alpha), float(beta)
    s = al + be
    n = np.arange(N, dtype=float)
    # b_n; the n = 0 term is written separately to avoid 0/0 when alpha + beta = 0
    b = np.empty(N)
    b[0] = (be - al) / (s + 2)
    if N > 1:
        k = n[1:]
        b[1:] = (be * be - al * al) / ((2 * k + s) * (2 * k + s + 2))
    # a_n, n >= 1; a_1 separately for the alpha + beta = -1 removable singularity
    a2 = np.empty(N)
    a2[0] = 4 * (1 + al) * (1 + be) / ((2 + s) ** 2 * (3 + s))
    if N > 1:
        k = n[1:] + 1
        a2[1:] = (4 * k * (k + al) * (k + be) * (k + s)
                  / ((2 * k + s) ** 2 * (2 * k + s + 1) * (2 * k + s - 1)))
    gamma0 = 1.0 / math.sqrt(_jacobi_mass(al, be))
    return RecurrenceTable(np.sqrt(a2), b, gamma0, Measure(Jacobi(al, be)))


def nevai_diagnostic(t: RecurrenceTable, tail_start: int):
    """(sup_{n >= tail_start} |a_n - 1/2|, sup_{n >= tail_start} |b_n|)."""
    if not 0 <= tail_start < t.max_degree:
        raise ValueError(f"tail_start must lie in [0, {t.max_degree})")
    a_tail = t.a[max(tail_start, 1) - 1:]
    b_tail = t.b[tail_start:]
    return float(np.max(np.abs(a_tail - 0.5))), float(np.max(np.abs(b_tail)))


def regularity_diagnostic(t: RecurrenceTable) -> np.ndarray:
    """gamma_n^{1/n} for n = 1..N, computed in log space.

    This tends to 2 (= 1/capacity of [-1, 1]) for regular measures; the
    reciprocal tends to 1/2.
    """
    n = np.arange(1, t.max_degree + 1)
    return np.exp(t.log_gamma()[1:] / n)


def orthonormality_residual(t: RecurrenceTable, m: Measure | None = None,
                            scheme: CompositeScheme | None = None, N: int | None = None) -> float:
    """max_{i,j <= N} |int p_i p_j dmu - delta_ij| on the scheme's nodes."""
    from .kernel import poly_matrix

    m = m if m is not None else t.measure
    if m is None:
        raise ValueError("a measure is needed to test orthonormality")
    N = t.max_degree if N is None else N
    if scheme is None:
        scheme = composite_scheme(m)
    x, w = discretize(m, scheme)
    P = poly_matrix(t, N + 1, x)
    G = P.T @ (w[:, None] * P)
    return float(np.max(np.abs(G - np.eye(N + 1))))
