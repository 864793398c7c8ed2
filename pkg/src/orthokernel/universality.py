"""Convergence experiments for bulk universality, Christoffel asymptotics and localization.

Each driver evaluates one finite-n error functional over a grid and, for a
schedule of degrees, collects the values into a ConvergenceReport.  All
evaluation is vectorized numpy in a fixed order, so reports are bit-stable.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, PreconditionError
from .kernel import (
    deriv_kernel,
    kernel,
    normalized_kernel,
    poly_matrix,
    sinc,
)
from .measure import Interval, Measure, dominates
from .quadrature import composite_scheme, gauss_legendre
from .recurrence import RecurrenceTable, stieltjes

__all__ = [
    "ScalingConfig",
    "ConvergenceReport",
    "table_for",
    "bulk_ratio",
    "universality_error",
    "christoffel_limit_error",
    "christoffel_bracket",
    "christoffel_sweep",
    "localization_check",
    "localization_decay",
    "lp_error",
    "LP_VARIANTS",
    "tau",
    "tau_limit_error",
    "tau_sweep",
    "correlation_limit_error",
    "correlation_sweep",
    "smoothing_diagnostic",
    "monotone_trend",
]

SCALING_MODES = ("kernel", "arcsine")
LP_VARIANTS = ("normalized", "unnormalized", "arcsine")
DEFAULT_X_POINTS = 21
DEFAULT_AB_POINTS = 17
DEFAULT_A = 2.0
_MAX_TAU_ORDER = 6
_X_CHUNK = 128


def table_for(m: Measure, N: int, scheme=None) -> RecurrenceTable:
    """Stieltjes table of depth N under the default breakpoint-aware scheme."""
    return stieltjes(m, N, scheme if scheme is not None else composite_scheme(m))


def _ensure_table(m, t, n_max):
    if t is None:
        return table_for(m, n_max)
    if t.max_degree < n_max:
        raise ValueError(f"recurrence table depth {t.max_degree} < required degree {n_max}")
    return t


def _check_inside(points, what):
    pts = np.asarray(points)
    bad = np.abs(pts) >= 1
    if np.any(bad):
        worst = float(pts[bad].flat[np.argmax(np.abs(pts[bad]))])
        raise DomainError(f"{what}: shifted point {worst:.6g} leaves (-1, 1)")


@dataclass
class ScalingConfig:
    measure: Measure
    interval: Interval
    x_grid: np.ndarray
    ab_bound: float
    ab_grid: np.ndarray
    n_schedule: tuple
    scaling_mode: str = "kernel"

    def __post_init__(self):
        self.x_grid = np.asarray(self.x_grid, dtype=float)
        self.ab_grid = np.asarray(self.ab_grid, dtype=float)
        self.n_schedule = tuple(int(n) for n in self.n_schedule)
        problems = []
        if self.scaling_mode not in SCALING_MODES:
            problems.append(f"scaling_mode must be one of {SCALING_MODES}")
        if not np.all(self.interval.contains(self.x_grid)):
            problems.append("x_grid must lie within the interval")
        if not self.ab_bound > 0:
            problems.append("ab_bound must be positive")
        if np.any(np.abs(self.ab_grid) > self.ab_bound + 1e-15):
            problems.append("ab_grid must lie in [-A, A]")
        if not self.n_schedule or any(n < 1 for n in self.n_schedule) or any(
                b <= a for a, b in zip(self.n_schedule, self.n_schedule[1:])):
            problems.append("n_schedule must be a nonempty increasing list of positive integers")
        if problems:
            raise ValueError("; ".join(problems))

    @classmethod
    def build(cls, measure, interval, n_schedule, *, x_points=DEFAULT_X_POINTS, A=DEFAULT_A,
              ab_points=DEFAULT_AB_POINTS, scaling_mode="kernel", x_grid=None, ab_grid=None):
        if not isinstance(interval, Interval):
            interval = Interval(*interval)
        xg = interval.grid(x_points) if x_grid is None else x_grid
        abg = np.linspace(-A, A, ab_points) if ab_grid is None else ab_grid
        return cls(measure, interval, xg, A, abg, tuple(n_schedule), scaling_mode)

    def echo(self) -> dict:
        return {
            "measure": self.measure.to_dict(),
            "interval": self.interval.to_list(),
            "x_grid": self.x_grid.tolist(),
            "ab_bound": self.ab_bound,
            "ab_grid": self.ab_grid.tolist(),
            "n_schedule": list(self.n_schedule),
            "scaling_mode": self.scaling_mode,
        }


@dataclass
class ConvergenceReport:
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add(self, n: int, name: str, value: float):
        self.rows.append((int(n), str(name), float(value)))

    def names(self) -> list:
        seen = {}
        for _, name, _ in self.rows:
            seen.setdefault(name, None)
        return list(seen)

    def series(self, name: str):
        pts = [(n, v) for n, nm, v in self.rows if nm == name]
        return np.array([n for n, _ in pts]), np.array([v for _, v in pts])

    def final(self, name: str) -> float:
        return float(self.series(name)[1][-1])

    @property
    def rate_estimates(self) -> list:
        """(name, p) with p the mean of log(e_i/e_{i+1}) / log(n_{i+1}/n_i).

        Only defined for series with at least three schedule points; pairs
        with a nonpositive error are skipped.
        """
        out = []
        for name in self.names():
            ns, vals = self.series(name)
            if len(ns) < 3:
                continue
            rates = [math.log(v0 / v1) / math.log(n1 / n0)
                     for n0, n1, v0, v1 in zip(ns, ns[1:], vals, vals[1:]) if v0 > 0 and v1 > 0]
            if rates:
                out.append((name, float(np.mean(rates))))
        return out

    def rate(self, name: str):
        return dict(self.rate_estimates).get(name)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "error_name", "value"])
        for n, name, value in self.rows:
            writer.writerow([n, name, f"{value:.17g}"])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "rows": [{"n": n, "error_name": name, "value": value} for n, name, value in self.rows],
            "rate_estimates": [{"error_name": nm, "rate": r} for nm, r in self.rate_estimates],
            "metadata": self.metadata,
        }
        return json.dumps(doc, indent=2, sort_keys=True, allow_nan=True)


def monotone_trend(values, slack: float = 1.5) -> bool:
    """Decreasing in trend: last < first and no entry exceeds ``slack`` x its predecessor."""
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        return True
    return bool(v[-1] < v[0] and np.all(v[1:] <= slack * v[:-1]))


# ---------------------------------------------------------------------------
# bulk scaling


def _diag_normalized(m, t, n, x):
    return normalized_kernel(m, t, n, x, x)


def _scales(m, t, n, x, mode):
    """Per-x offset scale: a point x + a * scale(x) for each grid value a."""
    x = np.asarray(x, dtype=float)
    if mode == "kernel":
        return 1.0 / _diag_normalized(m, t, n, x)
    return np.pi * np.sqrt(1.0 - x * x) / n


def bulk_ratio(m: Measure, t: RecurrenceTable, n: int, x: float, a: float, b: float) -> float:
    """K~_n(x + a/K~_n(x,x), x + b/K~_n(x,x)) / K~_n(x,x)."""
    d = float(_diag_normalized(m, t, n, x))
    xa, xb = x + a / d, x + b / d
    _check_inside([xa, xb], "bulk_ratio")
    return float(normalized_kernel(m, t, n, xa, xb)) / d


def _shifted_block(m, t, n, x, ab, mode, what):
    """Normalized kernel on all (a, b) pairs per x plus the diagonal reference.

    Returns (Kt, ref) with Kt[i, j, k] = K~_n(x_i + a_j s_i, x_i + a_k s_i) and
    ref[i] = K~_n(x_i, x_i) (kernel mode) or n / (pi sqrt(1 - x_i^2)) (arcsine mode).
    """
    x = np.asarray(x, dtype=float)
    scale = _scales(m, t, n, x, mode)
    pts = x[:, None] + ab[None, :] * scale[:, None]
    _check_inside(pts, what)
    P = poly_matrix(t, n, pts)
    K = np.einsum("iak,ibk->iab", P, P)
    sw = np.sqrt(m.weight.evaluate(pts))
    Kt = K * sw[:, :, None] * sw[:, None, :]
    ref = 1.0 / scale if mode == "kernel" else n / (np.pi * np.sqrt(1.0 - x * x))
    return Kt, ref


def universality_error(cfg: ScalingConfig, t: RecurrenceTable | None = None) -> ConvergenceReport:
    """sup over x_grid x ab_grid^2 of |ratio - sinc(a - b)| for each n in the schedule.

    In kernel mode the ratio is the normalized-kernel ratio with offsets
    a / K~_n(x, x); in arcsine mode it is (pi sqrt(1-x^2)/n) K~_n with offsets
    pi a sqrt(1 - x^2) / n.
    """
    m = cfg.measure
    t = _ensure_table(m, t, max(cfg.n_schedule))
    ab = cfg.ab_grid
    target = sinc(ab[:, None] - ab[None, :])
    # shift legality is a property of the configuration: check the smallest n first
    _check_inside(cfg.x_grid[:, None] + ab[None, :]
                  * _scales(m, t, cfg.n_schedule[0], cfg.x_grid, cfg.scaling_mode)[:, None],
                  "universality configuration")
    report = ConvergenceReport(metadata={"driver": "universality", "config": cfg.echo()})
    for n in cfg.n_schedule:
        Kt, ref = _shifted_block(m, t, n, cfg.x_grid, ab, cfg.scaling_mode, "universality")
        err = np.abs(Kt / ref[:, None, None] - target[None])
        report.add(n, "sup_error", np.max(err))
    return report


# ---------------------------------------------------------------------------
# Christoffel functions


def _christoffel_grid(m, t, n, x_grid, a_grid):
    x = np.asarray(x_grid, dtype=float)[:, None]
    pts = x + np.asarray(a_grid, dtype=float)[None, :] / n
    _check_inside(pts, "christoffel")
    return x, pts, 1.0 / kernel(t, n, pts, pts)


def christoffel_limit_error(m: Measure, t: RecurrenceTable, n: int, J: Interval, x_grid=None,
                            A: float = DEFAULT_A, a_grid=None) -> float:
    """sup |n lambda_n(x + a/n) / (pi sqrt(1 - x^2) w(x)) - 1| over x in J, |a| <= A."""
    x_grid = J.grid(DEFAULT_X_POINTS) if x_grid is None else x_grid
    a_grid = np.linspace(-A, A, DEFAULT_AB_POINTS) if a_grid is None else a_grid
    x, _, lam = _christoffel_grid(m, t, n, x_grid, a_grid)
    limit = np.pi * np.sqrt(1.0 - x * x) * m.weight.evaluate(x)
    return float(np.max(np.abs(n * lam / limit - 1.0)))


def christoffel_bracket(m: Measure, t: RecurrenceTable, n: int, x_grid, a_grid):
    """(min, max) of n lambda_n(x + a/n) over the grid."""
    _, _, lam = _christoffel_grid(m, t, n, x_grid, a_grid)
    return float(np.min(n * lam)), float(np.max(n * lam))


def christoffel_sweep(m: Measure, J: Interval, n_schedule, t: RecurrenceTable | None = None,
                      x_points=DEFAULT_X_POINTS, A=DEFAULT_A, ab_points=DEFAULT_AB_POINTS):
    t = _ensure_table(m, t, max(n_schedule))
    xg, ag = J.grid(x_points), np.linspace(-A, A, ab_points)
    report = ConvergenceReport(metadata={
        "driver": "christoffel", "measure": m.to_dict(), "interval": J.to_list(),
        "x_grid": xg.tolist(), "a_grid": ag.tolist(), "n_schedule": list(n_schedule)})
    for n in n_schedule:
        report.add(n, "limit_error", christoffel_limit_error(m, t, n, J, xg, A, ag))
        lo, hi = christoffel_bracket(m, t, n, xg, ag)
        report.add(n, "bracket_lo", lo)
        report.add(n, "bracket_hi", hi)
    return report


# ---------------------------------------------------------------------------
# localization


def _dominance_grid(m1, m2):
    base = np.linspace(-0.999, 0.999, 4001)
    bps = set(m1.weight.breakpoints) | set(m2.weight.breakpoints)
    extra = [b + e for b in bps for e in (-1e-9, 0.0, 1e-9)]
    return np.unique(np.concatenate((base, extra)))


def localization_check(m1: Measure, m2: Measure, t1: RecurrenceTable, t2: RecurrenceTable,
                       n: int, x, y, *, grid=None):
    """Both sides of |K_n - K*_n|(x,y)/K_n(x,x) <= (K_n(y,y)/K_n(x,x))^{1/2} [1 - K*_n(x,x)/K_n(x,x)]^{1/2}.

    ``m1`` is the smaller measure (kernel K_n), ``m2`` the larger (K*_n).
    Raises PreconditionError unless m1 <= m2 on a dense grid.
    """
    ok, gap = dominates(m1, m2, _dominance_grid(m1, m2) if grid is None else grid)
    if not ok:
        raise PreconditionError(f"localization needs mu <= mu*; worst weight gap {gap:.3g}"
                                " (or an unmatched point mass)")
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    Kxy = kernel(t1, n, x, y)
    Kxx = kernel(t1, n, x, x)
    Kyy = kernel(t1, n, y, y)
    Ksxy = kernel(t2, n, x, y)
    Ksxx = kernel(t2, n, x, x)
    lhs = np.abs(Kxy - Ksxy) / Kxx
    rhs = np.sqrt(Kyy / Kxx) * np.sqrt(np.maximum(1.0 - Ksxx / Kxx, 0.0))
    if lhs.ndim == 0:
        return float(lhs), float(rhs)
    return lhs, rhs


def localization_decay(m1: Measure, m2: Measure, t1, t2, J: Interval, A: float, n_schedule,
                       x_points=DEFAULT_X_POINTS, ab_points=DEFAULT_AB_POINTS) -> ConvergenceReport:
    """sup over x in J, a, b in [-A, A] of |(K_n - K*_n)(x + a/n, x + b/n)| / n, per n."""
    xg = J.grid(x_points)
    probe = J.grid(201)
    if np.max(np.abs(m1.weight.evaluate(probe) - m2.weight.evaluate(probe))) > 1e-14 \
            or m1.masses_in(J.lo, J.hi) != m2.masses_in(J.lo, J.hi):
        raise PreconditionError("localization_decay needs the two measures to agree on J")
    t1 = _ensure_table(m1, t1, max(n_schedule))
    t2 = _ensure_table(m2, t2, max(n_schedule))
    ab = np.linspace(-A, A, ab_points)
    report = ConvergenceReport(metadata={
        "driver": "localize", "measure": m1.to_dict(), "comparison": m2.to_dict(),
        "interval": J.to_list(), "A": A, "n_schedule": list(n_schedule)})
    for n in n_schedule:
        pts = xg[:, None] + ab[None, :] / n
        _check_inside(pts, "localization_decay")
        P1, P2 = poly_matrix(t1, n, pts), poly_matrix(t2, n, pts)
        diff = np.einsum("iak,ibk->iab", P1, P1) - np.einsum("iak,ibk->iab", P2, P2)
        report.add(n, "sup_diff_over_n", np.max(np.abs(diff)) / n)
    return report


# ---------------------------------------------------------------------------
# L_p universality


def _x_rule(interval: Interval, n: int, breakpoints, points=10):
    """Composite Gauss rule in x resolving the 1/n kernel scale.

    L_p integrands are absolute values of oscillating differences, so they
    have kinks every O(1/n); four segments per unit of 1/n keep the kink error
    near 1e-5 relative.
    """
    segments = max(16, math.ceil(interval.width * n * 4))
    cuts = set(np.linspace(interval.lo, interval.hi, segments + 1).tolist())
    cuts.update(b for b in breakpoints if interval.lo < b < interval.hi)
    cuts = np.array(sorted(cuts))
    rule = gauss_legendre(points)
    half = 0.5 * np.diff(cuts)
    mid = 0.5 * (cuts[1:] + cuts[:-1])
    return ((mid[:, None] + half[:, None] * rule.nodes).ravel(),
            (half[:, None] * rule.weights).ravel())


def _lp_integrands(m, t, n, x, ab, variant, p):
    if variant == "arcsine":
        s = np.sqrt(1.0 - x * x)
        pts = x[:, None] + np.pi * ab[None, :] * s[:, None] / n
        _check_inside(pts, "lp_error")
        P = poly_matrix(t, n, pts)
        K = np.einsum("iak,ibk->iab", P, P) / n
        limit = sinc(ab[:, None] - ab[None, :])[None] / (
            np.pi * m.weight.evaluate(x) * s)[:, None, None]
        return np.abs(K - limit)
    target = sinc(ab[:, None] - ab[None, :])[None]
    d = _diag_normalized(m, t, n, x)
    pts = x[:, None] + ab[None, :] / d[:, None]
    _check_inside(pts, "lp_error")
    P = poly_matrix(t, n, pts)
    K = np.einsum("iak,ibk->iab", P, P)
    if variant == "normalized":
        sw = np.sqrt(m.weight.evaluate(pts))
        ratio = K * sw[:, :, None] * sw[:, None, :] / d[:, None, None]
    else:
        ratio = K / kernel(t, n, x, x)[:, None, None]
    return np.abs(ratio - target) ** p


def lp_error(cfg: ScalingConfig, t: RecurrenceTable | None, p: float = 1.0,
             variant: str = "normalized") -> ConvergenceReport:
    """Integral over the interval of the L_p universality integrand, per (a, b) with a <= b.

    Variants: ``normalized`` |K~ ratio - sinc|^p, ``unnormalized`` |K ratio - sinc|^p
    (both with offsets a / K~_n(x, x)), and ``arcsine`` the L_1 gap between
    (1/n) K_n at arcsine offsets and sinc(a - b) / (pi w(x) sqrt(1 - x^2)); p is
    forced to 1 there.  A ``max_over_ab`` row is added per n.
    """
    if variant not in LP_VARIANTS:
        raise ValueError(f"variant must be one of {LP_VARIANTS}")
    if variant == "arcsine":
        p = 1.0
    if not p > 0:
        raise ValueError("p must be positive")
    m = cfg.measure
    t = _ensure_table(m, t, max(cfg.n_schedule))
    ab = cfg.ab_grid
    iu, ju = np.triu_indices(ab.size)
    meta = {"driver": "lp", "variant": variant, "p": p, "config": cfg.echo()}
    report = ConvergenceReport(metadata=meta)
    for n in cfg.n_schedule:
        xs, wx = _x_rule(cfg.interval, n, m.weight.breakpoints)
        totals = np.zeros((ab.size, ab.size))
        for start in range(0, xs.size, _X_CHUNK):
            sl = slice(start, start + _X_CHUNK)
            vals = _lp_integrands(m, t, n, xs[sl], ab, variant, p)
            totals += np.einsum("i,iab->ab", wx[sl], vals)
        for i, j in zip(iu, ju):
            report.add(n, f"L{p:g}[a={ab[i]:g},b={ab[j]:g}]", totals[i, j])
        report.add(n, "max_over_ab", np.max(totals[iu, ju]))
    return report


# ---------------------------------------------------------------------------
# derivative kernels


def tau(r: int, s: int) -> float:
    """Coefficient of a^r b^s / (r! s!) in sin(a - b)/(a - b).

    Zero for r + s odd, (-1)^((r - s)/2) / (r + s + 1) otherwise.
    """
    if r < 0 or s < 0:
        raise ValueError("tau needs nonnegative orders")
    if (r + s) % 2:
        return 0.0
    return (-1.0) ** ((r - s) // 2) / (r + s + 1)


def tau_limit_error(m: Measure, t: RecurrenceTable, n: int, x: float, r: int, s: int) -> float:
    """|n^{-(r+s+1)} K_n^{(r,s)}(x,x) pi w(x) (1-x^2)^{(r+s+1)/2} - tau(r,s)|.

    For odd r + s the raw scaled value is returned (its limit is 0).
    """
    if r + s > _MAX_TAU_ORDER:
        raise ValueError(f"r + s must not exceed {_MAX_TAU_ORDER}")
    if abs(x) >= 1:
        raise DomainError("tau_limit_error needs an interior point")
    q = r + s + 1
    scaled = deriv_kernel(t, n, x, r, s) / float(n) ** q \
        * np.pi * m.weight(x) * (1.0 - x * x) ** (0.5 * q)
    target = tau(r, s)
    return float(abs(scaled - target) if target != 0 else scaled)


def tau_sweep(m: Measure, n_schedule, x: float, r: int, s: int, t=None) -> ConvergenceReport:
    t = _ensure_table(m, t, max(n_schedule))
    report = ConvergenceReport(metadata={"driver": "tau", "measure": m.to_dict(), "x": x,
                                         "r": r, "s": s, "tau": tau(r, s),
                                         "n_schedule": list(n_schedule)})
    for n in n_schedule:
        report.add(n, f"tau_error[{r},{s}]", tau_limit_error(m, t, n, x, r, s))
    return report


# ---------------------------------------------------------------------------
# correlation functions


def correlation_limit_error(m: Measure, t: RecurrenceTable, n: int, x: float, xis) -> float:
    """|K~_n(x,x)^{-m} R_m(x + xi_j / K~_n(x,x)) - det(sinc(xi_i - xi_j))|."""
    from .reference import sine_kernel_det

    xis = np.asarray(xis, dtype=float)
    if xis.ndim != 1 or not 1 <= xis.size <= 6:
        raise ValueError("xis must hold between 1 and 6 values")
    if np.unique(xis).size != xis.size:
        raise PreconditionError("xis must be distinct")
    d = float(_diag_normalized(m, t, n, x))
    pts = x + xis / d
    _check_inside(pts, "correlation_limit_error")
    # scaling each entry by 1/d equals dividing the determinant by d^m
    M = normalized_kernel(m, t, n, pts[:, None], pts[None, :]) / d
    return float(abs(np.linalg.det(M) - sine_kernel_det(xis)))


def correlation_sweep(m: Measure, n_schedule, x: float, xis, t=None) -> ConvergenceReport:
    t = _ensure_table(m, t, max(n_schedule))
    report = ConvergenceReport(metadata={"driver": "correlate", "measure": m.to_dict(),
                                         "x": x, "xis": list(map(float, xis)),
                                         "n_schedule": list(n_schedule)})
    for n in n_schedule:
        report.add(n, "det_error", correlation_limit_error(m, t, n, x, xis))
    return report


# ---------------------------------------------------------------------------
# smoothing


def smoothing_diagnostic(m: Measure, smoothed: Measure, inner: Interval, outer: Interval,
                         n_schedule, delta: float, t=None, t_smooth=None) -> ConvergenceReport:
    """Diagonal kernel gap between a measure and its smoothed version.

    Rows per n: ``diag_gap`` = (1/n) int_inner |K_n - K#_n|(t,t) dt.  The
    n-independent rows ``diag_gap_limit`` = (1/pi) int_inner |1/w - 1/w#| dt/sqrt(1-t^2)
    and ``shift_modulus`` = sup_{|u|<=delta} int_outer |w(t+u) - w(t)| dt are
    repeated for each n for plotting convenience.
    """
    t = _ensure_table(m, t, max(n_schedule))
    t_smooth = _ensure_table(smoothed, t_smooth, max(n_schedule))
    bps = set(m.weight.breakpoints) | set(smoothed.weight.breakpoints)
    xs, wx = _x_rule(inner, 64, bps, points=16)
    w, ws = m.weight.evaluate(xs), smoothed.weight.evaluate(xs)
    limit = float(np.dot(wx, np.abs(1.0 / w - 1.0 / ws) / np.sqrt(1.0 - xs * xs)) / np.pi)
    modulus = 0.0
    for u in np.linspace(-delta, delta, 41):
        # both w(t) and w(t + u) jump inside outer: cut the rule at every jump
        cuts = set(m.weight.breakpoints) | {b - u for b in m.weight.breakpoints}
        xo, wo = _x_rule(outer, 16, cuts, points=16)
        shifted = np.clip(xo + u, -1 + 1e-15, 1 - 1e-15)
        gap = np.abs(m.weight.evaluate(shifted) - m.weight.evaluate(xo))
        modulus = max(modulus, float(np.dot(wo, gap)))
    report = ConvergenceReport(metadata={"driver": "smoothing", "measure": m.to_dict(),
                                         "smoothed": smoothed.to_dict(), "delta": delta,
                                         "inner": inner.to_list(), "outer": outer.to_list()})
    for n in n_schedule:
        xs_n, wx_n = _x_rule(inner, n, bps)
        gap = np.abs(kernel(t, n, xs_n, xs_n) - kernel(t_smooth, n, xs_n, xs_n))
        report.add(n, "diag_gap", float(np.dot(wx_n, gap)) / n)
        report.add(n, "diag_gap_limit", limit)
        report.add(n, "shift_modulus", modulus)
    return report
