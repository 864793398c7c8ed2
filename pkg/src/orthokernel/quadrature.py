"""Gauss-Legendre rules and breakpoint-aware composite integration against measures."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .measure import Interval, Measure

__all__ = [
    "QuadratureRule",
    "CompositeScheme",
    "gauss_legendre",
    "composite_scheme",
    "discretize",
    "integrate",
    "integrate_interval",
]

DEFAULT_SEGMENTS = 40
DEFAULT_POINTS = 80

_NEWTON_TOL = 1e-15
_NEWTON_MAXITER = 100
# geometric grading of endpoint cells for non-half-integer Jacobi exponents;
# the innermost cell is shrunk until its share of the integral is below _GRADE_TOL
_GRADE_RATIO = 0.15
_GRADE_TOL = 1e-16
_GRADE_MAX_LEVELS = 80


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def on(self, lo: float, hi: float):
        """Nodes and weights mapped affinely to [lo, hi]."""
        half = 0.5 * (hi - lo)
        return 0.5 * (hi + lo) + half * self.nodes, half * self.weights


def _legendre_and_derivative(x, n):
    p0, p1 = np.ones_like(x), x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    return p1, n * (x * p1 - p0) / (x * x - 1.0)


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> QuadratureRule:
    """n-point Gauss-Legendre rule on [-1, 1] by Newton iteration on P_n.

    Only the nonnegative roots are iterated; the negative half is the mirror
    image, so symmetry holds exactly.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"gauss_legendre needs n >= 1, got {n}")
    n = int(n)
    m = (n + 1) // 2
    i = np.arange(1, m + 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5))
    for _ in range(_NEWTON_MAXITER):
        pn, dp = _legendre_and_derivative(x, n)
        step = pn / dp
        x = x - step
        if np.max(np.abs(step)) <= _NEWTON_TOL:
            break
    if n % 2:
        x[-1] = 0.0
    _, dp = _legendre_and_derivative(x, n)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    nodes = np.concatenate((-x[: n // 2], x[::-1]))
    weights = np.concatenate((w[: n // 2], w[::-1]))
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes, weights, n)


@dataclass(frozen=True)
class CompositeScheme:
    """Partition of [-1, 1] into segments, each carrying a Gauss rule.

    When the weight has a non-polynomial endpoint factor, the first and last
    segments are integrated in the angle variable x = +-cos(theta), which
    absorbs algebraic endpoint singularities of Jacobi-type weights.
    ``nominal_segments`` is the requested segment count; it fixes the
    recurrence capacity and the angular resolution near the endpoints.
    """

    segments: tuple
    points_per_segment: int
    nominal_segments: int | None = None

    def __post_init__(self):
        segs = self.segments
        if len(segs) < 2:
            raise ValueError("composite scheme needs at least two segments")
        if segs[0].lo != -1.0 or segs[-1].hi != 1.0 or any(
                s.hi != t.lo for s, t in zip(segs, segs[1:])):
            raise ValueError("segments must be ordered and cover [-1, 1] without gaps")
        if self.points_per_segment < 1:
            raise ValueError("points_per_segment must be positive")
        if self.nominal_segments is None:
            object.__setattr__(self, "nominal_segments", len(segs))

    @property
    def capacity(self) -> int:
        """Largest recurrence depth this scheme supports."""
        return self.nominal_segments * self.points_per_segment // 2

    @property
    def theta_cell(self) -> float:
        """Widest angular extent (in arccos x) allowed for a single cell."""
        return 2.0 / self.nominal_segments

    @property
    def endpoints(self) -> tuple:
        return tuple([self.segments[0].lo] + [s.hi for s in self.segments])


def _polynomial_exponent(e: float) -> bool:
    return e >= 0 and float(e).is_integer()


def _angular_refine(lo: float, hi: float, max_theta: float) -> list:
    """Cuts splitting [lo, hi] into pieces at most ``max_theta`` wide in arccos x."""
    t_hi, t_lo = math.acos(lo), math.acos(hi)
    k = math.ceil((t_hi - t_lo) / max_theta - 1e-9)
    if k <= 1:
        return [lo, hi]
    inner = np.cos(np.linspace(t_hi, t_lo, k + 1)[1:-1]).tolist()
    return [lo] + inner + [hi]


def composite_scheme(weight=None, segments: int = DEFAULT_SEGMENTS,
                     points_per_segment: int = DEFAULT_POINTS) -> CompositeScheme:
    """Uniform partition into ``segments`` pieces, split at every breakpoint of ``weight``.

    Segments near +-1 are further split so that none spans more than
    2 / segments in arccos x; polynomials of degree up to the capacity then
    stay resolved where they oscillate fastest.  End segments that will be
    integrated in the angle variable are left whole.  ``weight`` may be a
    Weight, a Measure or None.
    """
    if segments < 2:
        raise ValueError("need at least two segments")
    if isinstance(weight, Measure):
        weight = weight.weight
    cuts = set(np.linspace(-1.0, 1.0, segments + 1).tolist())
    cuts.update({-1.0, 1.0})
    exps = (0.0, 0.0)
    if weight is not None:
        exps = weight.endpoint_exponents
        for b in weight.breakpoints:
            # a breakpoint replaces any uniform cut it nearly coincides with
            cuts = {c for c in cuts if abs(c - b) > 1e-12 or c in (-1.0, 1.0)}
            cuts.add(float(b))
    cuts = sorted(cuts)
    max_theta = 2.0 / segments
    refined = [cuts[0]]
    last = len(cuts) - 2
    for i, (lo, hi) in enumerate(zip(cuts, cuts[1:])):
        angle_mapped = (i == 0 and not _polynomial_exponent(exps[0])) or (
            i == last and not _polynomial_exponent(exps[1]))
        refined += [hi] if angle_mapped else _angular_refine(lo, hi, max_theta)[1:]
    segs = tuple(Interval(lo, hi) for lo, hi in zip(refined, refined[1:]))
    return CompositeScheme(segs, int(points_per_segment), int(segments))


def _split_wide(cells, max_theta):
    out = []
    for lo, hi in cells:
        k = max(1, math.ceil((hi - lo) / max_theta))
        edges = np.linspace(lo, hi, k + 1)
        out += list(zip(edges[:-1], edges[1:]))
    return out


def _angle_cells(theta_end: float, exponent: float, max_theta: float):
    if float(2 * exponent).is_integer():
        return _split_wide([(0.0, theta_end)], max_theta)
    # angle integrand behaves like theta**(2 * exponent + 1) at the endpoint
    power = 2.0 * exponent + 2.0
    levels = math.ceil(math.log(_GRADE_TOL ** (1.0 / power) / theta_end) / math.log(_GRADE_RATIO))
    levels = min(max(levels, 1), _GRADE_MAX_LEVELS)
    edges = [theta_end * _GRADE_RATIO ** k for k in range(levels + 1)] + [0.0]
    return _split_wide([(lo, hi) for hi, lo in zip(edges, edges[1:])], max_theta)


def _end_segment(weight, rule, seg, exponent, side, max_theta):
    if _polynomial_exponent(exponent):
        # polynomial endpoint factor: a plain rule keeps polynomial exactness
        x, om = rule.on(seg.lo, seg.hi)
        return [x], [weight.evaluate(x) * om]
    theta_end = math.acos(-seg.hi) if side < 0 else math.acos(seg.lo)
    xs, ws = [], []
    for lo, hi in _angle_cells(theta_end, exponent, max_theta):
        th, om = rule.on(lo, hi)
        s2 = np.sin(0.5 * th) ** 2
        c2 = np.cos(0.5 * th) ** 2
        if side > 0:
            x, omx, opx = np.cos(th), 2.0 * s2, 2.0 * c2
        else:
            x, omx, opx = -np.cos(th), 2.0 * c2, 2.0 * s2
        xs.append(x)
        ws.append(weight.evaluate(x, omx, opx) * np.sin(th) * om)
    return xs, ws


@lru_cache(maxsize=256)
def discretize(m: Measure, scheme: CompositeScheme):
    """Discrete measure (nodes, masses) realizing integration against ``m``.

    Point masses are appended as extra nodes.  Arrays are read-only and cached
    per (measure, scheme).
    """
    rule = gauss_legendre(scheme.points_per_segment)
    weight = m.weight
    lo_exp, hi_exp = weight.endpoint_exponents
    xs, ws = [], []
    segs = scheme.segments
    x_end, w_end = _end_segment(weight, rule, segs[0], lo_exp, -1, scheme.theta_cell)
    xs += x_end
    ws += w_end
    for seg in segs[1:-1]:
        x, om = rule.on(seg.lo, seg.hi)
        xs.append(x)
        ws.append(weight.evaluate(x) * om)
    x_end, w_end = _end_segment(weight, rule, segs[-1], hi_exp, +1, scheme.theta_cell)
    xs += x_end
    ws += w_end
    if m.point_masses:
        xs.append(np.array([x for x, _ in m.point_masses]))
        ws.append(np.array([mass for _, mass in m.point_masses]))
    nodes = np.concatenate(xs)
    masses = np.concatenate(ws)
    if not np.all(np.isfinite(masses)):
        raise ValueError(f"weight of {m.label!r} is not finite at quadrature nodes")
    nodes.setflags(write=False)
    masses.setflags(write=False)
    return nodes, masses


def integrate(f, m: Measure, scheme: CompositeScheme | None = None) -> float:
    """Integral of ``f`` against ``m`` (absolutely continuous part plus point masses)."""
    if scheme is None:
        scheme = composite_scheme(m)
    x, w = discretize(m, scheme)
    vals = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
    return float(np.dot(vals, w))


def integrate_interval(values_fn, interval: Interval, breakpoints=(), segments: int = 20,
                       points: int = 16) -> float:
    """Plain composite Gauss-Legendre integral dx over ``interval``.

    ``values_fn`` receives the full node array at once.  Breakpoints inside the
    interval become segment ends.
    """
    cuts = set(np.linspace(interval.lo, interval.hi, segments + 1).tolist())
    cuts.update(b for b in breakpoints if interval.lo < b < interval.hi)
    cuts = np.array(sorted(cuts))
    rule = gauss_legendre(points)
    half = 0.5 * np.diff(cuts)
    mid = 0.5 * (cuts[1:] + cuts[:-1])
    x = (mid[:, None] + half[:, None] * rule.nodes).ravel()
    w = (half[:, None] * rule.weights).ravel()
    vals = np.asarray(values_fn(x), dtype=float)
    return float(np.dot(vals, w))
