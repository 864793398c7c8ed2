"""Measures on [-1, 1]: weight families, point masses and sliding-window smoothing.

Every weight is an immutable, hashable value object so that discretizations and
recurrence tables can be cached on it.  Weights are evaluated vectorized over
numpy arrays; scalars in give floats out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError

__all__ = [
    "Interval",
    "Weight",
    "Legendre",
    "Chebyshev1",
    "Jacobi",
    "Constant",
    "Piecewise",
    "Perturbed",
    "Smoothed",
    "Measure",
    "eval_weight",
    "smooth_weight",
    "dominates",
    "weight_from_dict",
    "measure_from_dict",
]


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (-1.0 <= lo < hi <= 1.0):
            raise DomainError(f"invalid interval [{lo}, {hi}]: need -1 <= lo < hi <= 1")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x, *, closed=True):
        x = np.asarray(x)
        if closed:
            return (x >= self.lo) & (x <= self.hi)
        return (x > self.lo) & (x < self.hi)

    def grid(self, k: int) -> np.ndarray:
        """``k`` equispaced points including both ends (the midpoint when k == 1)."""
        if k == 1:
            return np.array([0.5 * (self.lo + self.hi)])
        return np.linspace(self.lo, self.hi, k)

    def to_list(self) -> list:
        return [self.lo, self.hi]


class Weight:
    """Base class for absolutely continuous weights w = dmu/dx on (-1, 1).

    Subclasses implement ``_eval``; ``omx`` and ``opx`` optionally carry 1 - x
    and 1 + x computed without cancellation (used by the endpoint-mapped
    quadrature segments).
    """

    family = ""

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = self._eval(x, None, None)
        return float(out) if out.ndim == 0 else out

    def evaluate(self, x, omx=None, opx=None) -> np.ndarray:
        return self._eval(np.asarray(x, dtype=float), omx, opx)

    def _eval(self, x, omx, opx):  # pragma: no cover - abstract
        raise NotImplementedError

    @property
    def breakpoints(self) -> tuple:
        """Interior points where w (or a low derivative) fails to be smooth."""
        return ()

    @property
    def endpoint_exponents(self) -> tuple:
        """Algebraic exponents (at -1, at +1) of the weight's endpoint behaviour."""
        return (0.0, 0.0)

    def params(self) -> dict:
        return {}

    def to_dict(self) -> dict:
        return {"family": self.family, "params": self.params()}


@dataclass(frozen=True)
class Legendre(Weight):
    family = "legendre"

    def _eval(self, x, omx, opx):
        return np.ones_like(x)


@dataclass(frozen=True)
class Jacobi(Weight):
    """(1 - x)^alpha (1 + x)^beta."""

    alpha: float
    beta: float
    family = "jacobi"

    def __post_init__(self):
        if not (self.alpha > -1 and self.beta > -1):
            raise ValueError(f"Jacobi parameters must exceed -1, got ({self.alpha}, {self.beta})")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))

    def _eval(self, x, omx, opx):
        omx = 1.0 - x if omx is None else omx
        opx = 1.0 + x if opx is None else opx
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.power(omx, self.alpha) * np.power(opx, self.beta)

    @property
    def endpoint_exponents(self):
        return (self.beta, self.alpha)

    def params(self):
        return {"alpha": self.alpha, "beta": self.beta}


@dataclass(frozen=True)
class Chebyshev1(Jacobi):
    """(1 - x^2)^(-1/2)."""

    alpha: float = -0.5
    beta: float = -0.5
    family = "chebyshev1"

    def params(self):
        return {}


@dataclass(frozen=True)
class Constant(Weight):
    c: float
    family = "constant"

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"Constant weight needs c > 0, got {self.c}")
        object.__setattr__(self, "c", float(self.c))

    def _eval(self, x, omx, opx):
        return np.full_like(x, self.c)

    def params(self):
        return {"c": self.c}


@dataclass(frozen=True)
class Piecewise(Weight):
    """Step weight: ``values[i]`` on [breakpoints[i-1], breakpoints[i]).

    At a breakpoint the right-limit value is returned.
    """

    breakpoints_: tuple
    values: tuple
    family = "piecewise"

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints_)
        vals = tuple(float(v) for v in self.values)
        if len(vals) != len(bps) + 1:
            raise ValueError("piecewise weight needs len(values) == len(breakpoints) + 1")
        if any(v <= 0 for v in vals):
            raise ValueError("piecewise values must be strictly positive")
        if any(not -1 < b < 1 for b in bps) or any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise ValueError("piecewise breakpoints must be strictly increasing inside (-1, 1)")
        object.__setattr__(self, "breakpoints_", bps)
        object.__setattr__(self, "values", vals)

    def _eval(self, x, omx, opx):
        idx = np.searchsorted(np.asarray(self.breakpoints_), x, side="right")
        return np.asarray(self.values)[idx]

    @property
    def breakpoints(self):
        return self.breakpoints_

    def params(self):
        return {"breakpoints": list(self.breakpoints_), "values": list(self.values)}


@dataclass(frozen=True)
class Perturbed(Weight):
    """``base + bump`` where the bump is switched on over ``support`` only."""

    base: Weight
    bump: Weight
    support: Interval
    family = "perturbed"

    def __post_init__(self):
        if self.support.lo <= -1 or self.support.hi >= 1:
            raise DomainError("bump support must lie strictly inside (-1, 1)")

    def _eval(self, x, omx, opx):
        out = self.base._eval(x, omx, opx)
        inside = (x >= self.support.lo) & (x < self.support.hi)
        if np.any(inside):
            out = out + np.where(inside, self.bump._eval(x, omx, opx), 0.0)
        return out

    @property
    def breakpoints(self):
        pts = set(self.base.breakpoints) | {self.support.lo, self.support.hi}
        pts |= {b for b in self.bump.breakpoints if self.support.lo < b < self.support.hi}
        return tuple(sorted(pts))

    @property
    def endpoint_exponents(self):
        return self.base.endpoint_exponents

    def params(self):
        return {"base": self.base.to_dict(), "bump": self.bump.to_dict(),
                "support": self.support.to_list()}


_WINDOW_POINTS = 24


@dataclass(frozen=True)
class Smoothed(Weight):
    """Sliding-window average of ``base`` over [x - delta, x + delta] for x in ``region``.

    The window mean (1/(2 delta)) * integral is used; ``literal=True`` gives
    the unnormalized (1/delta) * integral, i.e. twice the mean.
    """

    base: Weight
    delta: float
    region: Interval
    literal: bool = False
    family = "smoothed"

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("smoothing width delta must be positive")
        object.__setattr__(self, "delta", float(self.delta))
        if self.region.lo - self.delta <= -1 or self.region.hi + self.delta >= 1:
            raise DomainError(
                f"region [{self.region.lo}, {self.region.hi}] widened by delta={self.delta} "
                "leaves (-1, 1)")

    def _window_mean(self, x):
        from .quadrature import gauss_legendre

        rule = gauss_legendre(_WINDOW_POINTS)
        cuts = np.concatenate(([-1.0], self.base.breakpoints, [1.0]))
        lo = np.maximum((x - self.delta)[:, None], cuts[None, :-1])
        hi = np.minimum((x + self.delta)[:, None], cuts[None, 1:])
        half = 0.5 * np.maximum(hi - lo, 0.0)
        mid = 0.5 * (hi + lo)
        pts = mid[..., None] + half[..., None] * rule.nodes
        with np.errstate(invalid="ignore", divide="ignore"):
            vals = self.base.evaluate(pts)
        # empty pieces may sit outside (-1, 1)
        vals = np.where(half[..., None] > 0, vals, 0.0)
        total = np.sum(vals * rule.weights * half[..., None], axis=(1, 2))
        scale = 1.0 / self.delta if self.literal else 0.5 / self.delta
        return total * scale

    def _eval(self, x, omx, opx):
        out = np.array(self.base._eval(x, omx, opx), dtype=float, copy=True)
        inside = (x >= self.region.lo) & (x < self.region.hi)
        if np.any(inside):
            flat = np.atleast_1d(x)[np.atleast_1d(inside)]
            if out.ndim == 0:
                out = np.asarray(self._window_mean(flat)[0])
            else:
                out[inside] = self._window_mean(flat)
        return out

    @property
    def breakpoints(self):
        lo, hi = self.region.lo, self.region.hi
        pts = {lo, hi}
        for b in self.base.breakpoints:
            if not lo < b < hi:
                pts.add(b)
            for shifted in (b - self.delta, b + self.delta):
                if lo < shifted < hi:
                    pts.add(shifted)
        return tuple(sorted(pts))

    @property
    def endpoint_exponents(self):
        return self.base.endpoint_exponents

    def params(self):
        return {"base": self.base.to_dict(), "delta": self.delta,
                "region": self.region.to_list(), "literal": self.literal}


@dataclass(frozen=True)
class Measure:
    weight: Weight
    point_masses: tuple = ()
    label: str = field(default="", compare=False)

    def __post_init__(self):
        masses = tuple(sorted((float(x), float(m)) for x, m in self.point_masses))
        locs = [x for x, _ in masses]
        if any(not -1 < x < 1 for x in locs):
            raise DomainError("point masses must lie in (-1, 1)")
        if any(m <= 0 for _, m in masses):
            raise ValueError("point masses must be positive")
        if len(set(locs)) != len(locs):
            raise ValueError("point-mass locations must be distinct")
        object.__setattr__(self, "point_masses", masses)
        if not self.label:
            object.__setattr__(self, "label", self.weight.family)

    def to_dict(self) -> dict:
        d = self.weight.to_dict()
        d["point_masses"] = [list(pm) for pm in self.point_masses]
        return d

    def masses_in(self, lo: float, hi: float) -> list:
        return [(x, m) for x, m in self.point_masses if lo <= x <= hi]


def eval_weight(m: Measure, x):
    """w(x) for |x| < 1; raises DomainError otherwise."""
    arr = np.asarray(x, dtype=float)
    if np.any(np.abs(arr) >= 1):
        raise DomainError(f"weight evaluated outside (-1, 1): {x}")
    return m.weight(arr)


def smooth_weight(m: Measure, delta: float, region: Interval, literal: bool = False) -> Measure:
    if m.masses_in(region.lo - delta, region.hi + delta):
        raise DomainError("measure must be absolutely continuous on the widened smoothing region")
    return Measure(Smoothed(m.weight, delta, region, literal), m.point_masses,
                   label=f"{m.label}#")


def dominates(m1: Measure, m2: Measure, grid: Sequence[float]):
    """Check dmu1 <= dmu2 on ``grid`` and for point masses.

    Returns ``(ok, worst_gap)`` with worst_gap = max(w1 - w2) over the grid.
    """
    grid = np.asarray(grid, dtype=float)
    gap = np.asarray(m1.weight.evaluate(grid) - m2.weight.evaluate(grid))
    worst = float(np.max(gap))
    masses2 = dict(m2.point_masses)
    masses_ok = all(masses2.get(x, 0.0) >= mass for x, mass in m1.point_masses)
    return (worst <= 0.0 and masses_ok), worst


_FAMILIES = {"legendre", "chebyshev1", "jacobi", "constant", "piecewise", "perturbed", "smoothed"}

_PARAM_KEYS = {
    "legendre": set(),
    "chebyshev1": set(),
    "jacobi": {"alpha", "beta"},
    "constant": {"c"},
    "piecewise": {"breakpoints", "values"},
    "perturbed": {"base", "bump", "support"},
    "smoothed": {"base", "delta", "region", "literal"},
}


def weight_from_dict(d: dict, where: str = "measure") -> Weight:
    """Build a weight from ``{"family": ..., "params": {...}}``.

    Raises ValueError naming the offending location on unknown families,
    unknown or missing parameters.
    """
    if not isinstance(d, dict):
        raise ValueError(f"{where}: expected an object, got {type(d).__name__}")
    extra = set(d) - {"family", "params", "point_masses"}
    if extra:
        raise ValueError(f"{where}: unknown keys {sorted(extra)}")
    fam = str(d.get("family", "")).lower()
    if fam not in _FAMILIES:
        raise ValueError(f"{where}.family: unknown family {d.get('family')!r}")
    params = dict(d.get("params") or {})
    unknown = set(params) - _PARAM_KEYS[fam]
    if unknown:
        raise ValueError(f"{where}.params: unknown keys {sorted(unknown)} for family {fam!r}")
    try:
        if fam == "legendre":
            return Legendre()
        if fam == "chebyshev1":
            return Chebyshev1()
        if fam == "jacobi":
            return Jacobi(params["alpha"], params["beta"])
        if fam == "constant":
            return Constant(params["c"])
        if fam == "piecewise":
            return Piecewise(tuple(params["breakpoints"]), tuple(params["values"]))
        if fam == "perturbed":
            return Perturbed(weight_from_dict(params["base"], f"{where}.params.base"),
                             weight_from_dict(params["bump"], f"{where}.params.bump"),
                             Interval(*params["support"]))
        return Smoothed(weight_from_dict(params["base"], f"{where}.params.base"),
                        params["delta"], Interval(*params["region"]),
                        bool(params.get("literal", False)))
    except KeyError as exc:
        raise ValueError(f"{where}.params: missing {exc.args[0]!r} for family {fam!r}") from None
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{where}: {exc}") from None


def measure_from_dict(d: dict, where: str = "measure") -> Measure:
    weight = weight_from_dict(d, where)
    try:
        masses = tuple((float(x), float(mass)) for x, mass in d.get("point_masses") or ())
        return Measure(weight, masses)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{where}.point_masses: {exc}") from None
