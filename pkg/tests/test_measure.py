import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orthokernel.errors import DomainError
from orthokernel.measure import (Chebyshev1, Constant, Interval, Jacobi, Legendre, Measure,
                                 Perturbed, Piecewise, Smoothed, dominates, eval_weight,
                                 measure_from_dict, smooth_weight, weight_from_dict)

GRID = np.linspace(-0.99, 0.99, 397)
STEP = Piecewise((0.0,), (1.0, 2.0))


def test_interval_validation():
    with pytest.raises(DomainError):
        Interval(0.5, 0.5)
    with pytest.raises(DomainError):
        Interval(-1.2, 0.0)
    J = Interval(-0.5, 0.5)
    assert J.width == 1.0
    assert J.grid(1).tolist() == [0.0]
    assert J.grid(3).tolist() == [-0.5, 0.0, 0.5]


@pytest.mark.parametrize("weight,x,expected", [
    (Legendre(), 0.3, 1.0),
    (Chebyshev1(), 0.0, 1.0),
    (STEP, 0.5, 2.0),
    (STEP, -0.5, 1.0),
    (Constant(3.0), 0.1, 3.0),
])
def test_eval_weight_examples(weight, x, expected):
    assert eval_weight(Measure(weight), x) == expected


def test_piecewise_right_limit():
    assert eval_weight(Measure(STEP), 0.0) == 2.0


def test_jacobi_against_formula():
    w = Jacobi(0.3, -0.7)
    x = np.linspace(-0.9, 0.9, 7)
    np.testing.assert_allclose(w(x), (1 - x) ** 0.3 * (1 + x) ** -0.7, rtol=1e-14)


def test_eval_weight_outside_domain():
    with pytest.raises(DomainError):
        eval_weight(Measure(Legendre()), 1.0)
    with pytest.raises(DomainError):
        eval_weight(Measure(Legendre()), [0.0, -1.5])


def test_invalid_weights_rejected():
    with pytest.raises(ValueError):
        Jacobi(-1.0, 0.0)
    with pytest.raises(ValueError):
        Constant(0.0)
    with pytest.raises(ValueError):
        Piecewise((0.0,), (1.0, -2.0))
    with pytest.raises(ValueError):
        Piecewise((0.5, 0.1), (1.0, 1.0, 1.0))


def test_measure_point_mass_rules():
    with pytest.raises(ValueError):
        Measure(Legendre(), ((0.2, 1.0), (0.2, 0.5)))
    with pytest.raises(DomainError):
        Measure(Legendre(), ((1.0, 1.0),))
    with pytest.raises(ValueError):
        Measure(Legendre(), ((0.2, -1.0),))
    m = Measure(Legendre(), ((0.5, 1.0), (-0.5, 2.0)))
    assert m.point_masses == ((-0.5, 2.0), (0.5, 1.0))


def test_smoothing_constant_is_identity():
    m = smooth_weight(Measure(Constant(3.0)), 0.05, Interval(-0.5, 0.5))
    x = np.linspace(-0.5, 0.499, 101)
    np.testing.assert_allclose(m.weight(x), 3.0, rtol=0, atol=1e-14)


def test_smoothing_step_examples():
    m = smooth_weight(Measure(STEP), 0.1, Interval(-0.5, 0.5))
    # (1/0.2)(0.1*1 + 0.1*2) and a window that sees only the value 2
    assert m.weight(0.0) == pytest.approx(1.5, abs=1e-14)
    assert m.weight(0.2) == pytest.approx(2.0, abs=1e-14)
    # outside its region the base weight is returned untouched
    assert m.weight(0.7) == 2.0


def test_smoothing_literal_doubles():
    m = Smoothed(STEP, 0.1, Interval(-0.5, 0.5), literal=True)
    assert m(0.0) == pytest.approx(3.0, abs=1e-14)


def test_smoothing_against_direct_integral():
    from scipy.integrate import quad

    base = Jacobi(0.5, 0.5)
    m = Smoothed(base, 0.07, Interval(-0.6, 0.6))
    for x in (-0.55, 0.0, 0.31):
        ref = quad(base, x - 0.07, x + 0.07, epsabs=1e-14)[0] / 0.14
        assert m(x) == pytest.approx(ref, rel=1e-13)


def test_smoothing_converges_at_continuity_points():
    x = np.concatenate((np.linspace(-0.5, -0.1, 20), np.linspace(0.1, 0.5, 20)))
    gaps = []
    for delta in (0.2, 0.1, 0.05):
        m = Smoothed(STEP, delta, Interval(-0.6, 0.6))
        gaps.append(np.max(np.abs(m(x) - STEP(x))))
    assert gaps[-1] < 1e-14 and gaps[0] > gaps[-1]


def test_smoothing_rejects_mass_near_region():
    m = Measure(Legendre(), ((0.55, 1.0),))
    with pytest.raises(DomainError):
        smooth_weight(m, 0.1, Interval(-0.5, 0.5))


def test_dominates_examples():
    leg, two = Measure(Legendre()), Measure(Constant(2.0))
    assert dominates(leg, two, GRID) == (True, -1.0)
    assert dominates(two, leg, GRID) == (False, 1.0)
    bumped = Measure(Perturbed(Legendre(), Constant(1.0), Interval(0.6, 0.8)))
    assert dominates(leg, bumped, np.linspace(-0.9, 0.9, 181))[0]


def test_dominates_point_masses():
    leg = Measure(Legendre())
    heavy = Measure(Legendre(), ((0.9, 0.5),))
    assert dominates(leg, heavy, GRID)[0]
    assert not dominates(heavy, leg, GRID)[0]


def test_perturbed_support():
    w = Perturbed(Legendre(), Constant(1.0), Interval(0.6, 0.8))
    assert w(0.5) == 1.0 and w(0.7) == 2.0 and w(0.8) == 1.0
    assert w.breakpoints == (0.6, 0.8)


def test_dict_round_trip():
    docs = [
        {"family": "jacobi", "params": {"alpha": 0.5, "beta": -0.5}, "point_masses": []},
        {"family": "piecewise", "params": {"breakpoints": [0.0], "values": [1.0, 2.0]},
         "point_masses": [[0.9, 0.5]]},
        {"family": "perturbed", "params": {
            "base": {"family": "legendre", "params": {}},
            "bump": {"family": "constant", "params": {"c": 1.0}}, "support": [0.6, 0.8]},
         "point_masses": []},
    ]
    for d in docs:
        m = measure_from_dict(d)
        assert measure_from_dict(m.to_dict()) == m


def test_dict_errors_name_location():
    with pytest.raises(ValueError, match="measure.family"):
        weight_from_dict({"family": "hermite"})
    with pytest.raises(ValueError, match="unknown keys"):
        weight_from_dict({"family": "jacobi", "params": {"alpha": 0, "beta": 0, "gamma": 1}})
    with pytest.raises(ValueError, match="missing 'beta'"):
        weight_from_dict({"family": "jacobi", "params": {"alpha": 0}})


weights = st.one_of(
    st.just(Legendre()),
    st.just(Chebyshev1()),
    st.builds(Jacobi, st.floats(-0.95, 3), st.floats(-0.95, 3)),
    st.builds(Constant, st.floats(1e-3, 1e3)),
    st.builds(lambda v: Piecewise((-0.3, 0.4), tuple(v)),
              st.lists(st.floats(1e-3, 10), min_size=3, max_size=3)),
)


@settings(max_examples=60, deadline=None)
@given(weights)
def test_weight_nonnegative(w):
    vals = eval_weight(Measure(w), GRID)
    assert np.all(vals >= 0) and np.all(np.isfinite(vals))


@settings(max_examples=60, deadline=None)
@given(weights)
def test_dominates_reflexive(w):
    ok, gap = dominates(Measure(w), Measure(w), GRID)
    assert ok and gap <= 0


@settings(max_examples=30, deadline=None)
@given(st.floats(0.01, 0.3), st.floats(0.1, 50))
def test_smoothing_constant_property(delta, c):
    m = Smoothed(Constant(c), delta, Interval(-0.5, 0.5))
    assert np.allclose(m(np.linspace(-0.5, 0.49, 31)), c, rtol=1e-14, atol=0)
    assert math.isclose(m(0.0), c, rel_tol=1e-14)
