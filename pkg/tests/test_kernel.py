import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.polynomial import legendre as npleg

from orthokernel.errors import DomainError
from orthokernel.kernel import (christoffel, correlation_det, deriv_kernel, eval_polys, kernel,
                                kernel_at, normalized_kernel, poly_derivatives, poly_matrix, sinc)
from orthokernel.measure import Jacobi, Legendre, Measure, Piecewise
from orthokernel.quadrature import composite_scheme, discretize
from orthokernel.recurrence import jacobi_closed_form, stieltjes
from orthokernel.reference import chebyshev1_kernel, legendre_kernel

rng = np.random.default_rng(20261014)


def test_polynomial_examples(leg_table):
    exact = jacobi_closed_form(0, 0, 50)
    cols = eval_polys(leg_table, 4, 0.5)
    assert cols.values[0, 0] == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    assert cols.values[1, 0] == pytest.approx(math.sqrt(1.5) * 0.5, rel=1e-14)
    # with b_n = 0 exactly, odd polynomials vanish exactly at 0
    odd = eval_polys(exact, 40, 0.0).values[1::2, 0]
    np.testing.assert_array_equal(odd, 0.0)
    assert np.max(np.abs(eval_polys(leg_table, 40, 0.0).values[1::2, 0])) < 1e-14


def test_column_recurrence_residual(step_table):
    t = step_table
    n = 300
    for x in (-0.77, 0.0, 0.41):
        p = eval_polys(t, n, x).values[:, 0]
        k = np.arange(1, n - 1)
        lhs = x * p[k]
        rhs = t.a[k] * p[k + 1] + t.b[k] * p[k] + t.a[k - 1] * p[k - 1]
        scale = np.abs(x * p[k]) + t.a[k] * np.abs(p[k + 1]) + np.abs(t.b[k] * p[k]) \
            + t.a[k - 1] * np.abs(p[k - 1])
        assert np.max(np.abs(lhs - rhs) / scale) <= 1e-12


def test_legendre_against_scipy(leg_table):
    x = np.linspace(-0.99, 0.99, 41)
    for n in (1, 7, 150):
        np.testing.assert_allclose(kernel(leg_table, n, x, 0.3), legendre_kernel(n, x, 0.3),
                                   rtol=1e-11, atol=1e-11 * n)


def test_derivatives_against_numpy_legendre(leg_table):
    x = np.array([-0.6, 0.05, 0.8])
    d = poly_derivatives(leg_table, 12, x, 4)
    for k in range(12):
        P = npleg.Legendre.basis(k) * math.sqrt(k + 0.5)
        for r in range(5):
            np.testing.assert_allclose(d[r, :, k], P.deriv(r)(x) if r else P(x),
                                       rtol=1e-11, atol=1e-11)


def test_derivative_order_cap(leg_table):
    with pytest.raises(ValueError):
        poly_derivatives(leg_table, 5, 0.0, 7)


def test_kernel_examples(leg_table, cheb_table):
    assert kernel(leg_table, 1, 0.3, -0.8) == pytest.approx(0.5, rel=1e-15)
    th, ph = 0.4, 2.1
    for n in (1, 10, 200, 400):
        ref = chebyshev1_kernel(n, math.cos(th), math.cos(ph))
        assert kernel(cheb_table, n, math.cos(th), math.cos(ph)) == pytest.approx(ref, abs=1e-9)


def test_chebyshev_grid_against_closed_form(cheb_table):
    x = np.linspace(-0.98, 0.98, 33)
    X, Y = np.meshgrid(x, x)
    for n in (50, 400):
        assert np.max(np.abs(kernel(cheb_table, n, X, Y) - chebyshev1_kernel(n, X, Y))) <= 1e-9


@settings(max_examples=50, deadline=None)
@given(st.floats(-0.99, 0.99), st.floats(-0.99, 0.99), st.integers(1, 400))
def test_kernel_symmetry_and_positivity(step_table, x, y, n):
    assert kernel(step_table, n, x, y) == kernel(step_table, n, y, x)
    assert kernel(step_table, n, x, x) > 0


@pytest.mark.parametrize("which", ["leg_table", "cheb_table", "step_table"])
def test_cd_consistency(request, which):
    t = request.getfixturevalue(which)
    pts = [(-0.7, 0.2), (0.0, 0.1), (0.5, 0.5 + 2e-6), (-0.95, 0.9)]
    for n in (5, 100, 399):
        for x, y in pts:
            assert kernel_at(t, n, x, y).cd_residual <= 1e-10
    assert kernel_at(t, 50, 0.3, 0.3 + 1e-7).cd_residual is None


def test_cd_consistency_n500(legendre):
    t = stieltjes(legendre, 501)
    assert kernel_at(t, 500, 0.0, 0.1).cd_residual <= 1e-10


def test_kernel_tilde(chebyshev, cheb_table):
    kv = kernel_at(cheb_table, 30, 0.2, -0.4)
    w = lambda x: 1 / math.sqrt(1 - x * x)
    assert kv.K_tilde == pytest.approx(math.sqrt(w(0.2) * w(-0.4)) * kv.K, rel=1e-15)
    assert float(normalized_kernel(chebyshev, cheb_table, 30, 0.2, -0.4)) == pytest.approx(kv.K_tilde)
    with pytest.raises(DomainError):
        normalized_kernel(chebyshev, cheb_table, 30, 1.0, 0.0)


def _random_poly(n):
    return rng.uniform(-1, 1, n)


@pytest.mark.parametrize("which", ["legendre", "chebyshev", "step"])
def test_reproducing_property(request, which):
    m = request.getfixturevalue(which)
    t = stieltjes(m, 60)
    nodes, masses = discretize(m, composite_scheme(m, 60, 100))
    for n in (1, 7, 25, 50):
        Pn = poly_matrix(t, n, nodes)
        for _ in range(100 // 4):
            c = _random_poly(n)
            P = np.polynomial.polynomial.polyval(nodes, c)
            norm = math.sqrt(np.dot(masses, P * P))
            for x in rng.uniform(-0.95, 0.95, 3):
                Kx = Pn @ poly_matrix(t, n, x)
                got = np.dot(masses, Kx * P)
                assert abs(got - np.polynomial.polynomial.polyval(x, c)) <= 1e-8 * norm


@pytest.mark.parametrize("which", ["legendre", "step"])
def test_extremal_property(request, which):
    m = request.getfixturevalue(which)
    t = stieltjes(m, 60)
    nodes, masses = discretize(m, composite_scheme(m, 60, 100))
    for n, x in itertools.product((1, 10, 50), (-0.6, 0.0, 0.85)):
        lam = christoffel(t, n, x)
        for _ in range(100):
            c = _random_poly(n)
            P = np.polynomial.polynomial.polyval(nodes, c)
            Px = np.polynomial.polynomial.polyval(x, c)
            if abs(Px) > 1e-6:
                assert lam <= np.dot(masses, P * P) / Px ** 2 * (1 + 1e-8)
        Kx = poly_matrix(t, n, nodes) @ poly_matrix(t, n, x)
        ratio = np.dot(masses, Kx * Kx) / kernel(t, n, x, x) ** 2
        assert ratio == pytest.approx(lam, rel=1e-8)


def test_christoffel_examples(leg_table, cheb_table):
    assert christoffel(leg_table, 1, 0.77) == pytest.approx(2.0, rel=1e-15)
    assert 200 * christoffel(cheb_table, 200, 0.0) == pytest.approx(math.pi, rel=0.02)


def test_deriv_kernel_examples(leg_table, step_table):
    assert deriv_kernel(step_table, 40, 0.3, 0, 0) == pytest.approx(float(kernel(step_table, 40, 0.3, 0.3)), rel=1e-15)
    assert deriv_kernel(step_table, 40, 0.3, 1, 1) >= 0
    assert deriv_kernel(jacobi_closed_form(0, 0, 3), 3, 0.0, 1, 0) == 0.0
    assert abs(deriv_kernel(leg_table, 3, 0.0, 1, 0)) < 1e-15


def test_taylor_consistency(step_table):
    t, n, x = step_table, 12, 0.35
    R = 2
    errors = []
    for delta in (1e-3, 5e-4):
        series = sum(deriv_kernel(t, n, x, r, s) * delta ** (r + s) / (math.factorial(r) * math.factorial(s))
                     for r in range(R + 1) for s in range(R + 1))
        errors.append(abs(float(kernel(t, n, x + delta, x + delta)) - series))
    scale = float(kernel(t, n, x, x))
    assert errors[0] / scale < 1e-6
    # remainder is third order in delta
    assert 4 < errors[0] / errors[1] < 16


def test_point_mass_rank_one_update(legendre, leg_table):
    z, mass = 0.9, 0.5
    t_star = stieltjes(Measure(Legendre(), ((z, mass),)), 120)
    x = np.linspace(-0.9, 0.95, 9)
    for n in (10, 60, 120):
        K = kernel(leg_table, n, x[:, None], x[None, :])
        Kxz = kernel(leg_table, n, x, z)
        ref = K - mass * np.outer(Kxz, Kxz) / (1 + mass * float(kernel(leg_table, n, z, z)))
        got = kernel(t_star, n, x[:, None], x[None, :])
        assert np.max(np.abs(got - ref)) <= 1e-10 * np.max(np.abs(K))


def test_correlation_det_examples(legendre, leg_table):
    kt = float(normalized_kernel(legendre, leg_table, 50, 0.2, 0.2))
    assert correlation_det(legendre, leg_table, 50, [0.2]) == pytest.approx(kt, rel=1e-15)
    assert abs(correlation_det(legendre, leg_table, 50, [0.2, 0.2])) <= 1e-12 * kt ** 2
    with pytest.raises(ValueError):
        correlation_det(legendre, leg_table, 50, np.linspace(-0.5, 0.5, 9))


def test_correlation_det_permutation(step, step_table):
    pts = np.array([-0.4, -0.1, 0.03, 0.5])
    d0 = correlation_det(step, step_table, 30, pts)
    for perm in itertools.permutations(range(4)):
        assert correlation_det(step, step_table, 30, pts[list(perm)]) == pytest.approx(d0, rel=1e-12)


def test_sinc():
    assert sinc(0.0) == 1.0
    assert abs(sinc(1.0)) < 1e-16
    assert sinc(0.5) == pytest.approx(2 / math.pi, rel=1e-15)
    u = np.array([-2e-8, -1e-8, -5e-9, 0.0, 5e-9, 1e-8, 2e-8])
    np.testing.assert_allclose(sinc(u), np.sinc(u), rtol=1e-15)
    det = 1 - sinc(0.5) ** 2
    assert det == pytest.approx(1 - (2 / math.pi) ** 2) and det == pytest.approx(0.5947, abs=1e-4)


def test_jacobi_kernel_cd_and_table_depth():
    t = stieltjes(Measure(Jacobi(0.5, -0.5)), 80)
    assert kernel_at(t, 80, 0.1, 0.2).cd_residual <= 1e-10
    assert kernel_at(t, 81, 0.1, 0.2).cd_residual is None
    with pytest.raises(ValueError):
        kernel(t, 82, 0.0, 0.0)
