import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bikrylov import (cubic_spline, estimate_functional, gauss3_integrate,
                      ode_1d)


def test_spline_interpolates_at_knots(rng):
    x = np.sort(rng.uniform(0, 1, 9))
    y = rng.standard_normal(9)
    s = cubic_spline(x, y)
    assert np.allclose(s(x), y, atol=1e-12)


def test_clamped_spline_reproduces_cubics():
    def p(t):
        return t ** 3 - 2 * t ** 2 + 3 * t - 1

    def dp(t):
        return 3 * t ** 2 - 4 * t + 3

    x = np.linspace(0, 2, 7)
    s = cubic_spline(x, p(x), ends=(("clamped", dp(0.0)),
                                    ("clamped", dp(2.0))))
    t = np.linspace(0, 2, 113)
    assert np.max(np.abs(s(t) - p(t))) < 1e-12
    assert np.max(np.abs(s.derivative(t) - dp(t))) < 1e-11
    assert np.max(np.abs(s.second_derivative(t) - (6 * t - 4))) < 1e-10


def test_natural_ends_zero_curvature(rng):
    x = np.linspace(0, 1, 8)
    s = cubic_spline(x, rng.standard_normal(8))
    assert s.second_derivative(0.0) == pytest.approx(0.0, abs=1e-12)
    assert s.second_derivative(1.0) == pytest.approx(0.0, abs=1e-12)


def test_clamped_ends_hit_requested_slope(rng):
    x = np.linspace(0, 1, 8)
    y = rng.standard_normal(8)
    s = cubic_spline(x, y, ends=(("clamped", 2.5), ("clamped", -0.75)))
    assert s.derivative(0.0) == pytest.approx(2.5, abs=1e-10)
    assert s.derivative(1.0) == pytest.approx(-0.75, abs=1e-10)


def test_robin_ends_satisfy_boundary_relation(rng):
    x = np.linspace(0, 1, 10)
    y = rng.standard_normal(10)
    left = (1.0, 2.0, 0.5)
    right = (3.0, -1.0, 1.25)
    s = cubic_spline(x, y, ends=(("robin", left), ("robin", right)))
    a, b, r = left
    assert a * s.second_derivative(0.0) + b * s.derivative(0.0) == \
        pytest.approx(r, abs=1e-10)
    a, b, r = right
    assert a * s.second_derivative(1.0) + b * s.derivative(1.0) == \
        pytest.approx(r, abs=1e-10)


def test_spline_rejects_bad_input():
    with pytest.raises(ValueError, match="increasing"):
        cubic_spline([0.0, 0.5, 0.5, 1.0], [1.0, 2.0, 3.0, 4.0])
    with pytest.raises(ValueError, match="3 knots"):
        cubic_spline([0.0, 1.0], [1.0, 2.0])
    with pytest.raises(ValueError, match="end condition"):
        cubic_spline([0.0, 0.5, 1.0], [1.0, 2.0, 3.0],
                     ends=(("unknown", 0.0), "natural"))


@settings(max_examples=50, deadline=None)
@given(coeffs=st.lists(st.floats(-8, 8), min_size=6, max_size=6))
def test_gauss3_exact_through_degree_five(coeffs):
    poly = np.polynomial.Polynomial(coeffs)
    panels = np.array([0.0, 0.37, 0.5, 1.1, 2.0])
    exact = poly.integ()(panels[-1]) - poly.integ()(panels[0])
    got = gauss3_integrate(poly, panels)
    assert got == pytest.approx(exact, rel=1e-12, abs=1e-12)


def test_gauss3_not_exact_at_degree_six():
    got = gauss3_integrate(lambda t: t ** 6, np.array([0.0, 1.0]))
    assert abs(got - 1.0 / 7.0) == pytest.approx(3.571e-04, rel=1e-3)


def test_functional_superconvergence_with_direct_solves():
    # frozen errors of both estimates against the closed-form value,
    # obtained from dense factorizations of the grid systems
    expected = {
        8: (1.256531e-02, 2.846168e-05),
        16: (3.510508e-03, 2.222261e-06),
        32: (9.307292e-04, 1.562239e-07),
        64: (2.398338e-04, 1.037371e-08),
    }
    errs_naive, errs_corr, hs = [], [], []
    for n, (en, ec) in expected.items():
        p = ode_1d(n)
        a = p.matrix.to_dense()
        x = np.linalg.solve(a, p.b)
        t = np.linalg.solve(a.T, p.c)
        est = estimate_functional(p, x, t)
        j = p.meta["J_star"]
        assert abs(est.naive - j) == pytest.approx(en, rel=1e-4)
        assert abs(est.corrected - j) == pytest.approx(ec, rel=1e-4)
        assert abs(est.corrected - j) < abs(est.naive - j)
        errs_naive.append(abs(est.naive - j))
        errs_corr.append(abs(est.corrected - j))
        hs.append(est.h)
    slope_naive = np.polyfit(np.log(hs), np.log(errs_naive), 1)[0]
    slope_corr = np.polyfit(np.log(hs), np.log(errs_corr), 1)[0]
    assert slope_naive == pytest.approx(2.0, abs=0.2)
    assert slope_corr == pytest.approx(4.0, abs=0.3)


def test_estimate_reports_grid_metadata():
    p = ode_1d(10)
    a = p.matrix.to_dense()
    est = estimate_functional(p, np.linalg.solve(a, p.b),
                              np.linalg.solve(a.T, p.c))
    assert est.n == 10
    assert est.h == pytest.approx(1.0 / 11.0)
