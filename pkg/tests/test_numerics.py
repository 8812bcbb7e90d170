import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import simpson

from normedminimal import numerics
from normedminimal.errors import NonConvergence, NonFinite, OutOfRange
from normedminimal.numerics import InversionConfig, QuadratureConfig
from normedminimal.translation import F2_closed_form


def test_constant_and_arctan():
    assert numerics.integrate(lambda x: 1.0, 0.0, 1.0) == pytest.approx(1.0, abs=1e-15)
    assert numerics.integrate(lambda x: 1 / (1 + x * x), 0, 1) == pytest.approx(math.pi / 4, abs=1e-14)


def test_endpoint_singularity_against_fixed_grid_oracle():
    # x = cosh(phi^2) turns (x^2-1)^(-3/4) dx into 2 phi / sqrt(sinh(phi^2)) dphi, smooth at 0
    top = math.sqrt(math.acosh(2.0))
    phi = np.linspace(0.0, top, 1_000_001)
    vals = np.empty_like(phi)
    vals[0] = 2.0
    vals[1:] = 2 * phi[1:] / np.sqrt(np.sinh(phi[1:] ** 2))
    oracle = simpson(vals, x=phi)
    got = numerics.integrate(lambda x: (x * x - 1) ** -0.75, 1.0, 2.0)
    assert got == pytest.approx(oracle, abs=1e-9)


def test_truncated_infinite_integral():
    got = numerics.integrate(lambda t: 1 / (1 + t ** 4), 0.0, 1e6)
    assert abs(got - math.pi / (2 * math.sqrt(2))) < 1e-8


def test_reversed_limits_negate():
    a = numerics.integrate(math.cos, 0.0, 1.3)
    assert numerics.integrate(math.cos, 1.3, 0.0) == pytest.approx(-a, abs=1e-15)
    assert numerics.integrate(math.cos, 0.7, 0.7) == 0.0


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(0.01, 3), st.floats(0.01, 3))
def test_additivity(a, d1, d2):
    f = lambda x: math.exp(-x * x) * math.cos(3 * x)
    b, c = a + d1, a + d1 + d2
    whole = numerics.integrate(f, a, c)
    assert whole == pytest.approx(numerics.integrate(f, a, b) + numerics.integrate(f, b, c),
                                  abs=1e-12)


def test_nonfinite_interior_raises():
    with pytest.raises(NonFinite):
        numerics.integrate(lambda x: 1.0 / (x - 0.5) if x != 0.5 else math.inf, 0.0, 1.0)
    with pytest.raises(NonFinite):
        numerics.integrate(lambda x: math.nan, 0.0, 1.0)


def test_subdivision_limit_raises():
    cfg = QuadratureConfig(max_subdivisions=1)
    with pytest.raises(NonConvergence):
        numerics.integrate(lambda x: math.sin(1 / x) / x if x else 0.0, 1e-6, 1.0, cfg)


@pytest.mark.parametrize("kwargs", [{"abs_tol": 0}, {"rel_tol": -1}, {"max_subdivisions": 0}])
def test_quadrature_config_validation(kwargs):
    with pytest.raises(ValueError):
        QuadratureConfig(**kwargs)


@pytest.mark.parametrize("kwargs", [{"tol": 0}, {"bracket_growth": 1.0}, {"max_iterations": 0}])
def test_inversion_config_validation(kwargs):
    with pytest.raises(ValueError):
        InversionConfig(**kwargs)


def test_cube_root():
    assert numerics.invert_monotone(lambda x: x ** 3, 8.0) == pytest.approx(2.0, abs=1e-13)


def test_inversion_of_F2():
    assert numerics.invert_monotone(F2_closed_form, 0.0) == 0.0
    y = F2_closed_form(1.5)
    assert numerics.invert_monotone(F2_closed_form, y) == pytest.approx(1.5, abs=1e-10)


def test_far_target_brackets_geometrically():
    assert numerics.invert_monotone(lambda x: x, -3e5) == pytest.approx(-3e5, rel=1e-13)


@settings(max_examples=60, deadline=None)
@given(st.floats(-50, 50))
def test_round_trip(x):
    f = lambda t: t + math.atan(t)
    y = f(x)
    got = numerics.invert_monotone(f, y)
    assert abs(f(got) - y) <= 1e-13 * (1 + abs(y))
    assert got == pytest.approx(x, abs=10 * 1e-13 * (1 + abs(y)))


def test_out_of_range():
    with pytest.raises(OutOfRange):
        numerics.invert_monotone(math.atan, 2.0)
    with pytest.raises(OutOfRange):
        numerics.invert_monotone(math.atan, -1.6)
