import math

import numpy as np
import pytest
import sympy as sp

from normedminimal import curvature as cv
from normedminimal import separable as sep
from normedminimal.errors import DegenerateSlope, DomainViolation, InfeasibleModuli
from normedminimal.translation import F2_closed_form

P = sep.PRESETS


def test_profiles_of_examples():
    t1 = sep.build_xyz(P["example6.1"])
    for x in (-2.0, 0.5, 3.0):
        assert t1.X(x) == pytest.approx(x * x - 1)
        assert t1.Y(x) == pytest.approx(x * x - 1)
        assert t1.Z(x) == pytest.approx(2 - x * x / 2)
    assert t1.X(2.0) == 3.0
    t2 = sep.build_xyz(P["example6.2"])
    assert t2.X(0.0) == 2.0
    assert t2.X(0.7) == pytest.approx(1 + math.exp(-0.7), rel=1e-15)
    t4 = sep.build_xyz(P["example6.4"])
    assert t4.X(0.0) == 1.0
    assert t4.X(0.3) == pytest.approx(1 - 2 * math.sin(0.3), rel=1e-15)


def test_profile_derivatives_match_differences(rng):
    c = sep.CoefficientSet("trig", (0.3, 1, 2), (0.5, -1, 1), (2, 0.1, -1), b=1.7)
    for prof in sep.build_xyz(c):
        for x in rng.uniform(-2, 2, 5):
            for order in (1, 2, 3):
                h = 1e-4
                fd = (prof(x + h, order - 1) - prof(x - h, order - 1)) / (2 * h)
                assert prof(x, order) == pytest.approx(fd, rel=1e-6, abs=1e-7)
    with pytest.raises(ValueError):
        sep.build_xyz(c).X(0.0, 4)


def test_coefficient_validation():
    with pytest.raises(ValueError):
        sep.CoefficientSet("cosh", (1, 1, 1), (0, 0, 0), (0, 0, 0))
    with pytest.raises(ValueError):
        sep.CoefficientSet("exp", (1, 1, 1), (0, 0, 0), (0, 0, 0))
    with pytest.raises(ValueError):
        sep.CoefficientSet("trig", (1, 1, 1), (0, 0, 0), (0, 0, 0), b=-1.0)
    with pytest.raises(ValueError):
        sep.CoefficientSet("poly", (1, 1), (0, 0, 0), (0, 0, 0))
    assert sep.CoefficientSet("poly", (1, 1, 1), (0, 0, 0), (0, 0, 0), b=5.0).b is None


@pytest.mark.parametrize("key", ["example6.1", "example6.2", "example6.3", "example6.4"])
def test_examples_satisfy_constraints(key):
    assert np.max(np.abs(sep.check_constraints(P[key]))) < 1e-13


def test_worked_constraint_values():
    # second polynomial equation for the example6.1 preset: 2*1*1 - 2*(-2)*(-1/2) + 0
    assert sep.check_constraints(P["example6.1"])[1] == 0.0
    # (p2+p3) r1 + q2 r3 + q3 r2 = -4 + 2 + 2 for the example6.4 preset
    assert sep.check_constraints(P["example6.4"])[1] == pytest.approx(0.0, abs=1e-15)
    for case in sep.CASES:
        zero = sep.CoefficientSet(case, (0, 0, 0), (0, 0, 0), (0, 0, 0), b=1.0)
        np.testing.assert_array_equal(sep.check_constraints(zero), 0.0)


def _symbolic_b_coefficients(case):
    """Coefficients of B(u, v, -u-v) in the family's basis, as functions of (p, q, r)."""
    p = sp.symbols("p1:4", real=True)
    q = sp.symbols("q1:4", real=True)
    r = sp.symbols("r1:4", real=True)
    e1, e2 = sp.symbols("e1 e2", positive=True)
    if case == "poly":
        w = -e1 - e2
        args = (e1, e2, w)
        prof = [p[i] + q[i] * x + r[i] * x ** 2 for i, x in enumerate(args)]
        dprof = [q[i] + 2 * r[i] * x for i, x in enumerate(args)]
    else:
        # e1, e2 stand for exp(u), exp(v) or exp(i u), exp(i v); b = 1
        bases = (e1, e2, 1 / (e1 * e2))
        if case == "exp":
            prof = [p[i] + q[i] * E + r[i] / E for i, E in enumerate(bases)]
            dprof = [q[i] * E - r[i] / E for i, E in enumerate(bases)]
        else:
            prof = [p[i] + q[i] * (E + 1 / E) / 2 + r[i] * (E - 1 / E) / (2 * sp.I)
                    for i, E in enumerate(bases)]
            dprof = [r[i] * (E + 1 / E) / 2 - q[i] * (E - 1 / E) / (2 * sp.I)
                     for i, E in enumerate(bases)]
    expr = ((prof[1] + prof[2]) * dprof[0] + (prof[2] + prof[0]) * dprof[1]
            + (prof[0] + prof[1]) * dprof[2])
    if case != "poly":
        expr = expr * e1 ** 3 * e2 ** 3
    raw = sp.Poly(sp.expand(expr), e1, e2).coeffs()
    parts = [part for c in raw for part in (sp.re(c), sp.im(c)) if part != 0]
    return sp.lambdify((p, q, r), parts, "numpy")


@pytest.mark.parametrize("case", sep.CASES)
def test_constraints_span_the_functional_equation(case, rng):
    """B vanishes identically iff the six residuals do: both lists of
    quadratic forms must span the same space."""
    coeffs = _symbolic_b_coefficients(case)
    K, R = [], []
    for _ in range(200):
        p, q, r = rng.normal(size=(3, 3))
        K.append(coeffs(p, q, r))
        R.append(sep.check_constraints(sep.CoefficientSet(case, p, q, r, b=1.0)))
    K, R = np.array(K, dtype=float), np.array(R)
    rank = lambda M: np.linalg.matrix_rank(M, tol=1e-9 * np.abs(M).max())
    assert rank(R) == rank(K) == rank(np.hstack([K, R]))


def test_b_residual_hand_point():
    t = sep.build_xyz(P["example6.1"])
    assert sep.b_residual(2.0, -3.0, t) == 0.0


def test_b_residual_example62(rng):
    t = sep.build_xyz(P["example6.2"])
    for u, v in rng.uniform(-3, 1, (100, 2)):
        if u + v < 0:
            w = -u - v
            scale = sum(abs(t[i](x, 1)) * (abs(t[j](y)) + abs(t[k](z)))
                        for i, j, k, x, y, z in [(0, 1, 2, u, v, w), (1, 2, 0, v, w, u),
                                                 (2, 0, 1, w, u, v)])
            assert abs(sep.b_residual(u, v, t)) < 1e-12 * max(1.0, scale)


def test_b_residual_perturbation():
    U, V = np.meshgrid(np.linspace(-1.5, 1.5, 20), np.linspace(-1.5, 1.5, 20))
    for field in ("p", "q", "r"):
        for i in range(3):
            t = sep.build_xyz(P["example6.1"].perturbed(field, i, 0.1))
            assert np.max(np.abs(sep.b_residual(U, V, t))) > 1e-3


def test_third_derivative_ratio():
    ex = sep.build_xyz(sep.CoefficientSet("exp", (1, 2, 3), (0.5, 1, -1), (1, 2, 0.3), b=1.0))
    tr = sep.build_xyz(sep.CoefficientSet("trig", (1, 2, 3), (0.5, 1, -1), (1, 2, 0.3), b=2.0))
    po = sep.build_xyz(P["example6.1"])
    for x in (-1.1, 0.4, 2.3):
        for axis in sep.AXES:
            assert sep.third_derivative_ratio(ex, axis, x) == pytest.approx(1.0, abs=1e-12)
            assert sep.third_derivative_ratio(tr, axis, x) == pytest.approx(-4.0, abs=1e-10)
            assert sep.third_derivative_ratio(po, axis, x) == 0.0
    with pytest.raises(DegenerateSlope):
        sep.third_derivative_ratio(po, "X", 0.0)


def test_trig_solver_reproduces_example64():
    sol = sep.solve_trig_coeffs((1, 1, 1), math.pi / 4, math.pi / 4, b=1.0)
    c = sol.coefficients
    np.testing.assert_allclose(c.q, P["example6.4"].q, atol=1e-15)
    np.testing.assert_allclose(c.r, P["example6.4"].r, atol=1e-15)
    assert all(sol.positivity)


def test_trig_solver_random_phases(rng):
    for _ in range(100):
        sol = sep.solve_trig_coeffs((1, 1, 1), *rng.uniform(0, 2 * math.pi, 2),
                                    b=rng.uniform(0.3, 3))
        assert np.max(np.abs(sep.check_constraints(sol.coefficients))) < 1e-13
    for _ in range(50):
        p = rng.uniform(0.1, 3, 3)
        sol = sep.solve_trig_coeffs(p, *rng.uniform(0, 2 * math.pi, 2))
        assert np.max(np.abs(sep.check_constraints(sol.coefficients))) < 1e-12


def test_trig_solver_infeasible():
    with pytest.raises(InfeasibleModuli):
        sep.solve_trig_coeffs((1, 1, -2), 0.0, 0.0)
    with pytest.raises(InfeasibleModuli):
        sep.solve_trig_coeffs((1, 1, -1), 0.0, 0.0)


def test_domain_example61():
    t = sep.build_xyz(P["example6.1"])
    pts = sep.positivity_domain(t, (-4, 4), (-4, 4), 161)
    assert len(pts) > 0
    u, v = pts.T
    assert np.all(np.abs(u) > 1) and np.all(np.abs(v) > 1) and np.all(np.abs(u + v) < 2)


def test_domain_example62():
    t = sep.build_xyz(P["example6.2"])
    U, V = np.meshgrid(np.linspace(-3, 3, 61), np.linspace(-3, 3, 61))
    np.testing.assert_array_equal(sep.positivity_mask(t, U, V), U + V < -1e-9)


def test_domain_example63_empty():
    t = sep.build_xyz(P["example6.3"])
    w = np.linspace(-10, 10, 1001)
    assert np.all(t.Z(w) <= 1e-15)
    assert len(sep.positivity_domain(t, (-10, 10), (-10, 10), 301)) == 0
    with pytest.raises(DomainViolation):
        sep.default_anchor(t, (-10, 10), (-10, 10))


def test_domain_grid_validation():
    with pytest.raises(ValueError):
        sep.positivity_domain(sep.build_xyz(P["example6.1"]), (0, 1), (0, 1), 1)


def test_default_anchor_inside():
    for key, (uw, vw) in sep.PRESET_WINDOWS.items():
        if key == "example6.3":
            continue
        t = sep.build_xyz(P[key])
        assert sep.positivity_mask(t, *sep.default_anchor(t, uw, vw))


def test_reconstruct_anchor_is_origin():
    t = sep.build_xyz(P["example6.1"])
    np.testing.assert_array_equal(sep.reconstruct_point(2.0, -2.5, t, 2, (2.0, -2.5)), 0.0)


def z_leg_oracle(w0, w1):
    # e^w - 1 = y^4 turns (e^w - 1)^(-3/4) dw into 4 dy/(1 + y^4) = (4/3) dF_2
    y = lambda w: math.expm1(w) ** 0.25
    return 4.0 / 3.0 * (F2_closed_form(y(w1)) - F2_closed_form(y(w0)))


def test_reconstruct_example62_against_closed_form():
    t = sep.build_xyz(P["example6.2"])
    pt = sep.reconstruct_point(-2.0, -1.0, t, 2, (-1.0, -1.0))
    assert np.all(np.isfinite(pt))
    assert pt[2] == pytest.approx(z_leg_oracle(2.0, 3.0), abs=1e-12)
    # X = 1 + e^-u: direct quadrature check of the first leg
    assert pt[0] == pytest.approx(-sep.numerics.integrate(
        lambda x: (1 + math.exp(-x)) ** -0.75, -2.0, -1.0), abs=1e-14)


def test_z_leg_endpoint_singularity():
    t = sep.build_xyz(P["example6.2"])
    nodes = [1e-8, 1e-6, 0.5]
    got = sep.cumulative_primitive(t.Z, 2.0, nodes, 2)
    for w, val in zip(nodes, got):
        assert val == pytest.approx(z_leg_oracle(2.0, w), abs=1e-10)
    # below the positivity margin the node is treated as outside the domain
    assert np.isnan(sep.cumulative_primitive(t.Z, 2.0, [1e-12], 2)[0])


def test_cumulative_matches_pointwise():
    t = sep.build_xyz(P["example6.4"])
    nodes = np.linspace(-0.9, 0.3, 13)
    cum = sep.cumulative_primitive(t.X, -0.2, nodes, 3)
    for x, val in zip(nodes, cum):
        assert val == pytest.approx(sep._leg(t.X, -0.2, x, 5 / 6, "X"), abs=1e-12)


def test_unreachable_nodes_are_nan():
    # X = u^2 - 1 is negative on (-1, 1): nodes across the gap cannot be reached
    t = sep.build_xyz(P["example6.1"])
    cum = sep.cumulative_primitive(t.X, 2.0, [-2.0, 0.0, 1.5, 3.0], 2)
    assert np.isnan(cum[0]) and np.isnan(cum[1])
    assert np.all(np.isfinite(cum[2:]))
    with pytest.raises(DomainViolation):
        sep.reconstruct_point(-2.0, -2.5, t, 2, (2.0, -2.5))


@pytest.mark.parametrize("key", ["example6.1", "example6.2", "example6.4"])
@pytest.mark.parametrize("m", [2, 3])
def test_reconstructed_surface_is_minimal(key, m):
    t = sep.build_xyz(P[key])
    uw, vw = sep.PRESET_WINDOWS[key]
    for u, v in sep.positivity_domain(t, uw, vw, 30):
        assert abs(sep.analytic_residual(u, v, t, m)) < 1e-8


@pytest.mark.parametrize("key", ["example6.1", "example6.2", "example6.4"])
def test_reconstructed_surface_oracle(key):
    t = sep.build_xyz(P[key])
    uw, vw = sep.PRESET_WINDOWS[key]
    anchor = sep.default_anchor(t, uw, vw)
    for signs in ((1, 1, 1), (-1, 1, -1)):
        patch = sep.separable_patch(t, 2, anchor, signs)
        pts = sep.positivity_domain(t, uw, vw, 15)
        interior = [p for p in pts if min(t.X(p[0]), t.Y(p[1]), t.Z(-p.sum())) > 0.1]
        for u, v in interior[::max(1, len(interior) // 8)]:
            assert abs(cv.mean_curvature_numeric(patch, u, v, 2)) < 1e-6


def test_jets_consistent_with_reconstruction():
    # dx3/dx1 = -f'/h' on the reconstructed surface
    t = sep.build_xyz(P["example6.2"])
    anchor = (-1.0, -1.0)
    u, v, d = -1.3, -0.6, 1e-5
    fp, _, gp, _, hp, _ = sep.separable_jets(u, v, t, 2)
    # move along v fixed: x1 changes, x2 fixed
    a = sep.reconstruct_point(u + d, v, t, 2, anchor)
    b = sep.reconstruct_point(u - d, v, t, 2, anchor)
    assert (a[2] - b[2]) / (a[0] - b[0]) == pytest.approx(-fp / hp, rel=1e-8)


def test_patch_outside_domain():
    t = sep.build_xyz(P["example6.2"])
    patch = sep.separable_patch(t, 2, (-1.0, -1.0))
    with pytest.raises(DomainViolation):
        patch.tangents(1.0, 1.0)
