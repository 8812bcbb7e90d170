"""Mean curvature of graph and separable surfaces in (R^3, ||.||_2m).

Two independent routes are provided: closed-form expressions in the slopes
and second derivatives, and :func:`mean_curvature_numeric`, which only uses
the Birkhoff-Gauss map and central differences, ``H = trace(d eta) / 2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateFactor, DegenerateSlope, DegenerateTangent
from .lp_geometry import GraphJet2, as_order, birkhoff_gauss_implicit, odd_root

SLOPE_EPS = 1e-12
DEFAULT_STEP = 1e-4
MAX_TANGENT_CONDITION = 1e8


@dataclass
class CurvatureSample:
    u: float
    v: float
    point: np.ndarray
    H_analytic: float
    H_numeric: Optional[float] = None

    @property
    def residual(self) -> float:
        return abs(self.H_analytic)


@dataclass
class SurfacePatch:
    """A parametrized surface piece.

    ``point(u, v)`` returns the 3D position and ``tangents(u, v)`` the pair of
    partial derivatives ``(X_u, X_v)``.  The orientation of the patch is the
    one of ``X_u x X_v``.
    """
    point: Callable[[float, float], np.ndarray]
    tangents: Callable[[float, float], tuple[np.ndarray, np.ndarray]]


def graph_patch(f, f_u, f_v) -> SurfacePatch:
    """Patch ``(u, v, f(u, v))`` from the height function and its slopes."""
    return SurfacePatch(
        point=lambda u, v: np.array([u, v, f(u, v)], dtype=float),
        tangents=lambda u, v: (np.array([1.0, 0.0, f_u(u, v)]),
                               np.array([0.0, 1.0, f_v(u, v)])),
    )


def _pow_a(x: float, k: int, m: int) -> float:
    """``x ** ((2m-2)/(2m-1))`` with odd-root semantics (nonnegative)."""
    return odd_root(x, k) ** (2 * m - 2)


def _pow_e(x: float, k: int, m: int) -> float:
    """``x ** (2m/(2m-1))`` with odd-root semantics (nonnegative)."""
    return odd_root(x, k) ** (2 * m)


def _require_slopes(m: int, **slopes):
    # negative powers of the slopes only appear once m >= 2
    if m == 1:
        return
    for name, val in slopes.items():
        if abs(val) < SLOPE_EPS:
            raise DegenerateSlope(f"{name} = {val!r} vanishes; the formula needs it nonzero")


def mean_curvature_graph(jet: GraphJet2, m) -> float:
    order = as_order(m)
    m, k = order.m, order.k
    fu, fv = jet.f_u, jet.f_v
    _require_slopes(m, f_u=fu, f_v=fv)
    pu, pv = _pow_a(fu, k, m), _pow_a(fv, k, m)
    big_a = 1.0 + _pow_e(fu, k, m) + _pow_e(fv, k, m)
    brace = ((pv + fv * fv) * jet.f_uu - 2.0 * fu * fv * jet.f_uv
             + (pu + fu * fu) * jet.f_vv)
    return -brace * big_a ** (-(2 * m + 1) / (2 * m)) / (2.0 * k * pu * pv)


def mean_curvature_translation(gp: float, gpp: float, hp: float, hpp: float, m) -> float:
    """Mean curvature of the graph of ``g(u) + h(v)``."""
    order = as_order(m)
    m, k = order.m, order.k
    _require_slopes(m, gp=gp, hp=hp)
    pg, ph = _pow_a(gp, k, m), _pow_a(hp, k, m)
    big_a = 1.0 + _pow_e(gp, k, m) + _pow_e(hp, k, m)
    brace = (ph + hp * hp) * gpp + (pg + gp * gp) * hpp
    return -brace * big_a ** (-(2 * m + 1) / (2 * m)) / (2.0 * k * pg * ph)


def mean_curvature_homothetical(g: float, gp: float, gpp: float,
                                h: float, hp: float, hpp: float, m) -> float:
    """Mean curvature of the graph of ``g(u) * h(v)``."""
    order = as_order(m)
    m, k = order.m, order.k
    for name, val in (("g", g), ("g'", gp), ("h", h), ("h'", hp)):
        if abs(val) < SLOPE_EPS:
            raise DegenerateFactor(f"{name} = {val!r} must be nonzero")
    su, sv = gp * h, g * hp
    pu, pv = _pow_a(su, k, m), _pow_a(sv, k, m)
    big_a = 1.0 + _pow_e(su, k, m) + _pow_e(sv, k, m)
    brace = ((pv + sv * sv) * gpp * h - 2.0 * g * h * gp * gp * hp * hp
             + (pu + su * su) * g * hpp)
    return -brace * big_a ** (-(2 * m + 1) / (2 * m)) / (2.0 * k * pu * pv)


def separable_minimality_residual(fp: float, fpp: float, gp: float, gpp: float,
                                  hp: float, hpp: float, m) -> float:
    """Left side of the minimality condition for ``f(x1) + g(x2) + h(x3) = 0``."""
    order = as_order(m)
    m, k = order.m, order.k
    _require_slopes(max(m, 2), fp=fp, gp=gp, hp=hp)
    ef, eg, eh = _pow_e(fp, k, m), _pow_e(gp, k, m), _pow_e(hp, k, m)
    return ((eg + eh) * fpp / _pow_a(fp, k, m)
            + (ef + eh) * gpp / _pow_a(gp, k, m)
            + (ef + eg) * hpp / _pow_a(hp, k, m))


def mean_curvature_separable(fp: float, fpp: float, gp: float, gpp: float,
                             hp: float, hpp: float, m) -> float:
    """H of the separable surface with the Birkhoff-Gauss map oriented along
    ``+(f', g', h')``."""
    order = as_order(m)
    m, k = order.m, order.k
    residual = separable_minimality_residual(fp, fpp, gp, gpp, hp, hpp, order)
    big_a = _pow_e(fp, k, m) + _pow_e(gp, k, m) + _pow_e(hp, k, m)
    return 0.5 * residual * big_a ** (-(2 * m + 1) / (2 * m)) / k


def _eta(surface: SurfacePatch, u: float, v: float, m) -> np.ndarray:
    xu, xv = surface.tangents(u, v)
    return birkhoff_gauss_implicit(*np.cross(xu, xv), m)


def mean_curvature_numeric(surface: SurfacePatch, u: float, v: float, m,
                           step: float = DEFAULT_STEP) -> float:
    """Half the trace of d(eta), from central differences of eta.

    ``eta`` is evaluated on the 5-point stencil around ``(u, v)`` from the
    patch normal ``X_u x X_v``; ``eta_u`` and ``eta_v`` are then written in the
    basis ``{X_u, X_v}`` by least squares.  Truncation error is O(step^2).
    """
    m = as_order(m)
    xu, xv = surface.tangents(u, v)
    basis = np.column_stack([xu, xv])
    if np.linalg.cond(basis) > MAX_TANGENT_CONDITION:
        raise DegenerateTangent(f"tangent vectors nearly parallel at ({u}, {v})")
    eta_u = (_eta(surface, u + step, v, m) - _eta(surface, u - step, v, m)) / (2 * step)
    eta_v = (_eta(surface, u, v + step, m) - _eta(surface, u, v - step, m)) / (2 * step)
    coeffs, *_ = np.linalg.lstsq(basis, np.column_stack([eta_u, eta_v]), rcond=None)
    # coeffs[:, 0] expresses eta_u, coeffs[:, 1] expresses eta_v
    return 0.5 * float(coeffs[0, 0] + coeffs[1, 1])
