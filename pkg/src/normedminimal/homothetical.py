"""Minimal homothetical surfaces z = (a u + b) * h(v) in the 2m-norm.

The nonlinear factor solves ``dh/dv = c2 * G(h)^((2m-1)/m)`` with
``G(h) = a^((2m-2)/(2m-1)) + a^2 h^(2m/(2m-1))``; its inverse is
``Psi(h) = (1/c2) int_0^h G^(-(2m-1)/m)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import numerics
from .curvature import SurfacePatch, mean_curvature_homothetical
from .errors import OutOfRange
from .lp_geometry import NormOrder, as_order, odd_root

DEFAULT_CLIP = 1e-3
DEFAULT_EXCLUSION = 0.1


@dataclass(frozen=True)
class HomotheticalSpec:
    """Parameters of the family. ``swapped`` puts the linear factor on v."""
    m: NormOrder
    a: float
    b: float = 0.0
    c2: float = 1.0
    swapped: bool = False

    def __post_init__(self):
        object.__setattr__(self, "m", as_order(self.m))
        if not math.isfinite(self.a) or self.a == 0:
            raise ValueError("a must be finite and nonzero")
        if not math.isfinite(self.c2) or self.c2 == 0:
            raise ValueError("c2 must be finite and nonzero")
        if not math.isfinite(self.b):
            raise ValueError("b must be finite")


def _base(m: int, a: float) -> float:
    # a^((2m-2)/(2m-1)), nonnegative
    return odd_root(a, 2 * m - 1) ** (2 * m - 2)


def _G(h: float, m: int, a: float) -> float:
    return _base(m, a) + a * a * odd_root(h, 2 * m - 1) ** (2 * m)


def _integrand(tau: float, m: int, a: float) -> float:
    return _G(tau, m, a) ** (-(2 * m - 1) / m)


def _reflected(sigma: float, m: int, a: float) -> float:
    # integrand(1/sigma) / sigma^2, rewritten so sigma -> 0 stays finite
    return (_base(m, a) * sigma ** (2 * m / (2 * m - 1)) + a * a) ** (-(2 * m - 1) / m)


@lru_cache(maxsize=None)
def _unit_integral(m: int, a: float) -> float:
    return numerics.integrate(lambda t: _integrand(t, m, a), 0.0, 1.0)


@lru_cache(maxsize=None)
def _half_range(m: int, a: float) -> float:
    tail = numerics.integrate(lambda s: _reflected(s, m, a), 0.0, 1.0)
    return _unit_integral(m, a) + tail


def psi(h: float, spec: HomotheticalSpec) -> float:
    m, a = spec.m.m, spec.a
    h = float(h)
    mag = abs(h)
    if mag <= 1.0:
        value = numerics.integrate(lambda t: _integrand(t, m, a), 0.0, mag)
    else:
        value = _unit_integral(m, a) + numerics.integrate(
            lambda s: _reflected(s, m, a), 1.0 / mag, 1.0)
    return math.copysign(value, h) / spec.c2


def psi_range(spec: HomotheticalSpec) -> float:
    """Psi maps R onto the open interval (-R, R); returns R."""
    return _half_range(spec.m.m, spec.a) / abs(spec.c2)


def psi_inverse(v: float, spec: HomotheticalSpec) -> float:
    return _psi_inverse(float(v), spec)


@lru_cache(maxsize=1 << 16)
def _psi_inverse(v: float, spec: HomotheticalSpec) -> float:
    if abs(v) >= psi_range(spec):
        raise OutOfRange(f"|{v}| >= range of Psi ({psi_range(spec)})")
    if v == 0.0:
        return 0.0
    sign = 1.0 if spec.c2 > 0 else -1.0
    return numerics.invert_monotone(lambda h: sign * psi(h, spec), sign * v)


def factor_derivatives(h: float, spec: HomotheticalSpec) -> tuple[float, float]:
    """``(h', h'')`` along the solution, as functions of the value h."""
    m, a = spec.m.m, spec.a
    g = _G(h, m, a)
    hp = spec.c2 * g ** ((2 * m - 1) / m)
    hpp = 2.0 * a * a * spec.c2 * odd_root(h, 2 * m - 1) * g ** ((m - 1) / m) * hp
    return hp, hpp


def homothetical_point(u: float, v: float, spec: HomotheticalSpec) -> np.ndarray:
    if spec.swapped:
        return np.array([u, v, psi_inverse(u, spec) * (spec.a * v + spec.b)])
    return np.array([u, v, (spec.a * u + spec.b) * psi_inverse(v, spec)])


def homothetical_point_uh(u: float, h: float, spec: HomotheticalSpec) -> np.ndarray:
    """The same surface parametrized by the factor value h instead of v."""
    if spec.swapped:
        return np.array([psi(h, spec), u, h * (spec.a * u + spec.b)])
    return np.array([u, psi(h, spec), (spec.a * u + spec.b) * h])


def graph_factors(u: float, v: float, spec: HomotheticalSpec):
    """``(g, g', g'', h, h', h'')`` with the surface height equal to g(u) * h(v)."""
    linear_arg, curved_arg = (v, u) if spec.swapped else (u, v)
    lin = (spec.a * linear_arg + spec.b, spec.a, 0.0)
    val = psi_inverse(curved_arg, spec)
    curved = (val, *factor_derivatives(val, spec))
    return (*curved, *lin) if spec.swapped else (*lin, *curved)


def analytic_H(u: float, v: float, spec: HomotheticalSpec) -> float:
    return mean_curvature_homothetical(*graph_factors(u, v, spec), spec.m)


def homothetical_patch(spec: HomotheticalSpec) -> SurfacePatch:
    def tangents(u, v):
        g, gp, _, h, hp, _ = graph_factors(u, v, spec)
        return np.array([1.0, 0.0, gp * h]), np.array([0.0, 1.0, g * hp])

    return SurfacePatch(point=lambda u, v: homothetical_point(u, v, spec), tangents=tangents)
