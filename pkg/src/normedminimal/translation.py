"""Minimal translation surfaces z = g(u) + h(v) in the 2m-norm.

With ``F_m(s) = (2m-1) * int_0^s dt / (1 + t^2m)`` the slopes are
``g' = F_m^-1(a u)^(2m-1)`` and ``h' = F_m^-1(-a v)^(2m-1)``, and the surface can
be written either over (u, v) or over the slope roots (s, t).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import numerics
from .curvature import SurfacePatch
from .errors import OutOfRange
from .lp_geometry import NormOrder, as_order

DEFAULT_CLIP = 1e-3


@dataclass(frozen=True)
class TranslationSpec:
    m: NormOrder
    a: float

    def __post_init__(self):
        object.__setattr__(self, "m", as_order(self.m))
        if not math.isfinite(self.a) or self.a == 0:
            raise ValueError("a must be finite and nonzero (a = 0 is the plane)")


def _core(t: float, m: int) -> float:
    return 1.0 / (1.0 + t ** (2 * m))


def _reflected(tau: float, m: int) -> float:
    # integrand after t = 1/tau: dt/(1+t^2m) = tau^(2m-2) dtau / (1+tau^2m)
    return tau ** (2 * m - 2) / (1.0 + tau ** (2 * m))


@lru_cache(maxsize=None)
def _unit_integral(m: int) -> float:
    return numerics.integrate(lambda t: _core(t, m), 0.0, 1.0)


def F_m(s: float, m) -> float:
    """Odd, increasing function ``(2m-1) * int_0^s dt/(1+t^2m)``.

    For ``|s| > 1`` the tail beyond 1 is integrated in the reflected variable
    ``1/t`` so every quadrature runs over a subinterval of [0, 1].
    """
    m = as_order(m).m
    s = float(s)
    mag = abs(s)
    if mag <= 1.0:
        value = numerics.integrate(lambda t: _core(t, m), 0.0, mag)
    else:
        value = _unit_integral(m) + numerics.integrate(lambda t: _reflected(t, m), 1.0 / mag, 1.0)
    return math.copysign((2 * m - 1) * value, s)


@lru_cache(maxsize=None)
def _sup(m: int) -> float:
    tail = numerics.integrate(lambda t: _reflected(t, m), 0.0, 1.0)
    return (2 * m - 1) * (_unit_integral(m) + tail)


def F_m_sup(m) -> float:
    """``lim_{s -> inf} F_m(s)``; F_m maps R onto (-sup, sup)."""
    return _sup(as_order(m).m)


def F_m_inverse(y: float, m) -> float:
    return _inverse(float(y), as_order(m).m)


@lru_cache(maxsize=1 << 16)
def _inverse(y: float, m: int) -> float:
    if abs(y) >= _sup(m):
        raise OutOfRange(f"|{y}| >= sup F_{m} = {_sup(m)}")
    if y == 0.0:
        return 0.0
    return numerics.invert_monotone(lambda s: F_m(s, m), y)


def F2_closed_form(s: float) -> float:
    """Elementary antiderivative of ``3 / (1 + s^4)`` vanishing at 0."""
    r2 = math.sqrt(2.0)
    logs = math.log(s * s + r2 * s + 1.0) - math.log(s * s - r2 * s + 1.0)
    atans = math.atan(r2 * s + 1.0) + math.atan(r2 * s - 1.0)
    return 3.0 * r2 / 8.0 * logs + 3.0 * r2 / 4.0 * atans


def _height_part(s: float, spec: TranslationSpec) -> float:
    m = spec.m.m
    return (2 * m - 1) / (2 * m * spec.a) * math.log1p(s ** (2 * m))


def translation_point_st(s: float, t: float, spec: TranslationSpec) -> np.ndarray:
    """Surface point over the slope roots ``s = g'^(1/(2m-1))``, ``t = h'^(1/(2m-1))``."""
    m = spec.m
    return np.array([
        F_m(s, m) / spec.a,
        -F_m(t, m) / spec.a,
        _height_part(s, spec) - _height_part(t, spec),
    ])


def slope_roots(u: float, v: float, spec: TranslationSpec) -> tuple[float, float]:
    """``(s, t) = (F_m^-1(a u), F_m^-1(-a v))``."""
    return F_m_inverse(spec.a * u, spec.m), F_m_inverse(-spec.a * v, spec.m)


def translation_point_uv(u: float, v: float, spec: TranslationSpec) -> np.ndarray:
    s, t = slope_roots(u, v, spec)
    return np.array([u, v, _height_part(s, spec) - _height_part(t, spec)])


def jet_from_roots(s: float, t: float, spec: TranslationSpec) -> tuple[float, float, float, float]:
    """``(g', g'', h', h'')`` at the point with slope roots ``(s, t)``.

    Obtained by the chain rule through the closed form: ``g' = s^(2m-1)`` and
    ``ds/du = a (1 + s^2m) / (2m-1)``.
    """
    m = spec.m.m
    a = spec.a
    gp = s ** (2 * m - 1)
    gpp = a * (s ** (2 * m - 2) + s ** (4 * m - 2))
    hp = t ** (2 * m - 1)
    hpp = -a * (t ** (2 * m - 2) + t ** (4 * m - 2))
    return gp, gpp, hp, hpp


def strip_halfwidth(spec: TranslationSpec, fraction: float = 1.0 - DEFAULT_CLIP) -> float:
    """Half-width of the square ``|u|, |v| <= fraction * sup F_m / |a|``."""
    return fraction * F_m_sup(spec.m) / abs(spec.a)


def translation_patch(spec: TranslationSpec) -> SurfacePatch:
    def tangents(u, v):
        s, t = slope_roots(u, v, spec)
        m = spec.m.m
        return (np.array([1.0, 0.0, s ** (2 * m - 1)]),
                np.array([0.0, 1.0, t ** (2 * m - 1)]))

    return SurfacePatch(point=lambda u, v: translation_point_uv(u, v, spec), tangents=tangents)
