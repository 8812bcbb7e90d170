"""Separable minimal surfaces f(x1) + g(x2) + h(x3) = 0 in the 2m-norm.

In the variables u = f(x1), v = g(x2), w = h(x3) the slope powers
X = f'^(2m/(2m-1)), Y, Z satisfy

    B(u, v, w) = (Y + Z) X' + (Z + X) Y' + (X + Y) Z' = 0   on u + v + w = 0,

and each of X, Y, Z is ``p + q e^(bx) + r e^(-bx)``, ``p + q cos(bx) + r sin(bx)``
or ``p + q x + r x^2``.  This module checks and solves the coefficient
conditions, samples the region where X, Y, Z > 0, and integrates
``x1 = +/- int X^(-(2m-1)/(2m)) du`` (and likewise x2, x3) back to a surface.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import numerics
from .curvature import SurfacePatch, mean_curvature_separable, separable_minimality_residual
from .errors import DegenerateSlope, DomainViolation, InfeasibleModuli
from .lp_geometry import as_order

CASES = ("exp", "trig", "poly")
AXES = ("X", "Y", "Z")
POSITIVITY_MARGIN = 1e-9
SLOPE_EPS = 1e-10
_PATH_SAMPLES = 65


@dataclass(frozen=True)
class CoefficientSet:
    case: str
    p: tuple
    q: tuple
    r: tuple
    b: float | None = None

    def __post_init__(self):
        if self.case not in CASES:
            raise ValueError(f"case must be one of {CASES}, got {self.case!r}")
        for name in ("p", "q", "r"):
            vals = tuple(float(x) for x in getattr(self, name))
            if len(vals) != 3 or not all(math.isfinite(x) for x in vals):
                raise ValueError(f"{name} needs exactly 3 finite numbers")
            object.__setattr__(self, name, vals)
        if self.case == "poly":
            object.__setattr__(self, "b", None)
        else:
            if self.b is None or not float(self.b) > 0 or not math.isfinite(self.b):
                raise ValueError(f"case {self.case!r} needs b > 0")
            object.__setattr__(self, "b", float(self.b))

    @property
    def a(self) -> float:
        """The common ratio X'''/X' of the family."""
        if self.case == "poly":
            return 0.0
        return self.b ** 2 if self.case == "exp" else -self.b ** 2

    def perturbed(self, field: str, index: int, delta: float) -> "CoefficientSet":
        vals = list(getattr(self, field))
        vals[index] += delta
        return CoefficientSet(**{**self.as_dict(), field: tuple(vals)})

    def as_dict(self) -> dict:
        return {"case": self.case, "b": self.b, "p": list(self.p), "q": list(self.q),
                "r": list(self.r)}


@dataclass(frozen=True)
class Profile:
    """One of X, Y, Z: ``p + q e1(bx) + r e2(bx)`` for the family's basis."""
    case: str
    p: float
    q: float
    r: float
    b: float = 1.0

    def __call__(self, x, order: int = 0):
        """Value (order 0) or derivative of order 1..3; accepts arrays."""
        x = np.asarray(x, dtype=float)
        p, q, r, b = self.p, self.q, self.r, self.b
        if self.case == "exp":
            if order == 0:
                # offset form keeps zeros of p+q+r accurate near x = 0
                out = (p + q + r) + q * np.expm1(b * x) + r * np.expm1(-b * x)
            else:
                out = q * b ** order * np.exp(b * x) + r * (-b) ** order * np.exp(-b * x)
        elif self.case == "trig":
            c, s = np.cos(b * x), np.sin(b * x)
            if order == 0:
                out = (p + q) - 2.0 * q * np.sin(0.5 * b * x) ** 2 + r * s
            elif order == 1:
                out = b * (r * c - q * s)
            elif order == 2:
                out = -b * b * (q * c + r * s)
            elif order == 3:
                out = b ** 3 * (q * s - r * c)
            else:
                raise ValueError("derivative order must be 0..3")
        else:
            if order == 0:
                out = p + x * (q + r * x)
            elif order == 1:
                out = q + 2.0 * r * x
            elif order == 2:
                out = 2.0 * r + 0.0 * x
            elif order == 3:
                out = 0.0 * x
            else:
                raise ValueError("derivative order must be 0..3")
        if order > 3:
            raise ValueError("derivative order must be 0..3")
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class XYZTriple:
    X: Profile
    Y: Profile
    Z: Profile

    def __iter__(self):
        return iter((self.X, self.Y, self.Z))

    def __getitem__(self, which):
        if isinstance(which, str):
            which = AXES.index(which)
        return (self.X, self.Y, self.Z)[which]


def build_xyz(c: CoefficientSet) -> XYZTriple:
    b = 1.0 if c.b is None else c.b
    return XYZTriple(*(Profile(c.case, c.p[i], c.q[i], c.r[i], b) for i in range(3)))


def check_constraints(c: CoefficientSet) -> np.ndarray:
    """The six coefficient equations of the family; all zero iff B vanishes
    identically on the plane u + v + w = 0."""
    p1, p2, p3 = c.p
    q1, q2, q3 = c.q
    r1, r2, r3 = c.r
    if c.case == "exp":
        res = [(p2 + p3) * r1 - 2 * q2 * q3,
               (p1 + p3) * r2 - 2 * q1 * q3,
               (p2 + p3) * q1 - 2 * r2 * r3,
               (p1 + p3) * q2 - 2 * r1 * r3,
               (p1 + p2) * q3 - 2 * r1 * r2,
               (p1 + p2) * r3 - 2 * q1 * q2]
    elif c.case == "trig":
        res = [(p2 + p3) * q1 - q2 * q3 + r2 * r3,
               (p2 + p3) * r1 + q2 * r3 + q3 * r2,
               (p1 + p3) * q2 - q1 * q3 + r1 * r3,
               (p1 + p3) * r2 + q1 * r3 + q3 * r1,
               (p1 + p2) * q3 - q1 * q2 + r1 * r2,
               (p1 + p2) * r3 + q1 * r2 + q2 * r1]
    else:
        res = [(p2 + p3) * q1 + (p1 + p3) * q2 + (p1 + p2) * q3,
               2 * (p2 + p3) * r1 - 2 * (p1 + p2) * r3 + q2 * (q1 - q3),
               2 * (p1 + p3) * r2 - 2 * (p1 + p2) * r3 + q1 * (q2 - q3),
               (q2 - q3) * r1 - (q1 - q2) * r3,
               (q1 - q3) * r2 + (q1 - q2) * r3,
               r1 * r2 + r1 * r3 + r2 * r3]
    return np.array(res, dtype=float)


def b_residual(u, v, t: XYZTriple):
    """``B(u, v, -u-v)``; vectorized over u and v."""
    w = -np.asarray(u, dtype=float) - np.asarray(v, dtype=float)
    X, Y, Z = t.X(u), t.Y(v), t.Z(w)
    return (Y + Z) * t.X(u, 1) + (Z + X) * t.Y(v, 1) + (X + Y) * t.Z(w, 1)


def third_derivative_ratio(t: XYZTriple, which, point: float) -> float:
    prof = t[which]
    d1 = prof(point, 1)
    if abs(d1) < SLOPE_EPS:
        raise DegenerateSlope(f"{which}'({point}) vanishes")
    return prof(point, 3) / d1


class TrigSolution(NamedTuple):
    coefficients: CoefficientSet
    positivity: tuple  # p_i + |s_i| > 0, a necessary condition per axis


def solve_trig_coeffs(p: Sequence[float], phase2: float, phase3: float,
                      b: float = 1.0) -> TrigSolution:
    """Solve the trigonometric system for q, r given p and two phases.

    With ``s_i = q_i + i r_i`` the system reads ``(p2+p3) s1 = conj(s2 s3)``
    and cyclic; hence ``|s2|^2 = (p1+p2)(p2+p3)``, ``|s3|^2 = (p1+p3)(p2+p3)``
    and ``s1 = conj(s2 s3) / (p2+p3)``.
    """
    p1, p2, p3 = (float(x) for x in p)
    if p2 + p3 == 0:
        raise InfeasibleModuli("p2 + p3 = 0")
    mod2_sq = (p1 + p2) * (p2 + p3)
    mod3_sq = (p1 + p3) * (p2 + p3)
    if mod2_sq < 0 or mod3_sq < 0:
        raise InfeasibleModuli(f"|s2|^2 = {mod2_sq}, |s3|^2 = {mod3_sq}; both must be >= 0")
    s2 = cmath.rect(math.sqrt(mod2_sq), phase2)
    s3 = cmath.rect(math.sqrt(mod3_sq), phase3)
    s1 = (s2 * s3).conjugate() / (p2 + p3)
    s = (s1, s2, s3)
    coeffs = CoefficientSet("trig", (p1, p2, p3), tuple(z.real for z in s),
                            tuple(z.imag for z in s), b)
    positivity = tuple(pi + abs(si) > 0 for pi, si in zip((p1, p2, p3), s))
    return TrigSolution(coeffs, positivity)


def positivity_mask(t: XYZTriple, U, V, margin: float = POSITIVITY_MARGIN):
    U = np.asarray(U, dtype=float)
    V = np.asarray(V, dtype=float)
    return (t.X(U) > margin) & (t.Y(V) > margin) & (t.Z(-U - V) > margin)


def positivity_domain(t: XYZTriple, u_window, v_window, grid: int,
                      margin: float = POSITIVITY_MARGIN) -> np.ndarray:
    """Grid points ``(u, v)`` with X(u), Y(v), Z(-u-v) all above ``margin``.

    Returns an array of shape (k, 2); k = 0 is a legal answer.
    """
    if grid < 2:
        raise ValueError("grid must be >= 2")
    us = np.linspace(*u_window, grid)
    vs = np.linspace(*v_window, grid)
    U, V = np.meshgrid(us, vs, indexing="ij")
    mask = positivity_mask(t, U, V, margin)
    return np.column_stack([U[mask], V[mask]])


def default_anchor(t: XYZTriple, u_window, v_window, grid: int = 101) -> tuple[float, float]:
    """Centroid of the sampled positivity domain, snapped to the nearest
    domain sample when the domain is not convex."""
    pts = positivity_domain(t, u_window, v_window, grid)
    if len(pts) == 0:
        raise DomainViolation("positivity domain empty")
    centre = pts.mean(axis=0)
    if positivity_mask(t, centre[0], centre[1]):
        return float(centre[0]), float(centre[1])
    nearest = pts[np.argmin(np.sum((pts - centre) ** 2, axis=1))]
    return float(nearest[0]), float(nearest[1])


def _exponent(m) -> float:
    m = as_order(m).m
    return (2 * m - 1) / (2 * m)


def _leg(prof: Profile, start: float, end: float, expo: float, label: str) -> float:
    """``int_start^end prof^(-expo)``; the profile must stay positive inside."""
    if start == end:
        return 0.0
    if prof(start) < 0 or prof(end) < 0:
        raise DomainViolation(f"{label} negative at an end of [{start}, {end}]")
    probe = prof(np.linspace(start, end, _PATH_SAMPLES)[1:-1])
    if np.any(probe <= 0):
        raise DomainViolation(f"{label} not positive along [{start}, {end}]")

    def integrand(x):
        val = prof(x)
        if val <= 0:
            raise DomainViolation(f"{label}({x}) = {val} on the integration path")
        return val ** -expo

    return numerics.integrate(integrand, start, end)


def reconstruct_point(u: float, v: float, t: XYZTriple, m, anchor: tuple[float, float],
                      signs: Sequence[int] = (1, 1, 1)) -> np.ndarray:
    """Embedded point ``(x1, x2, x3)`` over ``(u, v)``; the anchor maps to the origin."""
    expo = _exponent(m)
    u0, v0 = anchor
    return np.array([
        signs[0] * _leg(t.X, u0, u, expo, "X"),
        signs[1] * _leg(t.Y, v0, v, expo, "Y"),
        signs[2] * _leg(t.Z, -u0 - v0, -u - v, expo, "Z"),
    ])


def cumulative_primitive(prof: Profile, origin: float, nodes, m, label: str = "profile") -> np.ndarray:
    """``int_origin^x prof^(-(2m-1)/(2m))`` at every node, reusing the
    integrals between consecutive nodes.  Nodes that cannot be reached from
    ``origin`` without leaving the positivity region come back as NaN."""
    expo = _exponent(m)
    nodes = np.asarray(nodes, dtype=float)
    out = np.full(nodes.shape, np.nan)
    uniq = np.unique(nodes)
    values = {}
    for direction in (1, -1):
        chain = uniq[uniq >= origin] if direction == 1 else uniq[uniq < origin][::-1]
        acc, prev = 0.0, origin
        for x in chain:
            if prof(x) <= POSITIVITY_MARGIN:
                break
            try:
                acc += _leg(prof, prev, x, expo, label)
            except DomainViolation:
                break
            values[x] = acc
            prev = x
    for x, val in values.items():
        out[nodes == x] = val
    return out


def separable_jets(u: float, v: float, t: XYZTriple, m, signs: Sequence[int] = (1, 1, 1)):
    """``(f', f'', g', g'', h', h'')`` of the reconstructed surface."""
    expo = _exponent(m)
    out = []
    for prof, x, sign in zip(t, (u, v, -u - v), signs):
        val = prof(x)
        if val <= 0:
            raise DomainViolation(f"profile value {val} <= 0 at {x}")
        out.append(sign * val ** expo)
        out.append(expo * prof(x, 1) * val ** (2 * expo - 1))
    return tuple(out)


def analytic_residual(u: float, v: float, t: XYZTriple, m, signs=(1, 1, 1)) -> float:
    return separable_minimality_residual(*separable_jets(u, v, t, m, signs), m)


def analytic_H(u: float, v: float, t: XYZTriple, m, signs=(1, 1, 1)) -> float:
    return mean_curvature_separable(*separable_jets(u, v, t, m, signs), m)


def separable_patch(t: XYZTriple, m, anchor, signs: Sequence[int] = (1, 1, 1)) -> SurfacePatch:
    """Patch over (u, v).  Its orientation ``X_u x X_v`` is
    ``sign1*sign2*sign3`` times the direction of ``(f', g', h')``."""
    expo = _exponent(m)

    def tangents(u, v):
        vals = (t.X(u), t.Y(v), t.Z(-u - v))
        if min(vals) <= 0:
            raise DomainViolation(f"({u}, {v}) lies outside the positivity domain")
        dx1, dx2, dx3 = (sign * val ** -expo for sign, val in zip(signs, vals))
        return np.array([dx1, 0.0, -dx3]), np.array([0.0, dx2, -dx3])

    return SurfacePatch(point=lambda u, v: reconstruct_point(u, v, t, m, anchor, signs),
                        tangents=tangents)


# Coefficient sets of the four worked examples.
PRESETS = {
    "example6.1": CoefficientSet("poly", (-1, -1, 2), (0, 0, 0), (1, 1, -0.5)),
    "example6.2": CoefficientSet("exp", (1, 1, -1), (0, 0, 1), (1, 1, 0), b=1.0),
    "example6.3": CoefficientSet("trig", (1, 1, -0.5), (0, 0, 0.5), (1, -1, 0), b=1.0),
    "example6.4": CoefficientSet("trig", (1, 1, 1), (0, math.sqrt(2), math.sqrt(2)),
                                 (-2, math.sqrt(2), math.sqrt(2)), b=1.0),
}

# (u_window, v_window) that contain a non-empty part of each example's domain
PRESET_WINDOWS = {
    "example6.1": ((1.0, 3.0), (-3.0, -1.0)),
    "example6.2": ((-2.0, 0.0), (-2.0, 0.0)),
    "example6.3": ((-math.pi, math.pi), (-math.pi, math.pi)),
    "example6.4": ((-1.0, 0.4), (-0.5, 1.0)),
}
