"""Scalar quadrature and inversion of strictly monotone functions.

Every integral and every inverse function used by the surface generators goes
through :func:`integrate` and :func:`invert_monotone`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from scipy.integrate import quad

from .errors import NonConvergence, NonFinite, OutOfRange

ScalarFn = Callable[[float], float]

# QUADPACK ier codes that mean "no usable answer"; 2 and 4 only report a
# roundoff floor and still carry the best attainable estimate.
_FATAL_IER = {1: "subdivision limit reached", 3: "integrand too irregular",
              5: "integral divergent or too slowly convergent", 6: "invalid input"}


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not self.abs_tol > 0 or not self.rel_tol > 0:
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


@dataclass(frozen=True)
class InversionConfig:
    tol: float = 1e-13
    max_iterations: int = 200
    bracket_growth: float = 2.0

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not self.bracket_growth > 1:
            raise ValueError("bracket_growth must exceed 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


DEFAULT_QUADRATURE = QuadratureConfig()
DEFAULT_INVERSION = InversionConfig()


def _graded_breakpoints(a: float, b: float) -> list[float]:
    """Breakpoints graded geometrically (unit scale) toward both ends of [a, b].

    Intervals no longer than 2 are returned unsplit.  Longer ones get nodes at
    a + 2**k and b - 2**k so that features of unit size sitting next to either
    endpoint are never stepped over by the first Kronrod sample.
    """
    length = b - a
    if length <= 2.0:
        return [a, b]
    pts = {a, b}
    k = 0
    while 2.0 ** k < length / 2:
        pts.add(a + 2.0 ** k)
        pts.add(b - 2.0 ** k)
        k += 1
    return sorted(pts)


def integrate_with_error(f: ScalarFn, lower: float, upper: float,
                         cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> tuple[float, float]:
    """Integrate ``f`` over a finite interval; return ``(value, error_estimate)``.

    The base rule is the 21-point Gauss-Kronrod pair with Wynn extrapolation
    (QUADPACK QAGS).  No node sits on an endpoint, so integrable power-type
    endpoint singularities need no special treatment.
    """
    lower = float(lower)
    upper = float(upper)
    if not (math.isfinite(lower) and math.isfinite(upper)):
        raise ValueError("integration limits must be finite")
    if lower == upper:
        return 0.0, 0.0
    if lower > upper:
        value, err = integrate_with_error(f, upper, lower, cfg)
        return -value, err

    breaks = _graded_breakpoints(lower, upper)
    npieces = len(breaks) - 1
    total = 0.0
    total_err = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):

        def guarded(x, lo=lo, hi=hi):
            y = f(x)
            if not math.isfinite(y):
                # node rounded onto an endpoint of a singular integrand
                if x <= lower or x >= upper:
                    return 0.0
                raise NonFinite(f"integrand is {y} at interior point x={x!r}")
            return y

        value, err, info, *rest = quad(guarded, lo, hi, epsabs=cfg.abs_tol / npieces,
                                       epsrel=cfg.rel_tol, limit=cfg.max_subdivisions,
                                       full_output=1)
        ier = 0 if not rest else _ier_from_message(rest[0])
        if ier in _FATAL_IER:
            raise NonConvergence(f"quadrature on [{lo}, {hi}] failed: {_FATAL_IER[ier]}")
        total += value
        total_err += err
    return total, total_err


def _ier_from_message(msg: str) -> int:
    # scipy only hands back the text of QUADPACK's diagnostic
    text = msg.lower()
    if "maximum number of subdivisions" in text:
        return 1
    if "roundoff error" in text and "extrapolation" in text:
        return 4
    if "roundoff error" in text:
        return 2
    if "extremely bad integrand" in text:
        return 3
    if "divergent" in text:
        return 5
    if "input is invalid" in text:
        return 6
    return 0


def integrate(f: ScalarFn, lower: float, upper: float,
              cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    return integrate_with_error(f, lower, upper, cfg)[0]


def invert_monotone(f: ScalarFn, y: float, seed_bracket: tuple[float, float] = (-1.0, 1.0),
                    cfg: InversionConfig = DEFAULT_INVERSION) -> float:
    """Solve ``f(x) = y`` for strictly increasing ``f``.

    The seed bracket is widened geometrically until it straddles ``y``; the
    root is then refined by Illinois-modified secant steps with a bisection
    fallback.  Stops once ``|f(x) - y| <= tol * (1 + |y|)``.
    """
    y = float(y)
    target_tol = cfg.tol * (1.0 + abs(y))
    lo, hi = map(float, seed_bracket)
    if not lo < hi:
        raise ValueError("seed bracket must satisfy lo < hi")

    flo = f(lo) - y
    fhi = f(hi) - y
    step = hi - lo
    for _ in range(cfg.max_iterations):
        if flo <= 0.0 <= fhi:
            break
        step *= cfg.bracket_growth
        if flo > 0.0:
            new = lo - step
            fnew = f(new) - y
            if fnew >= flo:
                raise OutOfRange(f"{y!r} lies below the range of the function")
            hi, fhi, lo, flo = lo, flo, new, fnew
        else:
            new = hi + step
            fnew = f(new) - y
            if fnew <= fhi:
                raise OutOfRange(f"{y!r} lies above the range of the function")
            lo, flo, hi, fhi = hi, fhi, new, fnew
        if not math.isfinite(lo) or not math.isfinite(hi):
            raise OutOfRange(f"{y!r} not bracketed before the bracket overflowed")
    else:
        raise OutOfRange(f"{y!r} not bracketed after {cfg.max_iterations} expansions")

    if abs(flo) <= target_tol or abs(fhi) <= target_tol:
        return lo if abs(flo) <= abs(fhi) else hi

    side = 0
    for _ in range(cfg.max_iterations):
        if fhi != flo:
            x = hi - fhi * (hi - lo) / (fhi - flo)
        else:
            x = 0.5 * (lo + hi)
        if not lo < x < hi:
            x = 0.5 * (lo + hi)
        fx = f(x) - y
        if abs(fx) <= target_tol:
            return x
        if fx < 0.0:
            lo, flo = x, fx
            if side == -1:
                fhi *= 0.5
            side = -1
        else:
            hi, fhi = x, fx
            if side == 1:
                flo *= 0.5
            side = 1
        if hi - lo <= 4.0 * math.ulp(max(abs(lo), abs(hi))):
            break
    # bracket at floating-point resolution: accept only if the residual is met
    for x in (lo, hi):
        if abs(f(x) - y) <= target_tol:
            return x
    raise NonConvergence(f"inversion for y={y!r} did not reach tolerance {target_tol:g}")
