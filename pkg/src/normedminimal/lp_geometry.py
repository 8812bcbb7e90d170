"""The 2m-norm on R^3, its gauge function and the Birkhoff-Gauss map.

Fractional powers whose exponent has the odd denominator ``2m - 1`` are always
taken as real, sign-preserving roots (:func:`odd_root`), so negative slopes
are admissible everywhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGradient


@dataclass(frozen=True)
class NormOrder:
    """Integer ``m`` of the norm ``||x|| = (x1^2m + x2^2m + x3^2m)^(1/2m)``.

    ``m = 1`` is the Euclidean norm and is kept as a regression case.
    """
    m: int

    def __post_init__(self):
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 1:
            raise ValueError(f"norm order must be a positive integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))

    @property
    def k(self) -> int:
        """The odd root degree 2m - 1."""
        return 2 * self.m - 1


@dataclass(frozen=True)
class GraphJet2:
    """First and second partials of a height function f(u, v) at one point."""
    f_u: float
    f_v: float
    f_uu: float = 0.0
    f_uv: float = 0.0
    f_vv: float = 0.0

    def __post_init__(self):
        for name in ("f_u", "f_v", "f_uu", "f_uv", "f_vv"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


def as_order(m) -> NormOrder:
    return m if isinstance(m, NormOrder) else NormOrder(m)


def odd_root(x, k: int):
    """Real k-th root for odd ``k``: ``sign(x) * |x|**(1/k)``. Works on arrays."""
    if k < 1 or k % 2 == 0:
        raise ValueError(f"odd_root needs a positive odd degree, got {k}")
    if k == 1:
        return x
    if np.ndim(x) == 0:
        x = float(x)
        return math.copysign(abs(x) ** (1.0 / k), x) if x != 0.0 else 0.0
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.abs(x) ** (1.0 / k)


def even_power(x, m):
    """``x ** (2m / (2m-1))`` with odd-root semantics; never negative."""
    m = as_order(m)
    return odd_root(x, m.k) ** (2 * m.m)


def phi(x, m) -> float:
    m = as_order(m).m
    x = np.asarray(x, dtype=float)
    return float(np.sum(x ** (2 * m)))


def norm_2m(x, m) -> float:
    m = as_order(m)
    x = np.asarray(x, dtype=float)
    scale = float(np.max(np.abs(x)))
    if scale == 0.0:
        return 0.0
    # factor out the largest entry so x^(2m) cannot overflow or underflow
    return scale * phi(x / scale, m) ** (1.0 / (2 * m.m))


def grad_phi(x, m) -> np.ndarray:
    m = as_order(m).m
    x = np.asarray(x, dtype=float)
    return 2 * m * x ** (2 * m - 1)


def birkhoff_gauss_implicit(fp: float, gp: float, hp: float, m) -> np.ndarray:
    """Unit vector (in the 2m-norm) whose gauge gradient is a positive
    multiple of ``(fp, gp, hp)``."""
    m = as_order(m)
    if fp == 0 and gp == 0 and hp == 0:
        raise DegenerateGradient("gradient (f', g', h') vanishes")
    direction = np.array([fp, gp, hp], dtype=float)
    # the result is invariant under positive rescaling; normalise first for range
    direction /= np.max(np.abs(direction))
    roots = odd_root(direction, m.k)
    big_a = float(np.sum(roots ** (2 * m.m)))
    return roots / big_a ** (1.0 / (2 * m.m))


def birkhoff_gauss_graph(jet: GraphJet2, m) -> np.ndarray:
    """Birkhoff-Gauss map of the graph ``(u, v, f(u, v))``; third entry positive.

    Equals ``A^(-1/2m) * (-f_u^(1/(2m-1)), -f_v^(1/(2m-1)), 1)`` with
    ``A = 1 + f_u^(2m/(2m-1)) + f_v^(2m/(2m-1))``.  Only the slopes of the
    jet are used.
    """
    m = as_order(m)
    su = odd_root(jet.f_u, m.k)
    sv = odd_root(jet.f_v, m.k)
    big_a = 1.0 + su ** (2 * m.m) + sv ** (2 * m.m)
    return big_a ** (-1.0 / (2 * m.m)) * np.array([-su, -sv, 1.0])
