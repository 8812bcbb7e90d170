"""Grid generators: sample a surface family, evaluate H, build mesh + report."""
from __future__ import annotations

import time
from typing import Optional, Sequence

import numpy as np

from . import homothetical as homo
from . import separable as sep
from . import translation as trans
from .curvature import DEFAULT_STEP, mean_curvature_numeric, mean_curvature_translation
from .errors import DegenerateFactor, DegenerateSlope, SurfaceError
from .mesh import SurfaceMesh, grid_mesh


class EmptyDomain(SurfaceError):
    pass


def _report(family, m, params, mesh: Optional[SurfaceMesh], grid, started, residuals=None,
            domain_nonempty=True) -> dict:
    return {
        "family": family,
        "m": m,
        "params": params,
        "grid": list(grid),
        "max_abs_H_analytic": None if mesh is None else mesh.max_abs(mesh.H_analytic),
        "max_abs_H_numeric": None if mesh is None else mesh.max_abs(mesh.H_numeric),
        "constraint_residuals": None if residuals is None else [float(x) for x in residuals],
        "skipped_vertices": 0 if mesh is None else mesh.skipped,
        "domain_nonempty": bool(domain_nonempty),
        "wall_ms": round((time.perf_counter() - started) * 1000.0, 3),
    }


def _numeric_grid(patch, U, V, mask, m, step):
    out = np.full(U.shape, np.nan)
    for idx in zip(*np.nonzero(mask)):
        try:
            out[idx] = mean_curvature_numeric(patch, U[idx], V[idx], m, step)
        except SurfaceError:
            pass
    return out


def generate_translation(spec: trans.TranslationSpec, grid: int,
                         fraction: float = 1.0 - trans.DEFAULT_CLIP, oracle: bool = False,
                         step: float = DEFAULT_STEP):
    started = time.perf_counter()
    half = trans.strip_halfwidth(spec, fraction)
    us = np.linspace(-half, half, grid)
    roots_u = np.array([trans.F_m_inverse(spec.a * u, spec.m) for u in us])
    roots_v = np.array([trans.F_m_inverse(-spec.a * v, spec.m) for v in us])
    g_part = np.array([trans._height_part(s, spec) for s in roots_u])
    h_part = -np.array([trans._height_part(t, spec) for t in roots_v])
    U, V = np.meshgrid(us, us, indexing="ij")
    points = np.stack([U, V, g_part[:, None] + h_part[None, :]], axis=-1)
    H = np.full(U.shape, np.nan)
    for i, s in enumerate(roots_u):
        for j, t in enumerate(roots_v):
            try:
                H[i, j] = mean_curvature_translation(*trans.jet_from_roots(s, t, spec), spec.m)
            except DegenerateSlope:
                pass
    mask = np.ones(U.shape, dtype=bool)
    H_num = _numeric_grid(trans.translation_patch(spec), U, V, mask, spec.m, step) if oracle else None
    mesh = grid_mesh(points, mask, U, V, H, H_num)
    params = {"a": spec.a, "fraction": fraction}
    return mesh, _report("translation", spec.m.m, params, mesh, (grid, grid), started)


def generate_homothetical(spec: homo.HomotheticalSpec, grid: int,
                          window: Sequence[float] = (-1.0, 1.0),
                          fraction: float = 1.0 - homo.DEFAULT_CLIP,
                          exclusion: float = homo.DEFAULT_EXCLUSION,
                          oracle: bool = False, step: float = DEFAULT_STEP):
    """Grid over ``window`` for the linear-factor parameter and over
    ``fraction`` of the range of Psi for the other one.  Vertices where the
    linear factor or Psi^-1 is within ``exclusion`` of zero are skipped."""
    started = time.perf_counter()
    half = fraction * homo.psi_range(spec)
    lin = np.linspace(window[0], window[1], grid)
    cur = np.linspace(-half, half, grid)
    us, vs = (cur, lin) if spec.swapped else (lin, cur)
    U, V = np.meshgrid(us, vs, indexing="ij")
    factor = np.array([homo.psi_inverse(x, spec) for x in cur])
    derivs = [homo.factor_derivatives(h, spec) for h in factor]
    linear = spec.a * lin + spec.b
    if spec.swapped:
        Z = factor[:, None] * linear[None, :]
    else:
        Z = linear[:, None] * factor[None, :]
    points = np.stack([U, V, Z], axis=-1)
    H = np.full(U.shape, np.nan)
    for i in range(grid):
        for j in range(grid):
            li, ci = (j, i) if spec.swapped else (i, j)
            g, h = linear[li], factor[ci]
            if abs(g) <= exclusion or abs(h) <= exclusion:
                continue
            hp, hpp = derivs[ci]
            gfac = (g, spec.a, 0.0)
            hfac = (h, hp, hpp)
            args = (*hfac, *gfac) if spec.swapped else (*gfac, *hfac)
            try:
                H[i, j] = homo.mean_curvature_homothetical(*args, spec.m)
            except DegenerateFactor:
                pass
    mask = np.ones(U.shape, dtype=bool)
    H_num = (_numeric_grid(homo.homothetical_patch(spec), U, V, ~np.isnan(H), spec.m, step)
             if oracle else None)
    mesh = grid_mesh(points, mask, U, V, H, H_num)
    params = {"a": spec.a, "b": spec.b, "c2": spec.c2, "swapped": spec.swapped,
              "window": list(window), "fraction": fraction, "exclusion": exclusion}
    return mesh, _report("homothetical", spec.m.m, params, mesh, (grid, grid), started)


def generate_separable(coeffs: sep.CoefficientSet, m: int, grid: int, u_window, v_window,
                       anchor=None, signs=(1, 1, 1), clip: float = 1e-3,
                       oracle: bool = False, step: float = DEFAULT_STEP):
    """Raises :class:`EmptyDomain` (with the report attached) when X, Y, Z
    are never simultaneously positive on the window."""
    started = time.perf_counter()
    t = sep.build_xyz(coeffs)
    residuals = sep.check_constraints(coeffs)
    us = np.linspace(*u_window, grid)
    vs = np.linspace(*v_window, grid)
    U, V = np.meshgrid(us, vs, indexing="ij")
    W = -U - V
    params = {**coeffs.as_dict(), "u_window": list(u_window), "v_window": list(v_window),
              "signs": list(signs), "clip": clip}
    mask = sep.positivity_mask(t, U, V)
    if not mask.any():
        report = _report("separable", m, params, None, (grid, grid), started, residuals, False)
        raise EmptyDomain("positivity domain empty", report)
    # stay a little inside the domain, where the integrands blow up
    margins = [max(sep.POSITIVITY_MARGIN, clip * float(np.max(np.abs(prof(x)))))
               for prof, x in zip(t, (U, V, W))]
    mask &= (t.X(U) > margins[0]) & (t.Y(V) > margins[1]) & (t.Z(W) > margins[2])
    if anchor is None:
        anchor = sep.default_anchor(t, u_window, v_window)
        params["anchor"] = list(anchor)
    u0, v0 = anchor
    x1 = signs[0] * sep.cumulative_primitive(t.X, u0, us, m, "X")
    x2 = signs[1] * sep.cumulative_primitive(t.Y, v0, vs, m, "Y")
    x3 = signs[2] * sep.cumulative_primitive(t.Z, -u0 - v0, W[mask], m, "Z")
    X3 = np.full(U.shape, np.nan)
    X3[mask] = x3
    points = np.stack([np.broadcast_to(x1[:, None], U.shape),
                       np.broadcast_to(x2[None, :], U.shape), X3], axis=-1)
    mask &= np.all(np.isfinite(points), axis=-1)
    if not mask.any():
        report = _report("separable", m, params, None, (grid, grid), started, residuals, False)
        raise EmptyDomain("no grid point reachable from the anchor inside the domain", report)
    H = np.full(U.shape, np.nan)
    for idx in zip(*np.nonzero(mask)):
        H[idx] = sep.analytic_H(U[idx], V[idx], t, m, signs)
    H_num = None
    if oracle:
        H_num = _numeric_grid(sep.separable_patch(t, m, anchor, signs), U, V, mask, m, step)
    mesh = grid_mesh(points, mask, U, V, H, H_num)
    return mesh, _report("separable", m, params, mesh, (grid, grid), started, residuals, True)
