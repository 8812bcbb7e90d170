"""Self-check suite run by ``normedminimal verify``.

Each check returns ``(passed, detail)``.  The ``fast`` tier uses reduced
grids and sample counts; ``full`` adds the convergence-order study.
"""
from __future__ import annotations

import math
import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Callable
from unittest import mock

import numpy as np

from . import curvature, homothetical as homo, lp_geometry as lp, numerics
from . import separable as sep, translation as trans

TIERS = ("fast", "full")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _sizes(tier):
    full = tier == "full"
    return {
        "draws": 1000 if full else 200,
        "grid": 50 if full else 16,
        "spots": 25 if full else 6,
        "random": 100 if full else 25,
    }


def _random_jet(rng, lo=0.3, hi=2.0):
    slopes = rng.uniform(lo, hi, 2) * rng.choice([-1.0, 1.0], 2)
    second = rng.uniform(-2.0, 2.0, 3)
    return lp.GraphJet2(*slopes, *second)


def _jet_patch(jet):
    fu, fv, a, b, c = jet.f_u, jet.f_v, jet.f_uu, jet.f_uv, jet.f_vv
    return curvature.graph_patch(
        lambda u, v: fu * u + fv * v + 0.5 * (a * u * u + 2 * b * u * v + c * v * v),
        lambda u, v: fu + a * u + b * v,
        lambda u, v: fv + b * u + c * v)


def check_quadrature(sz):
    errs = [
        abs(numerics.integrate(lambda x: 1.0 / (1.0 + x * x), 0.0, 1.0) - math.pi / 4),
        abs(numerics.integrate(lambda t: 1.0 / (1.0 + t ** 4), 0.0, 1e6)
            - math.pi / (2 * math.sqrt(2))),
    ]
    a = numerics.integrate(math.exp, 0.0, 0.4) + numerics.integrate(math.exp, 0.4, 1.0)
    errs.append(abs(a - math.expm1(1.0)))
    ok = errs[0] < 1e-12 and errs[1] < 1e-8 and errs[2] < 1e-12
    return ok, f"errors {', '.join(f'{e:.1e}' for e in errs)}"


def check_inversion(sz):
    rng = np.random.default_rng(1)
    xs = rng.uniform(-5, 5, sz["random"])
    err = max(abs(numerics.invert_monotone(lambda x: x ** 3 + x, x ** 3 + x) - x) for x in xs)
    return err < 1e-11, f"max round-trip error {err:.1e}"


def check_birkhoff(sz):
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(sz["random"]):
        m = int(rng.integers(1, 6))
        jet = _random_jet(rng, 0.0, 3.0)
        eta = lp.birkhoff_gauss_graph(jet, m)
        g = lp.grad_phi(eta, m)
        scale = np.linalg.norm(g) * math.hypot(1.0, max(abs(jet.f_u), abs(jet.f_v)))
        worst = max(worst, abs(lp.phi(eta, m) - 1.0),
                    abs(g @ [1.0, 0.0, jet.f_u]) / scale, abs(g @ [0.0, 1.0, jet.f_v]) / scale)
    return worst < 1e-10, f"worst defect {worst:.1e}"


def check_specializations(sz):
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(sz["draws"]):
        m = int(rng.integers(2, 5))
        g, gp, gpp, h, hp, hpp = rng.uniform(0.2, 2.0, 6) * rng.choice([-1.0, 1.0], 6)
        ref = curvature.mean_curvature_graph(lp.GraphJet2(gp, hp, gpp, 0.0, hpp), m)
        val = curvature.mean_curvature_translation(gp, gpp, hp, hpp, m)
        worst = max(worst, abs(val - ref) / max(1.0, abs(ref)))
        ref = curvature.mean_curvature_graph(
            lp.GraphJet2(gp * h, g * hp, gpp * h, gp * hp, g * hpp), m)
        val = curvature.mean_curvature_homothetical(g, gp, gpp, h, hp, hpp, m)
        worst = max(worst, abs(val - ref) / max(1.0, abs(ref)))
    return worst < 1e-13, f"worst relative gap {worst:.1e}"


def check_euclidean(sz):
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(sz["draws"]):
        fu, fv, fuu, fuv, fvv = rng.uniform(-2, 2, 5)
        classic = -0.5 * (1 + fu * fu + fv * fv) ** -1.5 * (
            (1 + fv * fv) * fuu - 2 * fu * fv * fuv + (1 + fu * fu) * fvv)
        val = curvature.mean_curvature_graph(lp.GraphJet2(fu, fv, fuu, fuv, fvv), 1)
        worst = max(worst, abs(val - classic) / max(1.0, abs(classic)))
    return worst < 1e-13, f"worst relative gap {worst:.1e}"


def check_oracle(sz):
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(sz["random"]):
        m = int(rng.integers(1, 4))
        jet = _random_jet(rng, 0.5, 2.0)
        worst = max(worst, abs(curvature.mean_curvature_numeric(_jet_patch(jet), 0.0, 0.0, m)
                               - curvature.mean_curvature_graph(jet, m)))
    return worst < 1e-6, f"worst |H_numeric - H_formula| {worst:.1e}"


def convergence_orders(jet, m, steps=(1e-2, 5e-3, 2.5e-3)):
    exact = curvature.mean_curvature_graph(jet, m)
    errs = [abs(curvature.mean_curvature_numeric(_jet_patch(jet), 0.0, 0.0, m, h) - exact)
            for h in steps]
    return [math.log2(errs[i] / errs[i + 1]) for i in range(len(errs) - 1)]


def check_convergence(sz):
    jet = lp.GraphJet2(0.8, -1.1, 0.7, 0.3, -0.5)
    orders = convergence_orders(jet, 2)
    return all(abs(p - 2.0) <= 0.3 for p in orders), f"observed orders {orders}"


def check_F2_closed_form(sz):
    err = max(abs(trans.F_m(s, 2) - trans.F2_closed_form(s)) for s in range(-3, 4))
    sup_err = abs(trans.F_m_sup(2) - 3 * math.pi / (2 * math.sqrt(2)))
    return err < 1e-10 and sup_err < 1e-10, f"closed form {err:.1e}, sup {sup_err:.1e}"


def check_translation(sz):
    n = sz["grid"]
    worst_a, worst_n = 0.0, 0.0
    rng = np.random.default_rng(6)
    for m in (2, 3):
        for a in (1.0, -0.5):
            spec = trans.TranslationSpec(m, a)
            half = trans.strip_halfwidth(spec, 0.9)
            grid = np.linspace(-half, half, n)
            su = [trans.F_m_inverse(a * u, m) for u in grid]
            tv = [trans.F_m_inverse(-a * v, m) for v in grid]
            for s in su:
                for t in tv:
                    worst_a = max(worst_a, abs(curvature.mean_curvature_translation(
                        *trans.jet_from_roots(s, t, spec), m)))
            patch = trans.translation_patch(spec)
            for u, v in rng.uniform(-half, half, (sz["spots"], 2)):
                worst_n = max(worst_n, abs(curvature.mean_curvature_numeric(patch, u, v, m)))
    return worst_a < 1e-8 and worst_n < 1e-6, f"analytic {worst_a:.1e}, numeric {worst_n:.1e}"


def check_parametrizations(sz):
    rng = np.random.default_rng(7)
    spec = trans.TranslationSpec(2, 1.0)
    worst = 0.0
    for s, t in rng.uniform(-3, 3, (sz["random"], 2)):
        st = trans.translation_point_st(s, t, spec)
        uv = trans.translation_point_uv(st[0], st[1], spec)
        worst = max(worst, float(np.max(np.abs(st - uv))))
    return worst < 1e-10, f"max gap {worst:.1e}"


def check_scherk(sz):
    worst = 0.0
    for a in (1.0, -0.5, 2.0):
        spec = trans.TranslationSpec(1, a)
        half = trans.strip_halfwidth(spec, 0.9)
        for u in np.linspace(-half, half, 9):
            for v in np.linspace(-half, half, 9):
                z = trans.translation_point_uv(u, v, spec)[2]
                worst = max(worst, abs(z - math.log(math.cos(a * v) / math.cos(a * u)) / a))
    return worst < 1e-10, f"max gap {worst:.1e}"


def check_homothetical(sz):
    n = sz["grid"]
    worst, round_trip = 0.0, 0.0
    for m in (2, 3):
        spec = homo.HomotheticalSpec(m, 1.0, 0.0, 1.0)
        half = 0.95 * homo.psi_range(spec)
        for v in np.linspace(-half, half, n):
            h = homo.psi_inverse(v, spec)
            round_trip = max(round_trip, abs(homo.psi(h, spec) - v))
            if abs(h) <= 0.1:
                continue
            for u in np.linspace(-2, 2, n):
                if abs(u) > 0.1:
                    worst = max(worst, abs(homo.analytic_H(u, v, spec)))
    return worst < 1e-7 and round_trip < 1e-10, f"H {worst:.1e}, Psi round trip {round_trip:.1e}"


def check_separable_examples(sz):
    worst = max(float(np.max(np.abs(sep.check_constraints(sep.PRESETS[k]))))
                for k in ("example6.1", "example6.2", "example6.4"))
    t3 = sep.build_xyz(sep.PRESETS["example6.3"])
    ok3 = float(np.max(np.abs(sep.check_constraints(sep.PRESETS["example6.3"])))) < 1e-13
    empty3 = len(sep.positivity_domain(t3, (-10, 10), (-10, 10), 201)) == 0
    b61 = sep.b_residual(2.0, -3.0, sep.build_xyz(sep.PRESETS["example6.1"]))
    ok = worst < 1e-13 and ok3 and empty3 and b61 == 0.0
    return ok, f"residual {worst:.1e}, example6.3 rejected={empty3}, B(2,-3)={b61}"


def check_functional_equation(sz):
    rng = np.random.default_rng(8)
    sets = [sep.PRESETS[k] for k in sep.PRESETS]
    for _ in range(sz["random"] // 5 + 4):
        p = rng.uniform(0.5, 2.0, 3)
        sets.append(sep.solve_trig_coeffs(p, *rng.uniform(0, 2 * np.pi, 2),
                                          b=rng.uniform(0.5, 2)).coefficients)
    U, V = np.meshgrid(np.linspace(-1.5, 1.5, 20), np.linspace(-1.5, 1.5, 20))
    worst = max(float(np.max(np.abs(sep.b_residual(U, V, sep.build_xyz(c))))) for c in sets)
    weakest = min(float(np.max(np.abs(sep.b_residual(U, V, sep.build_xyz(c.perturbed("p", 0, 0.1))))))
                  for c in sets)
    return worst < 1e-10 and weakest > 1e-3, f"max |B| {worst:.1e}, perturbed min-max {weakest:.1e}"


def check_third_derivative(sz):
    rng = np.random.default_rng(9)
    worst = 0.0
    for c in (sep.PRESETS["example6.1"], sep.PRESETS["example6.2"], sep.PRESETS["example6.4"]):
        t = sep.build_xyz(c)
        for x in rng.uniform(-2, 2, sz["random"]):
            for axis in sep.AXES:
                if abs(t[axis](x, 1)) > 1e-6:
                    worst = max(worst, abs(sep.third_derivative_ratio(t, axis, x) - c.a))
    return worst < 1e-10, f"worst deviation {worst:.1e}"


def check_reconstruction(sz):
    n = max(6, sz["grid"] // 3)
    worst, worst_num = 0.0, 0.0
    for key in ("example6.1", "example6.2", "example6.4"):
        t = sep.build_xyz(sep.PRESETS[key])
        uw, vw = sep.PRESET_WINDOWS[key]
        pts = sep.positivity_domain(t, uw, vw, n)
        anchor = sep.default_anchor(t, uw, vw)
        for m in (2, 3):
            patch = sep.separable_patch(t, m, anchor)
            for i, (u, v) in enumerate(pts):
                if min(t.X(u), t.Y(v), t.Z(-u - v)) < 1e-2:
                    continue
                worst = max(worst, abs(sep.analytic_residual(u, v, t, m)))
                if i % 7 == 0:
                    worst_num = max(worst_num, abs(curvature.mean_curvature_numeric(patch, u, v, m)))
    return worst < 1e-8 and worst_num < 1e-6, f"minimality residual {worst:.1e}, numeric H {worst_num:.1e}"


CHECKS: list[tuple[str, Callable, tuple]] = [
    ("numerics.quadrature", check_quadrature, TIERS),
    ("numerics.inversion", check_inversion, TIERS),
    ("lp_geometry.birkhoff_gauss", check_birkhoff, TIERS),
    ("curvature.specializations", check_specializations, TIERS),
    ("curvature.euclidean", check_euclidean, TIERS),
    ("curvature.oracle_agreement", check_oracle, TIERS),
    ("curvature.oracle_order", check_convergence, ("full",)),
    ("translation.F2_closed_form", check_F2_closed_form, TIERS),
    ("translation.minimality", check_translation, TIERS),
    ("translation.parametrizations", check_parametrizations, TIERS),
    ("translation.scherk", check_scherk, TIERS),
    ("homothetical.minimality", check_homothetical, TIERS),
    ("separable.examples", check_separable_examples, TIERS),
    ("separable.functional_equation", check_functional_equation, TIERS),
    ("separable.third_derivative", check_third_derivative, TIERS),
    ("separable.reconstruction", check_reconstruction, TIERS),
]


@contextmanager
def injected_fault():
    """Perturb the slope-power helper shared by every curvature formula."""
    original = curvature._pow_a
    with mock.patch.object(curvature, "_pow_a", lambda x, k, m: original(x, k, m) * (1 + 1e-3)):
        yield


def run_suite(tier: str = "fast", fault: bool = False) -> list[CheckResult]:
    if tier not in TIERS:
        raise ValueError(f"tier must be one of {TIERS}")
    sz = _sizes(tier)
    results = []
    ctx = injected_fault() if fault else _null()
    with ctx:
        for name, fn, tiers in CHECKS:
            if tier not in tiers:
                continue
            start = time.perf_counter()
            try:
                passed, detail = fn(sz)
            except Exception as exc:  # a crashing check is a failing check
                passed, detail = False, f"{type(exc).__name__}: {exc}"
            results.append(CheckResult(name, bool(passed), detail, time.perf_counter() - start))
    return results


@contextmanager
def _null():
    yield
