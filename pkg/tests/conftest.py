import numpy as np
import pytest

from normedminimal import lp_geometry as lp


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def quadratic_patch(jet):
    """Graph patch of the quadratic polynomial with the given 2-jet at 0."""
    from normedminimal.curvature import graph_patch
    fu, fv, a, b, c = jet.f_u, jet.f_v, jet.f_uu, jet.f_uv, jet.f_vv
    return graph_patch(
        lambda u, v: fu * u + fv * v + 0.5 * (a * u * u + 2 * b * u * v + c * v * v),
        lambda u, v: fu + a * u + b * v,
        lambda u, v: fv + b * u + c * v)


def random_jet(rng, lo=0.5, hi=2.0):
    slopes = rng.uniform(lo, hi, 2) * rng.choice([-1.0, 1.0], 2)
    return lp.GraphJet2(*slopes, *rng.uniform(-2.0, 2.0, 3))
