"""Minimal surfaces in R^3 with the 2m-norm: translation, homothetical and
separable families, with analytic and numeric mean curvature."""
from .curvature import (mean_curvature_graph, mean_curvature_homothetical,
                        mean_curvature_numeric, mean_curvature_separable,
                        mean_curvature_translation, separable_minimality_residual)
from .errors import SurfaceError
from .homothetical import HomotheticalSpec, psi, psi_inverse, psi_range
from .lp_geometry import (GraphJet2, NormOrder, birkhoff_gauss_graph, birkhoff_gauss_implicit,
                          grad_phi, norm_2m, phi)
from .separable import PRESETS, CoefficientSet, build_xyz, check_constraints, solve_trig_coeffs
from .translation import F_m, F_m_inverse, F_m_sup, TranslationSpec

__version__ = "0.1.0"
