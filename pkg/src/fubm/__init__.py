"""Spectral measure of the free unitary Brownian motion.

The time-``t`` distribution ``mu_t`` (``0 < t < 4``) is computed from the
Jordan curve ``gamma_t`` on which ``|h_t(z)| = |(1 - z) e^{t(1/z - 1/2)}| = 1``:
the density is read off the outer branch of the curve, and its moments are
cross-checked against a closed alternating sum and a residue integral.
"""

from .curve import CurveSample, SpectralCurve, build_curve, critical_points, solve_xt, split_curve
from .errors import ConstructionError, ConvergenceError, DomainError
from .kernel import arg_h_continuous, g_cartesian, g_polar, h_eval, k_cartesian, support_params
from .moments import (
    MomentReport,
    mgf_contour,
    moment_contour,
    moment_density,
    moment_report,
    moment_sequence,
    moment_sum,
)
from .numerics import Bracket, QuadratureResult, clenshaw_curtis, find_root, integrate_adaptive, integrate_periodic
from .spectrum import DensityTable, density_at, density_table, herglotz_re, invert_h, poisson_integral

__version__ = "0.1.0"
