"""Invariant suite run by ``fubm verify`` and the acceptance tests.

Each check reduces to a nonnegative residual compared with a threshold, so
the JSON report records how far every invariant is from failing, not just a
verdict.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import kernel
from .curve import build_curve, involution
from .moments import mgf_contour, moment_contour, moment_density, moment_sequence, moment_sum
from .spectrum import INNER, OUTER, density_table, invert_h

__all__ = ["Check", "PHI_GRID_POINTS", "curve_checks", "density_checks", "branch_checks", "moment_checks", "run_suite"]

PHI_GRID_POINTS = 101
CONTOUR_TOL = 1e-9
DENSITY_MOMENT_TOL = 1e-6
CLOSED_FORM_TOL = 1e-12
MGF_TOL = 1e-8
MGF_POINT = 0.3
MGF_TERMS = 200


@dataclass(frozen=True)
class Check:
    name: str
    t: float
    residual: float
    threshold: float

    @property
    def passed(self):
        # NaN residuals fail
        return bool(self.residual <= self.threshold)

    def as_dict(self):
        out = asdict(self)
        out["passed"] = self.passed
        return out


def _distance_to_cut(z):
    """Distance from each point to the ray ``[1, inf)``."""
    return np.where(z.real >= 1.0, np.abs(z.imag), np.abs(z - 1.0))


def curve_checks(curve, tol):
    t = curve.t
    z = curve.z
    abs_h = np.abs(kernel.h_eval(z, t))
    landmarks = {
        "passes_x_t": curve.x_t,
        "passes_critical_point": math.sqrt(t) * complex(math.cos(curve.theta_t), math.sin(curve.theta_t)),
        "passes_imaginary_axis": 1j * math.sqrt(math.expm1(t)),
    }
    out = [Check("abs_h_unit", t, float(np.max(np.abs(abs_h - 1.0))), tol)]
    for name, w in landmarks.items():
        out.append(Check(name, t, float(np.min(np.abs(z - w))), tol))
    k_val, _ = kernel.k_cartesian(curve.x_t, t)
    out.append(Check("x_t_root", t, abs(float(k_val) - 1.0), tol))
    # residual is the number of samples lying on [1, inf)
    on_cut = int(np.count_nonzero(_distance_to_cut(z) == 0.0))
    out.append(Check("avoids_cut", t, float(on_cut), 0.0))
    out.append(Check("phi_min_is_minus_beta", t, abs(float(np.min(curve.phi)) + curve.beta), tol))
    return out


def density_checks(table, tol):
    t = table.t
    return [
        Check("normalization", t, abs(table.normalization - 1.0), max(tol, 1e-6)),
        Check("rho_nonnegative", t, max(0.0, -float(np.min(table.rho))), 0.0),
        Check("rho_edges_zero", t, float(abs(table.rho[0]) + abs(table.rho[-1])), 0.0),
    ]


def branch_checks(curve, tol, n_phi=PHI_GRID_POINTS):
    t = curve.t
    phi = np.linspace(-curve.beta, curve.beta, n_phi)
    z_in = invert_h(phi, INNER, curve)
    z_out = invert_h(phi, OUTER, curve)
    side = np.maximum(1.0 - np.abs(z_out - 1.0), np.abs(z_in - 1.0) - 1.0)
    ratio = (1.0 - z_out) / (1.0 - z_in) - np.abs(z_out - 1.0) ** 2
    return [
        Check("involution_pairing", t, float(np.max(np.abs(involution(z_out) - z_in))), tol),
        Check("branch_sides", t, max(0.0, float(np.max(side))), 1e-12),
        Check("ratio_identity", t, float(np.max(np.abs(ratio))), tol),
    ]


def moment_checks(curve, table, nmax, radius):
    t = curve.t
    m_sum = np.array([moment_sum(n, t, n_max=max(nmax, 1)) for n in range(1, nmax + 1)])
    m_con = np.array([moment_contour(n, t, radius) for n in range(1, nmax + 1)])
    m_den = np.array([moment_density(n, table) for n in range(1, nmax + 1)])
    m1 = math.exp(-t / 2.0)
    m1_gap = max(abs(m_sum[0] - m1), abs(m_con[0] - m1), abs(m_den[0] - m1))
    series = moment_sequence(t, MGF_TERMS)
    mgf_series = sum(m * MGF_POINT**n for n, m in enumerate(series, start=1))
    return [
        Check("contour_vs_sum", t, float(np.max(np.abs(m_con - m_sum))), CONTOUR_TOL),
        Check("density_vs_sum", t, float(np.max(np.abs(m_den - m_sum))), DENSITY_MOMENT_TOL),
        Check("m1_closed_form", t, float(m1_gap), CLOSED_FORM_TOL),
        Check("mgf_vs_series", t, abs(mgf_contour(MGF_POINT, curve) - mgf_series), MGF_TOL),
    ]


def run_suite(t, samples=4096, grid=2001, nmax=30, radius=0.5, tol=1e-8):
    """All checks at one ``t``; returns ``(curve, table, checks)``."""
    curve = build_curve(t, samples)
    table = density_table(curve, grid)
    checks = curve_checks(curve, tol) + density_checks(table, tol) + branch_checks(curve, tol)
    checks += moment_checks(curve, table, nmax, radius)
    return curve, table, checks
