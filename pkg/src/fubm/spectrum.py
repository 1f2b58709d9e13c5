r"""Spectral density of the free unitary Brownian motion for ``0 < t < 4``.

``h_t`` maps each of the two branches of ``gamma_t`` diffeomorphically
onto the arc ``{e^{i phi} : |phi| <= beta(t)}``. With ``z_out(phi)`` the
preimage on the outer branch (``|z - 1| >= 1``), the density of the
spectral measure with respect to ``d theta`` is

.. math:: \rho_t(\theta) = \frac{1}{\pi t} \log |z_{out}(\theta) - 1|,
          \qquad |\theta| \le \beta(t),

and zero outside the support.

Densities are tabulated on the grid ``theta_k = -beta cos(pi k / (N - 1))``.
Since ``rho_t`` vanishes like a square root at both edges, ``rho_t(theta) =
sqrt(beta^2 - theta^2) B(theta)`` with ``B`` smooth, and the trapezoid rule
in the angle ``s`` integrates ``beta^2 sin^2(s) B(-beta cos s)`` spectrally.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernel
from .curve import POLAR_OUTER, critical_point
from .errors import ConstructionError, DomainError
from .numerics import Bracket, find_root, integrate_adaptive

__all__ = [
    "DensityTable",
    "invert_h",
    "density_at",
    "density_table",
    "herglotz_re",
    "poisson_integral",
]

INNER = "inner"
OUTER = "outer"

NEWTON_ITERATIONS = 40
ARG_TOL = 1e-12
# phi within this of an edge is pinned to the closed-form edge preimage
EDGE_SNAP = 1e-15


@dataclass(frozen=True, eq=False)
class DensityTable:
    """Density of ``mu_t`` tabulated on ``[-beta, beta]``.

    ``weights`` turn the table into a quadrature rule:
    ``sum(weights * f(thetas) * rho)`` approximates the integral of ``f rho``.
    ``normalization`` is the total mass computed independently by adaptive
    quadrature of :func:`density_at`.
    """

    t: float
    beta: float
    x_t: float
    thetas: np.ndarray
    rho: np.ndarray
    weights: np.ndarray
    normalization: float
    normalization_error: float

    @property
    def grid_size(self):
        return len(self.thetas)

    @property
    def table_mass(self):
        return float(np.sum(self.weights * self.rho))

    def summary(self):
        return {
            "t": self.t,
            "beta": self.beta,
            "x_t": self.x_t,
            "normalization": self.normalization,
            "grid_size": self.grid_size,
        }


def _branch_samples(curve, branch):
    """Upper-half samples of one branch with ``phi`` increasing from ``-beta`` to 0."""
    s = curve.split_index
    if branch == INNER:
        sl = slice(s, None, -1)
    elif branch == OUTER:
        sl = slice(s, None)
    else:
        raise ValueError(f"branch must be 'inner' or 'outer', got {branch!r}")
    return curve.phi[sl], curve.z[sl], curve.param[sl]


def _on_branch(z, branch, slack=1e-12):
    d = np.abs(z - 1.0)
    return d >= 1.0 - slack if branch == OUTER else d <= 1.0 + slack


def _residual(z, q, t):
    return np.abs(np.log(1.0 - z) + t * (1.0 / z - 0.5) - 1j * q)


def _newton(z, q, t):
    for _ in range(NEWTON_ITERATIONS):
        f = np.log(1.0 - z) + t * (1.0 / z - 0.5) - 1j * q
        df = -1.0 / (1.0 - z) - t / (z * z)
        step = f / df
        z = z - step
        if np.all(np.abs(step) <= 4e-16 * np.abs(z)):
            break
    return z


def _model_start(q, beta, t, branch):
    """Quadratic model of ``log h_t`` around the critical point."""
    zc = critical_point(t)
    f2 = -1.0 / (1.0 - zc) ** 2 + 2.0 * t / zc**3
    d = np.sqrt(2j * (q + beta) / f2)
    cands = np.stack([zc + d, zc - d])
    good = _on_branch(cands[0], branch, 0.0)
    return np.where(good, cands[0], cands[1])


def _fallback(q, branch, curve, phi_b, p_b):
    """Bisect along the curve parameter between bracketing samples."""
    k = int(np.clip(np.searchsorted(phi_b, q), 1, len(phi_b) - 1))
    if branch == OUTER:
        regime = POLAR_OUTER
        # the shared critical sample carries the inner-arc parameter
        p_lo = curve.theta_t if k == 1 else float(p_b[k - 1])
    else:
        regime = curve.inner_regime
        p_lo = float(p_b[k - 1])
    lo, hi = sorted((p_lo, float(p_b[k])))

    def f(p):
        return float(kernel.arg_h_continuous(curve.point_at(p, regime), curve.t)) - q

    p = find_root(f, Bracket.from_function(f, lo, hi), 1e-15)
    return curve.point_at(p, regime)


def invert_h(phi, branch, curve):
    """Preimage of ``e^{i phi}`` under ``h_t`` on one branch of ``gamma_t``.

    Parameters
    ----------
    phi : float or array_like
        Target argument(s), ``|phi| <= beta(t)``. Negative values are taken
        on the upper half of the curve, positive ones on the lower half.
    branch : {"inner", "outer"}
        ``inner`` is the branch inside ``|z - 1| <= 1``.
    curve : SpectralCurve

    Returns
    -------
    complex or ndarray
        ``z`` on the requested branch with ``arg h_t(z) = phi``.

    Raises
    ------
    DomainError
        If some ``|phi| > beta(t)``.
    """
    t, beta = curve.t, curve.beta
    phi = np.asarray(phi, dtype=float)
    if np.any(np.abs(phi) > beta * (1.0 + 1e-14)):
        raise DomainError(f"|phi| must not exceed beta(t) = {beta!r}")
    shape = phi.shape
    phi = phi.ravel()
    q = -np.minimum(np.abs(phi), beta)
    phi_b, z_b, p_b = _branch_samples(curve, branch)

    start = np.interp(q, phi_b, z_b.real) + 1j * np.interp(q, phi_b, z_b.imag)
    model = _model_start(q, beta, t, branch)
    with np.errstate(all="ignore"):
        use_model = _residual(model, q, t) < _residual(start, q, t)
    start = np.where(use_model, model, start)

    edge = q + beta <= EDGE_SNAP * beta
    with np.errstate(all="ignore"):
        z = _newton(np.where(edge, 1.0, start), q, t)
    z[edge] = critical_point(t)

    # accept only solutions that sit on the requested branch near the bracketing samples
    k = np.clip(np.searchsorted(phi_b, q), 1, len(phi_b) - 1)
    span = np.abs(z_b[k] - z_b[k - 1])
    with np.errstate(all="ignore"):
        ok = (
            edge
            | (
                (_residual(z, q, t) <= ARG_TOL)
                & _on_branch(z, branch)
                & (np.abs(z - start) <= 4.0 * span + 1e-9)
            )
        )
    for i in np.flatnonzero(~ok):
        try:
            z[i] = _fallback(q[i], branch, curve, phi_b, p_b)
        except (ValueError, RuntimeError) as exc:
            raise ConstructionError(f"invert_h failed for phi={phi[i]!r}: {exc}", regime=branch, param=float(phi[i]))

    z = np.where(phi > 0, np.conj(z), z)
    return z.reshape(shape)[()]


def density_at(theta, curve):
    """Density ``rho_t(theta)`` with respect to ``d theta``.

    Zero outside ``[-beta, beta]`` and exactly zero at the edges, where the
    outer preimage is ``1 + e^{-+2 i theta_t}`` and ``log|z - 1| = 0``.
    """
    theta = np.asarray(theta, dtype=float)
    out = np.zeros(theta.shape)
    inside = np.abs(theta) < curve.beta
    if np.any(inside):
        z = np.atleast_1d(invert_h(theta[inside], OUTER, curve))
        out[inside] = np.log(np.abs(z - 1.0)) / (math.pi * curve.t)
    return out[()]


def density_table(curve, n_grid=2001, tol=1e-13):
    """Tabulate ``rho_t`` on a grid clustered at the support edges.

    Parameters
    ----------
    curve : SpectralCurve
    n_grid : int
        Odd number of nodes, at least 33; the grid contains ``0`` and
        ``+-beta``.
    tol : float
        Absolute tolerance of the adaptive normalization quadrature.

    Returns
    -------
    DensityTable
    """
    n_grid = int(n_grid)
    if n_grid < 33 or n_grid % 2 == 0:
        raise ValueError("n_grid must be odd and at least 33")
    beta = curve.beta
    m = n_grid - 1
    s = math.pi * np.arange(n_grid) / m
    thetas = -beta * np.cos(s)
    half = m // 2
    thetas[half] = 0.0
    thetas[half + 1 :] = -thetas[half - 1 :: -1]
    thetas[0], thetas[-1] = -beta, beta
    sin_s = np.sin(s)
    sin_s[0] = sin_s[-1] = 0.0
    weights = (math.pi / m) * beta * sin_s

    rho = density_at(thetas, curve)
    rho[0] = rho[-1] = 0.0

    def mass(u):
        return float(density_at(-beta * math.cos(u), curve)) * beta * math.sin(u)

    norm = integrate_adaptive(mass, 0.0, math.pi, tol)
    return DensityTable(
        t=curve.t,
        beta=beta,
        x_t=curve.x_t,
        thetas=thetas,
        rho=rho,
        weights=weights,
        normalization=norm.value.real,
        normalization_error=norm.error_estimate,
    )


def poisson_integral(table, r, theta):
    """Poisson integral ``int P_r(theta - phi) rho(phi) d phi`` of a table.

    ``P_r(x) = (1 - r^2) / (1 - 2 r cos x + r^2)``; this is the real part of
    the Herglotz transform at ``r e^{i theta}`` computed from the density.
    """
    if not 0.0 <= r < 1.0:
        raise DomainError("poisson_integral needs 0 <= r < 1")
    theta = np.asarray(theta, dtype=float)
    diff = theta[..., None] - table.thetas
    kern = (1.0 - r * r) / (1.0 - 2.0 * r * np.cos(diff) + r * r)
    return (kern @ (table.weights * table.rho))[()]


def herglotz_re(r, theta, t, n_terms=500):
    """Real part of the Herglotz transform from the moment series.

    ``1 + 2 sum_{n=1}^{n_terms} m_n(t) r^n cos(n theta)`` with the moments of
    :func:`fubm.moments.moment_sum`.
    """
    from .moments import moment_sequence

    r = float(r)
    if not 0.0 <= r < 1.0:
        raise DomainError("herglotz_re needs 0 <= r < 1")
    m = np.array(moment_sequence(t, int(n_terms)))
    n = np.arange(1, len(m) + 1)
    theta = np.asarray(theta, dtype=float)
    series = np.cos(np.multiply.outer(theta, n)) @ (m * r**n)
    return (1.0 + 2.0 * series)[()]
