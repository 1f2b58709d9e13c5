r"""Three independent routes to the moments ``m_n(t)`` of ``mu_t``.

* :func:`moment_sum` evaluates the closed alternating sum
  ``e^{-nt/2} sum_{k<n} (-t)^k/k! n^{k-1} C(n, k+1)``.
* :func:`moment_contour` integrates ``h_t(z)^n / (t (1 - z))`` around a
  circle ``|z| = radius`` and divides by ``2 i pi n``.
* :func:`moment_density` integrates ``e^{i n theta}`` against a
  :class:`~fubm.spectrum.DensityTable`.

:func:`mgf_contour` evaluates the generating function
``M_t(w) = sum_{n >= 1} m_n(t) w^n`` as a contour integral along ``gamma_t``.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .errors import DomainError, check_time
from .numerics import integrate_periodic

__all__ = [
    "N_MAX",
    "MomentReport",
    "moment_sum",
    "moment_sequence",
    "moment_contour",
    "contour_nodes",
    "moment_density",
    "mgf_contour",
    "moment_report",
]

N_MAX = 64
DEFAULT_RADIUS = 0.5
# aliasing of the circle trapezoid is pushed below this absolute level
_ALIAS_TARGET = 1e-18


@dataclass(frozen=True)
class MomentReport:
    """``m_n(t)`` by all three routes and their largest pairwise gap."""

    n: int
    t: float
    m_sum: float
    m_contour: complex
    m_density: complex

    @property
    def max_discrepancy(self):
        vals = (self.m_sum, self.m_contour.real, self.m_density.real)
        return max(abs(a - b) for i, a in enumerate(vals) for b in vals[i + 1 :])

    def as_row(self):
        return {
            "n": self.n,
            "t": self.t,
            "m_sum": self.m_sum,
            "m_contour_re": self.m_contour.real,
            "m_contour_im": self.m_contour.imag,
            "m_density_re": self.m_density.real,
            "m_density_im": self.m_density.imag,
            "max_discrepancy": self.max_discrepancy,
        }


@lru_cache(maxsize=4096)
def _moment_sum_exact(n, t):
    # t is a dyadic rational p/q, so the scaled alternating sum is an exact integer
    frac = Fraction(t)
    p, q = frac.numerator, frac.denominator
    # term k = (-p)^k q^(n-1-k) (n-1)!/k! n^k C(n, k+1), built up incrementally in k
    q_pows = [1] * n
    for j in range(1, n):
        q_pows[j] = q_pows[j - 1] * q
    total = 0
    coef = math.factorial(n - 1) * n  # (n-1)!/k! * C(n, k+1) at k = 0
    lead = 1  # (-p n)^k
    for k in range(n):
        total += lead * coef * q_pows[n - 1 - k]
        coef = coef * (n - k - 1) // ((k + 1) * (k + 2))
        lead *= -p * n
    denom = math.factorial(n) * q ** (n - 1)
    with mpmath.workprec(128):
        value = mpmath.mpf(total) / denom * mpmath.exp(-n * mpmath.mpf(t) / 2)
        return float(value)


def moment_sum(n, t, n_max=N_MAX):
    """``m_n(t)`` from the closed alternating sum.

    The terms reach ``1e40`` for ``n = 64`` near ``t = 4`` while the result is
    bounded by 1, so the sum is accumulated exactly: ``t`` is a binary
    fraction and the scaled sum is an integer. Only the final product with
    ``e^{-nt/2}`` is rounded (in 128-bit arithmetic).

    Parameters
    ----------
    n : int
        Moment order, ``1 <= n <= n_max``.
    t : float
    n_max : int
        Largest order accepted; raise it deliberately for long series.

    Raises
    ------
    DomainError
        If ``n`` is outside ``[1, n_max]``.
    """
    t = check_time(t)
    n = int(n)
    if n < 1:
        raise DomainError("moment_sum needs n >= 1")
    if n > n_max:
        raise DomainError(
            f"moment_sum: n={n} exceeds n_max={n_max}; the alternating sum is exact but "
            "its cost grows with n, use moment_contour or raise n_max explicitly"
        )
    return _moment_sum_exact(n, t)


@lru_cache(maxsize=64)
def moment_sequence(t, n_terms):
    """Tuple ``(m_1(t), ..., m_{n_terms}(t))`` from :func:`moment_sum`."""
    return tuple(moment_sum(n, t, n_max=n_terms) for n in range(1, n_terms + 1))


def contour_nodes(n, t, radius=DEFAULT_RADIUS):
    """Smallest even node count keeping circle-trapezoid aliasing negligible.

    The trapezoid rule on ``|z| = r`` returns the residue plus the Laurent
    coefficient of ``z^{-1-N}`` times ``r^{-N}``, bounded by
    ``e^{-nt/2} (nt/r)^N (1 + nt/N)^{n-1} / (N+1)!``.
    """
    nt = n * t
    log_target = math.log(_ALIAS_TARGET)
    nodes = max(256, 16 * n)
    while True:
        bound = (
            nodes * math.log(nt / radius)
            - math.lgamma(nodes + 2)
            + (n - 1) * math.log1p(nt / nodes)
            - 0.5 * nt
        )
        if bound < log_target:
            return nodes + nodes % 2
        nodes += max(16, nodes // 8)


def _working_dps(n, t, radius, nodes):
    """Decimal digits covering the cancellation in the circle trapezoid."""
    psi = 2.0 * np.pi * np.arange(nodes) / nodes
    z = radius * np.exp(1j * psi)
    log_h = np.log(np.abs(1.0 - z)) + t * ((1.0 / z).real - 0.5)
    log_f = n * log_h + np.log(np.abs(z / (1.0 - z)))
    peak = float(np.max(log_f)) / math.log(10.0)
    return int(30 + max(0.0, peak) + math.log10(nodes))


def moment_contour(n, t, radius=DEFAULT_RADIUS, nodes=None):
    """``m_n(t)`` as a residue, by the trapezoid rule on ``|z| = radius``.

    ``m_n(t) = (1 / (2 i pi n)) oint h_t(z)^n dz / (t (1 - z))``. On any
    circle ``|h_t|`` exceeds 1 somewhere (by a factor ~170 on ``|z| = 0.5``
    at ``t = 3.9``), so the integrand dwarfs the result; the sum is carried
    in mpmath with enough digits to absorb that cancellation.

    Parameters
    ----------
    n : int
        Order, ``n >= 1``.
    t : float
    radius : float
        Circle radius in ``(0, 1)``.
    nodes : int, optional
        Trapezoid nodes, at least 64. Defaults to :func:`contour_nodes`.

    Returns
    -------
    complex
        Imaginary part is zero up to rounding.
    """
    t = check_time(t)
    n = int(n)
    if n < 1:
        raise DomainError("moment_contour needs n >= 1")
    if not 0.0 < radius < 1.0:
        raise DomainError("moment_contour needs 0 < radius < 1 so the circle avoids [1, inf)")
    nodes = contour_nodes(n, t, radius) if nodes is None else int(nodes)
    if nodes < 64:
        raise ValueError("moment_contour needs at least 64 nodes")
    dps = _working_dps(n, t, radius, nodes)

    with mpmath.workdps(dps):
        r, tt = mpmath.mpf(radius), mpmath.mpf(t)

        def integrand(psi):
            z = r * mpmath.expj(psi)
            # h^n dz / (1 - z) with dz = i z dpsi; the i cancels against 2 i pi
            return mpmath.exp(n * (mpmath.log(1 - z) + tt * (1 / z - mpmath.mpf(0.5)))) * z / (1 - z)

        result = integrate_periodic(integrand, nodes, vectorized=False, dps=dps)
    return result.value / (2.0 * math.pi * n * t)


def moment_density(n, table):
    """``int e^{i n theta} rho_t(theta) d theta`` with the table's quadrature weights.

    Any integer ``n`` is accepted; ``n = 0`` gives the table mass and
    ``moment_density(-n)`` is the conjugate of ``moment_density(n)``.
    """
    phase = np.exp(1j * int(n) * table.thetas)
    return complex(np.sum(table.weights * table.rho * phase))


def _upper_half_integral(w, curve):
    z = curve.z
    t = curve.t
    h = (1.0 - z) * np.exp(t * (1.0 / z - 0.5))
    dh = h * (-1.0 / (1.0 - z) - t / (z * z))
    return np.sum(w * dh / (1.0 - w * h) * np.log(1.0 - z) * curve.dz_weights)


def mgf_contour(w, curve):
    """``M_t(w) = (1/(2 i pi t)) oint w h_t'(z) / (1 - w h_t(z)) log(1 - z) dz``.

    The closed contour is ``gamma_t`` traversed counter-clockwise, using the
    curve's quadrature weights on the stored upper half; the lower half is
    folded in through ``f_w(conj z) = conj(f_{conj w}(z))``.

    Raises
    ------
    DomainError
        If ``|w| >= 1``.
    """
    w = complex(w)
    if abs(w) >= 1.0:
        raise DomainError("mgf_contour needs |w| < 1")
    if w == 0:
        return 0j
    upper = _upper_half_integral(w, curve)
    lower = -np.conj(_upper_half_integral(w.conjugate(), curve))
    return complex((upper + lower) / (2j * math.pi * curve.t))


def moment_report(n, table, radius=DEFAULT_RADIUS):
    """Compare the three moment routes at one order ``n``."""
    t = table.t
    return MomentReport(
        n=int(n),
        t=t,
        m_sum=moment_sum(n, t),
        m_contour=moment_contour(n, t, radius),
        m_density=moment_density(n, table),
    )
