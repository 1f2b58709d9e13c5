"""Safeguarded root finding and quadrature rules.

The root finder is Brent's method: inverse quadratic / secant steps
accepted only while they stay inside the current bracket and shrink it
fast enough, bisection otherwise. All curve points are produced by 1-D
solves through :func:`find_root`.
"""

import math
from dataclasses import dataclass
import warnings

import mpmath
import numpy as np
from scipy import integrate

from .errors import ConvergenceError

__all__ = [
    "Bracket",
    "QuadratureResult",
    "find_root",
    "expand_bracket",
    "integrate_periodic",
    "integrate_adaptive",
    "clenshaw_curtis",
]

_EPS = np.finfo(float).eps
MAX_ITER = 200
MAX_DOUBLINGS = 60


@dataclass(frozen=True)
class Bracket:
    """Interval ``[lo, hi]`` on which ``f`` changes sign (or vanishes)."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"invalid bracket: lo={self.lo!r} is not < hi={self.hi!r}")
        if not self.f_lo * self.f_hi <= 0:
            raise ValueError(
                f"invalid bracket [{self.lo!r}, {self.hi!r}]: "
                f"f_lo={self.f_lo!r} and f_hi={self.f_hi!r} have the same sign"
            )

    @classmethod
    def from_function(cls, f, lo, hi):
        lo, hi = float(lo), float(hi)
        return cls(lo, hi, float(f(lo)), float(f(hi)))


@dataclass(frozen=True)
class QuadratureResult:
    """Value of a quadrature with its error estimate.

    ``converged`` is False when an adaptive rule hit its subdivision limit;
    ``error_estimate`` then reports what was achieved.
    """

    value: complex
    error_estimate: float
    evaluations: int
    converged: bool = True


def find_root(f, bracket, tol=1e-12):
    """Brent's method on a sign-changing bracket.

    Parameters
    ----------
    f : callable
        Scalar function of one real variable.
    bracket : Bracket
        Initial interval with ``f_lo * f_hi <= 0``.
    tol : float
        Absolute tolerance on the abscissa; the solver additionally adds a
        relative term of ``2 eps |x|``.

    Returns
    -------
    float
        A point of ``[bracket.lo, bracket.hi]`` within ``tol`` of a sign
        change of ``f`` (or where ``f`` vanishes exactly).

    Raises
    ------
    ConvergenceError
        After ``MAX_ITER`` iterations without convergence.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a, b = bracket.lo, bracket.hi
    fa, fb = bracket.f_lo, bracket.f_hi
    if fa == 0:
        return a
    if fb == 0:
        return b
    c, fc = b, fb
    d = e = b - a
    for _ in range(MAX_ITER):
        if (fb > 0) == (fc > 0):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * _EPS * abs(b) + 0.5 * tol
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0:
            return b
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q, r = fa / fc, fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = xm
        else:
            d = e = xm
        a, fa = b, fb
        b += d if abs(d) > tol1 else math.copysign(tol1, xm)
        fb = float(f(b))
    raise ConvergenceError(f"find_root: no convergence in {MAX_ITER} iterations near x={b!r}")


def expand_bracket(f, fixed, seed, factor=2.0, max_steps=MAX_DOUBLINGS):
    """Move one bracket end geometrically until ``f`` changes sign.

    ``fixed`` stays put; the free end starts at ``seed`` and is multiplied by
    ``factor`` (``> 1`` to search upward, ``< 1`` toward zero) until
    ``f(free)`` has the opposite sign of ``f(fixed)``.

    Returns
    -------
    Bracket
    """
    f_fixed = float(f(fixed))
    free = float(seed)
    for _ in range(max_steps + 1):
        f_free = float(f(free))
        if f_free * f_fixed <= 0:
            if free < fixed:
                return Bracket(free, fixed, f_free, f_fixed)
            return Bracket(fixed, free, f_fixed, f_free)
        free *= factor
    raise ConvergenceError(
        f"expand_bracket: no sign change after {max_steps} steps from seed {seed!r} (fixed end {fixed!r})"
    )


def _trapezoid_sum(f, nodes, vectorized, dps):
    if dps is None:
        theta = 2.0 * np.pi * np.arange(nodes) / nodes
        if vectorized:
            vals = np.asarray(f(theta), dtype=complex)
        else:
            vals = np.array([f(th) for th in theta], dtype=complex)
        return vals, 2.0 * np.pi / nodes
    with mpmath.workdps(dps):
        step = 2 * mpmath.pi / nodes
        vals = [mpmath.mpc(f(k * step)) for k in range(nodes)]
        return vals, step


def integrate_periodic(f, nodes, *, vectorized=True, dps=None):
    """Equispaced trapezoid rule for a ``2 pi``-periodic integrand.

    Parameters
    ----------
    f : callable
        Integrand on ``[0, 2 pi)``. With ``vectorized`` it receives the whole
        node array at once.
    nodes : int
        Number of nodes, at least 4.
    dps : int, optional
        When given, nodes and the sum are carried in mpmath with this many
        decimal digits and ``f`` is called once per node with an ``mpf``
        angle. Needed when the integrand is huge compared with the result.

    Returns
    -------
    QuadratureResult
        ``error_estimate`` is the difference against the rule with half as
        many nodes.
    """
    nodes = int(nodes)
    if nodes < 4:
        raise ValueError("integrate_periodic needs at least 4 nodes")
    vals, step = _trapezoid_sum(f, nodes, vectorized, dps)
    if nodes % 2 == 0:
        half_vals, half_step = vals[::2], 2 * step
        extra = 0
    else:
        half_vals, half_step = _trapezoid_sum(f, (nodes + 1) // 2, vectorized, dps)
        extra = len(half_vals)
    if dps is None:
        value = step * np.sum(vals)
        coarse = half_step * np.sum(half_vals)
    else:
        with mpmath.workdps(dps):
            value = complex(step * mpmath.fsum(vals))
            coarse = complex(half_step * mpmath.fsum(half_vals))
    return QuadratureResult(complex(value), float(abs(value - coarse)), nodes + extra)


def integrate_adaptive(f, a, b, tol=1e-10, limit=200):
    """Adaptive Gauss-Kronrod quadrature of a real function on ``[a, b]``.

    Backed by QUADPACK (``scipy.integrate.quad``). Its 21-point
    Gauss-Kronrod panels are interior, so ``f`` is never evaluated at ``a`` or
    ``b``; endpoint singularities are tolerated through extrapolation.

    Returns
    -------
    QuadratureResult
        ``converged`` is False when the subdivision limit was reached or
        QUADPACK reported roundoff trouble.
    """
    if not a < b:
        raise ValueError("integrate_adaptive requires a < b")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(f, a, b, epsabs=tol, epsrel=0.0, limit=limit, full_output=1)
    value, err, info = out[0], out[1], out[2]
    converged = len(out) == 3
    return QuadratureResult(complex(value), float(abs(err)), int(info["neval"]), converged)


def clenshaw_curtis(n, a=-1.0, b=1.0):
    """Clenshaw-Curtis nodes and weights on ``[a, b]``.

    Returns ``n + 1`` Chebyshev-Lobatto nodes in increasing order together
    with weights integrating polynomials of degree ``n`` exactly.
    """
    n = int(n)
    if n < 1:
        raise ValueError("clenshaw_curtis needs n >= 1")
    k = np.arange(n + 1)
    s = np.pi * k / n
    x = -np.cos(s)
    w = np.zeros(n + 1)
    inner = s[1:-1]
    v = np.ones(n - 1)
    if n % 2 == 0:
        w[0] = w[n] = 1.0 / (n * n - 1.0)
        j = np.arange(1, n // 2)
        v -= (2.0 * np.cos(2.0 * np.outer(j, inner)) / (4.0 * j * j - 1.0)[:, None]).sum(axis=0)
        v -= np.cos(n * inner) / (n * n - 1.0)
    else:
        w[0] = w[n] = 1.0 / (n * n)
        j = np.arange(1, (n - 1) // 2 + 1)
        v -= (2.0 * np.cos(2.0 * np.outer(j, inner)) / (4.0 * j * j - 1.0)[:, None]).sum(axis=0)
    w[1:-1] = 2.0 * v / n
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w
