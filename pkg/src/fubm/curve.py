r"""Construction of the Jordan curve ``gamma_t`` on which ``|h_t| = 1``.

Only the closed upper half is stored; the lower half is its conjugate.
The half-curve is assembled from two arcs meeting at the critical point
``z_c = sqrt(t) e^{i theta_t}``:

* the inner arc from ``(x_t, 0)`` to ``z_c``, inside the disc ``|z - 1| <= 1``.
  For ``t <= 2 + sqrt(3)`` it is the non-trivial polar root of
  ``g_{t,theta}(r) = e^t`` for ``theta in [0, theta_t]``; beyond that the
  polar description may be multivalued and the arc is the Cartesian graph
  ``y_t(x)``, ``x in [x_t, t/2]``.
* the outer arc, the polar root ``r_t(theta) >= 2 cos(theta)`` for
  ``theta in [theta_t, pi]``.

The circle ``|z - 1| = 1`` (the trivial root ``r = 2 cos(theta)``) belongs
to the same level set and crosses ``gamma_t`` orthogonally at ``z_c``, so
the tangent of ``gamma_t`` there is parallel to ``z_c - 1``.

Arc nodes are Clenshaw-Curtis points of the arc parameter (the Cartesian
arc uses ``x = x_t + L sigma**2`` to absorb the square-root behaviour at the
real axis). This clusters samples at ``z_c`` where ``d(arg h)/d theta``
vanishes, and turns the stored nodes into a spectrally accurate
quadrature rule for contour integrals along the curve.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernel
from .errors import ConstructionError, DomainError, check_time
from .numerics import Bracket, clenshaw_curtis, expand_bracket, find_root

__all__ = [
    "CARTESIAN_THRESHOLD",
    "POLAR_INNER",
    "CARTESIAN_INNER",
    "POLAR_OUTER",
    "CurveSample",
    "SpectralCurve",
    "solve_xt",
    "radius_outer",
    "inner_branch_point",
    "critical_point",
    "build_curve",
    "critical_points",
    "split_curve",
    "involution",
]

CARTESIAN_THRESHOLD = 2.0 + math.sqrt(3.0)
POLAR_INNER = "polar-inner"
CARTESIAN_INNER = "cartesian-inner"
POLAR_OUTER = "polar-outer"

SOLVE_TOL = 1e-15
MIN_SAMPLES = 64


def _cos(theta):
    # cos(pi/2) is 6e-17 in floating point; the regime tests need the exact sign
    return 0.0 if theta == 0.5 * math.pi else math.cos(theta)


def _log_g_polar(c, t):
    """``r -> log g_{t,theta}(r) - t`` for fixed ``cos(theta) = c``."""

    def f(r):
        return math.log(1.0 + r * (r - 2.0 * c)) + 2.0 * t * c / r - t

    return f


def _log_g_cartesian_sq(x_t, u, t):
    """``Y -> log g_{t,x}(sqrt(Y)) - t`` at ``x = x_t + u``, monotone in ``Y = y**2``.

    Written in the offset ``u`` so that every term keeps full relative
    precision as ``x -> x_t``, where the value is ``O(u)`` and ``y ~ sqrt(u)``.
    """
    x = x_t + u
    a0 = (1.0 - x) ** 2
    x2 = x * x
    if u > 0.5 * (1.0 - x_t):

        def f(yy):
            return math.log(a0 + yy) + 2.0 * t * x / (x2 + yy) - t

        return f

    # log k_t(x), using log k_t(x_t) = 0
    log_k = 2.0 * math.log1p(-u / (1.0 - x_t)) - 2.0 * t * u / (x_t * x)

    def f(yy):
        return math.log1p(yy / a0) - 2.0 * t * yy / (x * (x2 + yy)) + log_k

    return f


_SERIES_K = np.arange(24)


def _log1p_ratio(d):
    """``log1p(d)/d`` and its derivative, by series for ``|d| < 0.1``."""
    d = np.asarray(d, dtype=float)
    small = np.abs(d) < 0.1
    ds = np.where(small, d, 0.0)[..., None]
    signs = (-1.0) ** _SERIES_K
    value_s = np.sum(signs * ds**_SERIES_K / (_SERIES_K + 1), axis=-1)
    k = _SERIES_K[1:]
    deriv_s = np.sum(signs[1:] * k * ds ** (k - 1) / (k + 1), axis=-1)
    dl = np.where(small, 1.0, d)
    lp = np.log1p(dl)
    value = np.where(small, value_s, lp / dl)
    deriv = np.where(small, deriv_s, (dl / (1.0 + dl) - lp) / (dl * dl))
    return value[()], deriv[()]


def _log1p_ratio_scalar(d):
    """Scalar ``log1p(d)/d`` for the 1-D solves."""
    if abs(d) < 0.1:
        # Horner form of sum (-d)^k / (k + 1)
        acc = 0.0
        for k in range(_SERIES_K[-1], -1, -1):
            acc = 1.0 / (k + 1) - d * acc
        return acc
    return math.log1p(d) / d


def _deflated_polar(c, t):
    """``r -> (log g_{t,theta}(r) - t) / (r - 2c)`` for fixed ``cos(theta) = c``.

    ``r = 2c`` is the trivial root (the circle ``|z - 1| = 1``). Near
    ``theta_t`` it merges with the wanted one, and ``log g - t`` only
    resolves that root to ``sqrt(eps)``; the quotient
    ``r log1p(d)/d - t/r`` with ``d = r(r - 2c)`` keeps full precision.
    """

    def f(r):
        return r * _log1p_ratio_scalar(r * (r - 2.0 * c)) - t / r

    return f


def _deflated_cartesian(x, t):
    """``D -> log1p(D)/D - t/(2x + D)`` with ``D = y**2 - x(2 - x)``.

    ``log g_{t,x}(y) - t`` vanishes on the circle ``|z - 1| = 1`` as well as
    on the curve; dividing out that root keeps the equation well
    conditioned near the critical point, where the two roots merge.
    """

    def f(d):
        return _log1p_ratio_scalar(d) - t / (2.0 * x + d)

    return f


@lru_cache(maxsize=256)
def solve_xt(t, tol=SOLVE_TOL):
    """Crossing ``x_t`` of the curve with the positive real axis.

    The unique root in ``(0, 1)`` of ``k_t(x) = (x - 1)^2 e^{t(2/x - 1)} = 1``.
    It increases with ``t``, behaves like ``sqrt(t)`` as ``t -> 0`` and
    exceeds ``3 - sqrt(5)`` only from ``t ~ 1.785`` on.
    """
    t = check_time(t)

    def f(x):
        # log k_t(x); k_t itself overflows for small x
        return 2.0 * math.log1p(-x) + t * (2.0 / x - 1.0)

    hi = 1.0 - 1e-12
    return find_root(f, expand_bracket(f, hi, 3.0 - math.sqrt(5.0), factor=0.5), tol)


def critical_point(t):
    """``z_c = sqrt(t) e^{i theta_t} = t/2 + i sqrt(t - t^2/4)``."""
    t = check_time(t)
    return complex(0.5 * t, math.sqrt(t - 0.25 * t * t))


def radius_outer(theta, t, tol=SOLVE_TOL):
    """Radius of the outer arc at polar angle ``theta in [theta_t, pi]``.

    For ``cos(theta) <= 0`` the constraint is increasing in ``r`` and the root
    exceeds ``sqrt(t)``. For ``theta in (theta_t, pi/2)`` the trivial root
    ``2 cos(theta)`` is followed by a minimum of ``g`` and then the wanted
    root; the bracket starts at that minimum.

    Raises
    ------
    DomainError
        If ``theta < theta_t`` (inner regime) or ``theta > pi``.
    """
    t = check_time(t)
    theta = float(theta)
    theta_t, _ = kernel.support_params(t)
    if theta < theta_t or theta > math.pi:
        raise DomainError(f"radius_outer needs theta in [theta_t, pi] = [{theta_t!r}, pi], got {theta!r}")
    if theta == theta_t:
        return math.sqrt(t)
    c = _cos(theta)
    if c <= 0.0:
        f = _log_g_polar(c, t)
        lo = math.sqrt(t)
        return find_root(f, expand_bracket(f, lo, 2.0 * lo), tol)
    # the root lies beyond the trivial one, 2c < sqrt(t) < r
    f = _deflated_polar(c, t)
    return find_root(f, expand_bracket(f, 2.0 * c, math.sqrt(t)), tol)


def _polar_inner(theta, t, tol):
    theta_t, _ = kernel.support_params(t)
    if not 0.0 <= theta <= theta_t:
        raise DomainError(f"polar inner arc needs theta in [0, theta_t] = [0, {theta_t!r}], got {theta!r}")
    if theta == theta_t:
        return critical_point(t)
    if theta == 0.0:
        return complex(solve_xt(t, tol), 0.0)
    c = _cos(theta)
    # the only root in (0, 2c) once the trivial root is divided out
    f = _deflated_polar(c, t)
    r = find_root(f, expand_bracket(f, 2.0 * c, c, factor=0.5), tol)
    return complex(r * math.cos(theta), r * math.sin(theta))


def _cartesian_solve(x, u, t, tol):
    """``(y, D)`` on the inner arc at ``x = x_t + u``; ``D`` is None on the axis half."""
    x_t = solve_xt(t)
    _, roots = kernel.g_cartesian(x, 0.0, t)
    if roots is None:
        raise ConstructionError("negative discriminant in the cartesian graph", regime=CARTESIAN_INNER, param=x)
    y_minus = roots[0]
    if u > 0.5 * (0.5 * t - x_t):
        # near z_c: solve for the offset from the circle
        y_circle = x * (2.0 - x)
        f = _deflated_cartesian(x, t)
        lo, hi = -y_circle, y_minus - y_circle
        f_lo, f_hi = f(lo), f(hi)
        if f_hi > 0.0 or f_lo < 0.0:
            raise ConstructionError("cartesian root not bracketed by [0, sqrt(y_t^-)]", regime=CARTESIAN_INNER, param=x)
        d = find_root(f, Bracket(lo, hi, f_lo, f_hi), tol * y_circle)
        return math.sqrt(y_circle + d), d
    f = _log_g_cartesian_sq(x_t, u, t)
    f0 = f(0.0)
    if f0 >= 0.0:
        return 0.0, None
    f1 = f(y_minus)
    if f1 < 0.0:
        raise ConstructionError("cartesian root not bracketed by [0, sqrt(y_t^-)]", regime=CARTESIAN_INNER, param=x)
    # y**2 vanishes like u at the axis, so the tolerance scales with u
    yy = find_root(f, Bracket(0.0, y_minus, f0, f1), tol * min(u, y_minus))
    return math.sqrt(yy), None


def _cartesian_inner(x, t, tol, u=None):
    x_t = solve_xt(t)
    if u is None:
        u = x - x_t
    if not 0.0 <= u <= 0.5 * t - x_t:
        raise DomainError(f"cartesian inner arc needs x in [x_t, t/2] = [{x_t!r}, {0.5 * t!r}], got {x!r}")
    if x == 0.5 * t:
        return critical_point(t)
    if u == 0.0:
        return complex(x_t, 0.0)
    y, _ = _cartesian_solve(x, u, t, tol)
    return complex(x, y)


def inner_regime(t):
    """Construction strategy of the inner arc at time ``t``."""
    return POLAR_INNER if t <= CARTESIAN_THRESHOLD else CARTESIAN_INNER


def inner_branch_point(s, t, regime=None, tol=SOLVE_TOL):
    """Point of the inner arc (``|z - 1| <= 1``) of the upper half-curve.

    Parameters
    ----------
    s : float
        Polar angle ``theta in [0, theta_t]`` in the polar regime, abscissa
        ``x in [x_t, t/2]`` in the Cartesian regime.
    t : float
        Diffusion time.
    regime : {"polar-inner", "cartesian-inner"}, optional
        Force a strategy. By default the polar one is used up to
        ``t = 2 + sqrt(3)`` and the Cartesian one above. The Cartesian graph
        is well defined whenever ``x_t < t/2``, which allows cross-checks
        just below the threshold.

    Returns
    -------
    complex
    """
    t = check_time(t)
    regime = inner_regime(t) if regime is None else regime
    if regime == POLAR_INNER:
        return _polar_inner(float(s), t, tol)
    if regime == CARTESIAN_INNER:
        return _cartesian_inner(float(s), t, tol)
    raise ValueError(f"unknown inner regime {regime!r}")


def involution(z):
    """Möbius involution ``z -> conj(z) / (conj(z) - 1)``.

    It maps each point of the curve to the other preimage of the same
    value of ``h_t`` and swaps the inside and outside of ``|z - 1| = 1``.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(z == 1):
        raise DomainError("involution is undefined at z = 1")
    zb = np.conj(z)
    return (zb / (zb - 1.0))[()]


@dataclass(frozen=True)
class CurveSample:
    """One stored point of the upper half of ``gamma_t``."""

    param: float
    z: complex
    regime: str
    residual: float
    phi: float
    r_prime: float


@dataclass(frozen=True, eq=False)
class SpectralCurve:
    """Sampled upper half of ``gamma_t``, ordered counter-clockwise.

    Samples run from ``(x_t, 0)`` through the critical point
    ``z[split_index]`` to the crossing with the negative real axis.
    ``dz_weights`` is a quadrature rule for the half-curve: for ``F``
    analytic near the curve, ``sum(F(z) * dz_weights)`` approximates the
    integral of ``F(z) dz`` along the stored half.
    """

    t: float
    x_t: float
    theta_t: float
    beta: float
    param: np.ndarray
    z: np.ndarray
    regime: np.ndarray
    residual: np.ndarray
    phi: np.ndarray
    r_prime: np.ndarray
    dz_weights: np.ndarray
    split_index: int

    def __len__(self):
        return len(self.z)

    @property
    def samples(self):
        return [
            CurveSample(float(p), complex(z), str(g), float(res), float(ph), float(rp))
            for p, z, g, res, ph, rp in zip(self.param, self.z, self.regime, self.residual, self.phi, self.r_prime)
        ]

    @property
    def inner_regime(self):
        return str(self.regime[0])

    @property
    def critical_point(self):
        return complex(self.z[self.split_index])

    def point_at(self, param, regime):
        """Re-solve the construction at ``param`` on the arc ``regime``."""
        if regime == POLAR_OUTER:
            r = radius_outer(param, self.t)
            return complex(r * math.cos(param), r * math.sin(param))
        return inner_branch_point(param, self.t, regime=regime)

    def full_curve(self):
        """Closed curve as one counter-clockwise array (lower half conjugated)."""
        lower = np.conj(self.z[-2:0:-1])
        return np.concatenate([self.z, lower])


def _polar_derivative(theta, z, t, theta_t):
    """``dz/d theta = (r' + i r) e^{i theta}``.

    ``r'`` comes from implicit differentiation of the deflated constraint
    (see :func:`_deflated_polar`), which stays well conditioned at
    ``theta_t`` where it equals ``t / (2 sin(theta_t))``.
    """
    r = np.abs(z)
    c, s = np.cos(theta), np.sin(theta)
    d = r * (r - 2.0 * c)
    phi, dphi = _log1p_ratio(d)
    f_r = phi + r * dphi * (2.0 * r - 2.0 * c) + t / (r * r)
    f_theta = 2.0 * r * r * s * dphi
    r_prime = -f_theta / f_r
    r_prime = np.where(theta == theta_t, t / (2.0 * math.sin(theta_t)), r_prime)
    return r_prime, (r_prime + 1j * r) * np.exp(1j * theta)


def _polar_nodes(a, b, n):
    nodes, weights = clenshaw_curtis(n, a, b)
    nodes[0], nodes[-1] = a, b
    return nodes, weights


def _solve_all(points, label, solver):
    out = np.empty(len(points), dtype=complex)
    for k, p in enumerate(points):
        try:
            out[k] = solver(p)
        except (DomainError, ConstructionError, RuntimeError, ValueError) as exc:
            raise ConstructionError(f"curve solve failed: {exc}", regime=label, param=float(p)) from exc
    return out


def _inner_polar_arc(t, n, theta_t):
    theta, w = _polar_nodes(0.0, theta_t, n)
    z = _solve_all(theta, POLAR_INNER, lambda th: _polar_inner(th, t, SOLVE_TOL))
    r_prime, dz = _polar_derivative(theta, z, t, theta_t)
    return theta, z, r_prime, w * dz


def _inner_cartesian_arc(t, n, x_t):
    length = 0.5 * t - x_t
    sigma, w = clenshaw_curtis(n, 0.0, 1.0)
    sigma[0], sigma[-1] = 0.0, 1.0
    u = length * sigma**2
    x = x_t + u
    x[0], x[-1] = x_t, 0.5 * t
    z = np.empty(len(x), dtype=complex)
    offset = np.full(len(x), np.nan)
    z[0], z[-1] = complex(x_t, 0.0), critical_point(t)
    for k in range(1, len(x) - 1):
        try:
            y_k, d_k = _cartesian_solve(x[k], u[k], t, SOLVE_TOL)
        except (DomainError, ConstructionError, RuntimeError, ValueError) as exc:
            raise ConstructionError(f"curve solve failed: {exc}", regime=CARTESIAN_INNER, param=float(x[k])) from exc
        z[k] = complex(x[k], y_k)
        if d_k is not None:
            offset[k] = d_k
    y, yy = z.imag, z.imag**2
    a = (1.0 - x) ** 2 + yy
    rho = x * x + yy
    g_x = 2.0 * (x - 1.0) / a + 2.0 * t * (yy - x * x) / rho**2
    g_yy = 1.0 / a - 2.0 * t * x / rho**2
    with np.errstate(divide="ignore", invalid="ignore"):
        dyy_dx = -g_x / g_yy
    # near z_c differentiate the deflated equation instead: the ratio above is 0/0 there
    for k in np.flatnonzero(~np.isnan(offset)):
        d, xk = offset[k], x[k]
        q = t / (2.0 * xk + d) ** 2
        dd_dx = -2.0 * q / (float(_log1p_ratio(d)[1]) + q)
        dyy_dx[k] = dd_dx + 2.0 - 2.0 * xk
    with np.errstate(divide="ignore", invalid="ignore"):
        dy_dsigma = dyy_dx * length * sigma / y
    # limits at the arc ends: square-root start on the axis, tangent along z_c - 1 at z_c
    dy_dsigma[0] = math.sqrt(dyy_dx[0] * length)
    zc = critical_point(t)
    dy_dsigma[-1] = 2.0 * length * (zc - 1.0).imag / (zc - 1.0).real
    dz = 2.0 * length * sigma + 1j * dy_dsigma
    return x, z, np.full(len(x), np.nan), w * dz


def _outer_arc(t, n, theta_t):
    n_a = n // 2
    n_b = n - n_a
    th_a, w_a = _polar_nodes(theta_t, 0.5 * math.pi, n_a)
    th_b, w_b = _polar_nodes(0.5 * math.pi, math.pi, n_b)
    theta = np.concatenate([th_a, th_b[1:]])
    weights = np.concatenate([w_a, w_b[1:]])
    weights[n_a] += w_b[0]

    def point(th):
        r = radius_outer(th, t, SOLVE_TOL)
        if th == math.pi:
            return complex(-r, 0.0)
        if th == 0.5 * math.pi:
            return complex(0.0, r)
        return complex(r * math.cos(th), r * math.sin(th))

    z = _solve_all(theta, POLAR_OUTER, point)
    z[0] = critical_point(t)
    r_prime, dz = _polar_derivative(theta, z, t, theta_t)
    return theta, z, r_prime, weights * dz


def build_curve(t, n_samples=4096):
    """Sample the upper half of ``gamma_t``.

    Parameters
    ----------
    t : float
        Diffusion time, ``0 < t < 4``.
    n_samples : int
        Total number of stored samples, at least 64. Roughly half go to each
        arc; the outer arc is split into two panels at ``theta = pi/2`` so
        that ``i sqrt(e^t - 1)`` is a sample.

    Returns
    -------
    SpectralCurve

    Raises
    ------
    DomainError
        For ``t`` outside ``(0, 4)``.
    ConstructionError
        If any 1-D solve fails; the message names the regime and parameter.
    """
    t = check_time(t)
    n_samples = int(n_samples)
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"build_curve needs n_samples >= {MIN_SAMPLES}")
    theta_t, beta = kernel.support_params(t)
    x_t = solve_xt(t)
    n_in = (n_samples - 1) // 2
    n_out = n_samples - 1 - n_in

    regime_in = inner_regime(t)
    if regime_in == POLAR_INNER:
        p_in, z_in, rp_in, dz_in = _inner_polar_arc(t, n_in, theta_t)
    else:
        p_in, z_in, rp_in, dz_in = _inner_cartesian_arc(t, n_in, x_t)
    p_out, z_out, rp_out, dz_out = _outer_arc(t, n_out, theta_t)

    split = n_in
    dz = np.concatenate([dz_in, dz_out[1:]])
    dz[split] += dz_out[0]
    z = np.concatenate([z_in, z_out[1:]])
    param = np.concatenate([p_in, p_out[1:]])
    r_prime = np.concatenate([rp_in, rp_out[1:]])
    regime = np.array([regime_in] * (n_in + 1) + [POLAR_OUTER] * n_out)

    g, _, _ = kernel.g_polar(np.abs(z), np.angle(z), t)
    residual = np.abs(g - math.exp(t))
    phi = kernel.arg_h_continuous(z, t)
    return SpectralCurve(
        t=t,
        x_t=x_t,
        theta_t=theta_t,
        beta=beta,
        param=param,
        z=z,
        regime=regime,
        residual=residual,
        phi=phi,
        r_prime=r_prime,
        dz_weights=dz,
        split_index=split,
    )


def critical_points(curve):
    """Critical point of ``arg h_t`` on the upper half-curve and its value.

    Returns ``(sqrt(t) e^{i theta_t}, -beta(t))`` after checking that the
    sampled ``arg h_t`` is minimal at the stored critical sample.
    """
    z_plus = critical_point(curve.t)
    k = int(np.argmin(curve.phi))
    if k != curve.split_index:
        raise ConstructionError(
            f"arg h_t is minimal at sample {k}, not at the critical sample {curve.split_index}",
            regime=str(curve.regime[k]),
            param=float(curve.param[k]),
        )
    return z_plus, -curve.beta


def split_curve(curve):
    """Index ranges of the inner (``|z-1| <= 1``) and outer branches.

    Both slices contain the critical sample. ``arg h_t`` must be strictly
    decreasing on the first and strictly increasing on the second; a
    violation means the curve is under-resolved.
    """
    s = curve.split_index
    gamma1, gamma2 = slice(0, s + 1), slice(s, len(curve))
    for name, sl, sign in (("inner", gamma1, -1.0), ("outer", gamma2, 1.0)):
        steps = sign * np.diff(curve.phi[sl])
        if not np.all(steps > 0):
            k = int(np.argmin(steps)) + sl.start
            raise ConstructionError(
                f"arg h_t not strictly monotone on the {name} branch",
                regime=str(curve.regime[k]),
                param=float(curve.param[k]),
            )
    return gamma1, gamma2
