r"""Closed-form scalar functions behind the spectral curve.

Everything here is a pure function of its arguments and accepts either
Python scalars or numpy arrays. Nothing in this module solves equations or
integrates; see :mod:`fubm.numerics` and :mod:`fubm.curve` for that.

The central object is

.. math:: h_t(z) = (1 - z)\, e^{t(1/z - 1/2)},

whose unit-modulus level set contains the Jordan curve :math:`\gamma_t`.
Writing :math:`z = r e^{i\theta}`, the condition :math:`|h_t(z)| = 1` becomes
:math:`g_{t,\theta}(r) = e^t` with

.. math:: g_{t,\theta}(r) = (1 + r^2 - 2 r\cos\theta)\, e^{2t\cos\theta / r}.
"""

import numpy as np

from .errors import DomainError, check_time

__all__ = [
    "h_eval",
    "log_h",
    "h_logderiv",
    "arg_h_continuous",
    "g_polar",
    "log_g_polar",
    "v_polar",
    "g_cartesian",
    "k_cartesian",
    "support_params",
]

# below this radius the exponential factor is assembled in log space
_LOG_SPACE_RADIUS = 1e-3


def _as_complex(z):
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise DomainError("z = 0 is an essential singularity of h_t")
    return z


def h_eval(z, t):
    """Evaluate ``h_t(z) = (1 - z) exp(t (1/z - 1/2))``.

    Parameters
    ----------
    z : complex or array_like
        Evaluation point(s); must be nonzero.
    t : float
        Diffusion time, ``0 < t < 4``.

    Returns
    -------
    complex or ndarray
    """
    t = check_time(t)
    z = _as_complex(z)
    with np.errstate(over="ignore"):
        out = (1.0 - z) * np.exp(t * (1.0 / z - 0.5))
    return out[()]


def log_h(z, t):
    """Principal ``log(1 - z) + t (1/z - 1/2)``.

    Its imaginary part is :func:`arg_h_continuous` and its real part is
    ``log|h_t(z)|``. Finite even where ``h_t`` itself overflows.
    """
    t = check_time(t)
    z = _as_complex(z)
    with np.errstate(divide="ignore"):
        out = np.log(1.0 - z) + t * (1.0 / z - 0.5)
    return out[()]


def h_logderiv(z, t):
    """Logarithmic derivative ``h_t'(z)/h_t(z) = -1/(1 - z) - t/z**2``."""
    t = check_time(t)
    z = _as_complex(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -1.0 / (1.0 - z) - t / (z * z)
    return out[()]


def arg_h_continuous(z, t):
    """Argument of ``h_t(z)`` that is continuous off ``{0} U [1, inf)``.

    Computed as ``arg(1 - z) + t Im(1/z)`` with the principal ``arg`` in
    ``(-pi, pi]``. In the open upper half-plane the value is negative.

    Raises
    ------
    DomainError
        If ``z = 0`` or ``z`` lies on the cut ``[1, inf)``.
    """
    t = check_time(t)
    z = _as_complex(z)
    if np.any((z.imag == 0) & (z.real >= 1.0)):
        raise DomainError("arg h_t is discontinuous on the cut [1, inf)")
    out = np.angle(1.0 - z) + t * (1.0 / z).imag
    return out[()]


def _scaled_exp(factor, exponent, r):
    """``factor * exp(exponent)``, in log space where ``r`` is tiny."""
    factor, exponent, r = np.broadcast_arrays(
        np.asarray(factor, dtype=float), np.asarray(exponent, dtype=float), np.asarray(r, dtype=float)
    )
    out = np.empty(factor.shape)
    small = r < _LOG_SPACE_RADIUS
    with np.errstate(over="ignore", divide="ignore"):
        out[~small] = factor[~small] * np.exp(exponent[~small])
        f, e = factor[small], exponent[small]
        out[small] = np.sign(f) * np.exp(np.log(np.abs(f)) + e)
    return out


def g_polar(r, theta, t):
    """Polar form of the constraint ``|h_t(r e^{i theta})|**2 e^t``.

    Parameters
    ----------
    r : float or array_like
        Radius, strictly positive.
    theta : float or array_like
        Polar angle.
    t : float
        Diffusion time.

    Returns
    -------
    value, d_r, d_theta : float or ndarray
        ``g_{t,theta}(r)`` and its partial derivatives in ``r`` and ``theta``.
    """
    t = check_time(t)
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("g_polar requires r > 0")
    c, s = np.cos(theta), np.sin(theta)
    quad = 1.0 + r * r - 2.0 * r * c
    expo = 2.0 * t * c / r
    value = _scaled_exp(quad, expo, r)
    d_r = _scaled_exp(2.0 * (r - c - quad * t * c / (r * r)), expo, r)
    d_theta = _scaled_exp((2.0 * s / r) * (r * r - t * quad), expo, r)
    return value[()], d_r[()], d_theta[()]


def log_g_polar(r, theta, t):
    """``log g_{t,theta}(r) - t``; zero exactly on the level set ``|h_t| = 1``."""
    t = check_time(t)
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("log_g_polar requires r > 0")
    c = np.cos(theta)
    with np.errstate(divide="ignore"):
        out = np.log(1.0 + r * r - 2.0 * r * c) + 2.0 * t * c / r - t
    return out[()]


def v_polar(r, theta, t):
    """Cubic ``v`` with ``d g/d r = exp(2 t cos(theta)/r) v(r) / r**2``.

    ``v(r) = r^3 - (t+1) cos(theta) r^2 + 2 t cos(theta)^2 r - t cos(theta)``.
    """
    t = check_time(t)
    c = np.cos(theta)
    r = np.asarray(r, dtype=float)
    out = ((r - (t + 1.0) * c) * r + 2.0 * t * c * c) * r - t * c
    return out[()]


def g_cartesian(x, y, t):
    """Cartesian form of the constraint and the roots of its derivative factor.

    Parameters
    ----------
    x, y : float
        Point ``z = x + i y``, not the origin.
    t : float
        Diffusion time.

    Returns
    -------
    value : float
        ``(1 + x^2 + y^2 - 2x) exp(2 t x / (x^2 + y^2))``.
    w_roots : tuple of float or None
        ``(y_minus, y_plus) = x(t - x) -+ sqrt(t x (2 + (t - 4) x))``, the
        roots (in ``y**2``) of the quartic factor of ``dg/dy``; ``None``
        when the discriminant is negative.
    """
    t = check_time(t)
    x, y = float(x), float(y)
    rr = x * x + y * y
    if rr == 0.0:
        raise DomainError("g_cartesian is undefined at the origin")
    value = float(_scaled_exp(1.0 + rr - 2.0 * x, 2.0 * t * x / rr, np.sqrt(rr)))
    disc = t * x * (2.0 + (t - 4.0) * x)
    if disc < 0:
        return value, None
    root = np.sqrt(disc)
    return value, (x * (t - x) - root, x * (t - x) + root)


def k_cartesian(x, t):
    """``k_t(x) = (x - 1)^2 exp(t (2/x - 1))`` and its derivative.

    ``k_t`` is the constraint restricted to the real axis; its unique root
    of ``k_t = 1`` in ``(0, 1)`` is where the curve crosses the positive
    real axis.

    Returns
    -------
    value, d_x : float or ndarray
    """
    t = check_time(t)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("k_cartesian requires x > 0")
    expo = t * (2.0 / x - 1.0)
    value = _scaled_exp((x - 1.0) ** 2, expo, x)
    d_x = _scaled_exp(2.0 * (x - 1.0) * (x * x - t * x + t) / (x * x), expo, x)
    return value[()], d_x[()]


def support_params(t):
    """Critical angle and support half-width.

    Returns
    -------
    theta_t : float
        ``arccos(sqrt(t)/2)``, polar angle of the critical point of
        ``arg h_t`` on the curve.
    beta : float
        ``sqrt(t (4 - t))/2 + arccos(1 - t/2)``; the spectral measure is
        supported on ``|theta| <= beta``.
    """
    t = check_time(t, allow_four=True)
    theta_t = float(np.arccos(np.sqrt(t) / 2.0))
    beta = float(0.5 * np.sqrt(t * (4.0 - t)) + np.arccos(1.0 - t / 2.0))
    return theta_t, beta
