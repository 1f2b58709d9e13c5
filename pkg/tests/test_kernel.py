import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fubm import kernel
from fubm.errors import DomainError

times = st.floats(0.05, 3.95)
angles = st.floats(-math.pi, math.pi)


def test_h_at_x_t_is_one():
    x1 = 0.6478249393398833  # root of (x-1)^2 e^{2/x-1} = 1, mpmath findroot at 40 digits
    assert abs(kernel.h_eval(x1, 1.0) - 1.0) < 1e-14


@given(times)
def test_h_at_critical_point(t):
    theta_t, beta = kernel.support_params(t)
    z = math.sqrt(t) * complex(math.cos(theta_t), math.sin(theta_t))
    assert abs(abs(kernel.h_eval(z, t)) - 1.0) < 1e-12
    assert abs(kernel.arg_h_continuous(z, t) + beta) < 1e-12


@given(times, st.floats(0.01, 20.0))
def test_negative_axis_gives_positive_h(t, r):
    z = -r + 0j
    assert kernel.arg_h_continuous(z, t) == 0.0
    assert kernel.h_eval(z, t).real > 0


def test_arg_zero_on_unit_interval():
    x = np.linspace(0.01, 0.99, 50)
    assert np.all(kernel.arg_h_continuous(x, 2.0) == 0.0)


def test_h_domain_errors():
    with pytest.raises(DomainError):
        kernel.h_eval(0.0, 1.0)
    with pytest.raises(DomainError):
        kernel.arg_h_continuous(1.5, 1.0)
    with pytest.raises(DomainError, match="t < 4"):
        kernel.h_eval(0.5, 4.0)
    with pytest.raises(DomainError):
        kernel.h_eval(0.5, 0.0)


@given(times, angles, st.floats(0.05, 5.0))
def test_log_h_matches_h(t, theta, r):
    z = r * complex(math.cos(theta), math.sin(theta))
    if abs(z.imag) < 1e-9 and z.real >= 1:
        return
    lh = kernel.log_h(z, t)
    h = kernel.h_eval(z, t)
    assert abs(math.exp(lh.real) - abs(h)) <= 1e-11 * max(1.0, abs(h))


@settings(max_examples=60)
@given(times, st.floats(-1.4, 1.4), st.floats(0.2, 4.0))
def test_g_polar_derivatives(t, theta, r):
    value, d_r, d_th = kernel.g_polar(r, theta, t)
    eps = 1e-6
    fd_r = (kernel.g_polar(r + eps, theta, t)[0] - kernel.g_polar(r - eps, theta, t)[0]) / (2 * eps)
    fd_th = (kernel.g_polar(r, theta + eps, t)[0] - kernel.g_polar(r, theta - eps, t)[0]) / (2 * eps)
    scale = max(1.0, abs(value)) / min(1.0, r) ** 3
    assert abs(d_r - fd_r) <= 1e-6 * scale
    assert abs(d_th - fd_th) <= 1e-6 * scale


@given(times, st.floats(-1.5, 1.5))
def test_g_polar_trivial_root(t, theta):
    c = math.cos(theta)
    if c < 0.05:
        return
    value, d_r, _ = kernel.g_polar(2 * c, theta, t)
    assert abs(value / math.exp(t) - 1.0) < 1e-12
    assert abs(d_r - (4 * c * c - t) / (2 * c) * math.exp(t)) <= 1e-10 * math.exp(t) / c


def test_g_polar_vanishes_at_origin_for_negative_cosine():
    values = [kernel.g_polar(r, 2.5, 1.0)[0] for r in (0.1, 0.03, 0.01)]
    assert values[0] > values[1] > values[2] > 0
    assert values[2] < 1e-60
    assert kernel.g_polar(1e-4, 2.5, 1.0)[0] == 0.0


@given(times, st.floats(0.2, 4.0))
def test_log_g_and_v(t, r):
    theta = 0.4
    value, d_r, _ = kernel.g_polar(r, theta, t)
    assert abs(kernel.log_g_polar(r, theta, t) - (math.log(value) - t)) < 1e-12
    expected = math.exp(2 * t * math.cos(theta) / r) * kernel.v_polar(r, theta, t) / r**2
    assert abs(d_r - 2 * expected) <= 1e-10 * max(1.0, abs(d_r))


@given(times, st.floats(0.01, 1.99))
def test_g_cartesian_on_circle(t, x):
    value, _ = kernel.g_cartesian(x, math.sqrt(x * (2 - x)), t)
    assert abs(value / math.exp(t) - 1.0) < 1e-12


@given(times, st.floats(0.05, 3.0))
def test_g_cartesian_on_axis(t, x):
    value, _ = kernel.g_cartesian(x, 0.0, t)
    k, _ = kernel.k_cartesian(x, t)
    # 1 + x^2 - 2x cancels near x = 1, hence the absolute floor
    assert abs(value - k * math.exp(t)) <= 1e-12 * value + 1e-14 * math.exp(t)


def test_g_cartesian_roots_positive_in_regime():
    t = 3.9
    x_t = 0.9053602384525177
    for x in np.linspace(x_t, 2.0, 40):
        _, roots = kernel.g_cartesian(x, 0.1, t)
        assert roots is not None
        assert 0 < roots[0] <= roots[1]


def test_k_cartesian_values():
    assert kernel.k_cartesian(1.0, 2.5)[0] == 0.0
    assert kernel.k_cartesian(2.0, 2.5)[0] == 1.0
    assert kernel.k_cartesian(1e-3, 1.0)[0] > 1e300
    x = 0.7
    eps = 1e-7
    fd = (kernel.k_cartesian(x + eps, 1.3)[0] - kernel.k_cartesian(x - eps, 1.3)[0]) / (2 * eps)
    assert abs(kernel.k_cartesian(x, 1.3)[1] - fd) < 1e-7


def test_support_params():
    theta_t, beta = kernel.support_params(2.0)
    assert abs(theta_t - math.pi / 4) < 1e-15
    assert abs(beta - (1 + math.pi / 2)) < 1e-15
    theta_t, beta = kernel.support_params(4.0)
    assert theta_t == 0.0
    assert abs(beta - math.pi) < 1e-15
    theta_t, beta = kernel.support_params(1e-10)
    assert abs(theta_t - math.pi / 2) < 1e-4
    assert beta < 1e-4
    with pytest.raises(DomainError):
        kernel.support_params(4.5)
