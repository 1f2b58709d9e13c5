import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fubm.errors import DomainError
from fubm.moments import (
    MomentReport,
    contour_nodes,
    mgf_contour,
    moment_contour,
    moment_density,
    moment_report,
    moment_sequence,
    moment_sum,
)
from fubm.spectrum import herglotz_re

from conftest import T_GRID

# e^{-nt/2} L_{n-1}^{(1)}(nt) / n evaluated by mpmath at 40 digits
LAGUERRE_ORACLE = {
    (3, 1.0): -0.1115650800742149144666402,
    (5, 2.0): -0.01572187633119942322548411,
    (10, 3.0): -0.006058526558533160521177882,
    (30, 3.9): -0.001957953753815593532463704,
    (25, 0.5): 0.005220878027207528366632943,
    (64, 3.9): -0.0007930977564249951276413177,
}
# sum_{n < 200} m_n(t) 0.3^n from the same oracle
MGF_ORACLE = {1.0: 0.1793599011414310300344823, 2.0: 0.09945336672351357295714961}


def test_moment_sum_closed_forms():
    for t in (0.1, 1.0, 3.9):
        assert moment_sum(1, t) == pytest.approx(math.exp(-t / 2), rel=1e-15)
    assert moment_sum(2, 1.0) == 0.0
    for t in (0.5, 2.0, 3.0):
        assert moment_sum(2, t) == pytest.approx(math.exp(-t) * (1 - t), rel=1e-15)


@pytest.mark.parametrize("key", sorted(LAGUERRE_ORACLE))
def test_moment_sum_oracle(key):
    n, t = key
    assert abs(moment_sum(n, t) - LAGUERRE_ORACLE[key]) < 1e-17


def test_moment_sum_small_time_limit():
    for n in (1, 5, 30):
        assert abs(moment_sum(n, 1e-9) - 1) < 1e-6


@settings(max_examples=30)
@given(st.integers(1, 64), st.floats(0.01, 3.99))
def test_moment_sum_bounded(n, t):
    assert abs(moment_sum(n, t)) <= 1.0


def test_moment_sum_domain():
    with pytest.raises(DomainError, match="n_max"):
        moment_sum(65, 1.0)
    assert moment_sum(65, 1.0, n_max=100) == pytest.approx(moment_contour(65, 1.0), abs=1e-15)
    with pytest.raises(DomainError):
        moment_sum(0, 1.0)
    with pytest.raises(DomainError, match="t < 4"):
        moment_sum(1, 4.0)


def test_moment_sequence():
    seq = moment_sequence(2.0, 40)
    assert len(seq) == 40
    assert seq[4] == moment_sum(5, 2.0)


@pytest.mark.parametrize("t", [0.5, 2.0, 3.9])
def test_contour_matches_sum(t):
    for n in (1, 2, 7, 19, 30):
        m = moment_contour(n, t)
        assert abs(m.real - moment_sum(n, t)) < 1e-15
        assert abs(m.imag) < 1e-15


def test_contour_radius_independence():
    for n in (1, 10, 30):
        a, b = moment_contour(n, 3.9, 0.3), moment_contour(n, 3.9, 0.7)
        assert abs(a - b) < 1e-15


def test_contour_node_doubling_at_spectral_floor():
    # 64 + 8n nodes suffice at the default radius while n t stays moderate
    for t in (0.5, 1.0, 2.0):
        for n in (1, 10, 30):
            nodes = 64 + 8 * n
            assert abs(moment_contour(n, t, nodes=nodes) - moment_contour(n, t, nodes=2 * nodes)) < 1e-10


def test_contour_automatic_nodes_are_converged():
    for t, r in ((3.9, 0.3), (3.99, 0.5)):
        n = 30
        nodes = contour_nodes(n, t, r)
        assert nodes % 2 == 0 and nodes >= 16 * n
        assert abs(moment_contour(n, t, r, nodes) - moment_contour(n, t, r, 2 * nodes)) < 1e-15


def test_contour_domain():
    with pytest.raises(DomainError):
        moment_contour(3, 1.0, radius=1.0)
    with pytest.raises(DomainError):
        moment_contour(3, 1.0, radius=0.0)
    with pytest.raises(ValueError):
        moment_contour(3, 1.0, nodes=32)


@pytest.mark.parametrize("t", T_GRID)
def test_density_moments(tables, t):
    tab = tables(t)
    assert abs(moment_density(0, tab) - 1) < 1e-12
    assert abs(moment_density(1, tab) - math.exp(-t / 2)) < 1e-12
    for n in (2, 9, 30):
        m = moment_density(n, tab)
        assert abs(m.imag) < 1e-9
        assert m == pytest.approx(np.conj(moment_density(-n, tab)), abs=1e-16)
        assert abs(m.real - moment_sum(n, t)) < 1e-6


@pytest.mark.parametrize("t", sorted(MGF_ORACLE))
def test_mgf_oracle(curves, t):
    assert abs(mgf_contour(0.3, curves(t)) - MGF_ORACLE[t]) < 1e-15


@pytest.mark.parametrize("t", T_GRID)
def test_mgf_properties(curves, t):
    c = curves(t)
    assert mgf_contour(0, c) == 0
    for w in (0.5, -0.7):
        assert abs(mgf_contour(w, c).imag) < 1e-10
    w = 0.4 + 0.3j
    series = sum(m * w**n for n, m in enumerate(moment_sequence(t, 200), start=1))
    assert abs(mgf_contour(w, c) - series) < 1e-13
    assert mgf_contour(np.conj(w), c) == pytest.approx(np.conj(mgf_contour(w, c)), abs=1e-15)
    with pytest.raises(DomainError):
        mgf_contour(1.0, c)


def test_mgf_matches_herglotz(curves):
    # 1 + 2 M_t(w) is the Herglotz transform; its real part on a real radius
    t = 2.0
    r = 0.6
    assert abs(1 + 2 * mgf_contour(r, curves(t)).real - herglotz_re(r, 0.0, t, 200)) < 1e-13


def test_moment_report(tables):
    rep = moment_report(4, tables(1.0))
    assert isinstance(rep, MomentReport)
    assert rep.max_discrepancy < 1e-12
    row = rep.as_row()
    assert list(row) == [
        "n",
        "t",
        "m_sum",
        "m_contour_re",
        "m_contour_im",
        "m_density_re",
        "m_density_im",
        "max_discrepancy",
    ]
