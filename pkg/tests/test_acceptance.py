"""Acceptance criteria, one pass/fail line each.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import ACCEPTANCE_LINES, GRID, SAMPLES, T_GRID, THRESHOLD_GRID, get_curve, get_table  # noqa: E402

from fubm.curve import build_curve, solve_xt  # noqa: E402
from fubm.errors import DomainError  # noqa: E402
from fubm.moments import mgf_contour, moment_contour, moment_density, moment_sequence, moment_sum  # noqa: E402
from fubm.spectrum import herglotz_re, poisson_integral  # noqa: E402
from fubm.verify import branch_checks, curve_checks, density_checks  # noqa: E402

NMAX = 30
XT_GRID = tuple(0.25 * k for k in range(1, 16))
HERGLOTZ_THETAS = np.linspace(-math.pi, math.pi, 721)


class Outcome:
    """Named residuals against thresholds for one criterion."""

    def __init__(self):
        self.items = []

    def add(self, name, residual, threshold, strict=False):
        residual = float(residual)
        ok = residual < threshold if strict else residual <= threshold
        self.items.append((name, residual, threshold, bool(ok)))

    @property
    def passed(self):
        return all(ok for *_, ok in self.items)

    def worst(self):
        # report every failing item, or the tightest passing one
        bad = [it for it in self.items if not it[3]]
        if bad:
            return "; ".join(f"{n} {r:.3g} > {th:.3g}" for n, r, th, _ in bad)
        n, r, th, _ = max(self.items, key=lambda it: it[1] / it[2] if it[2] > 0 else 0.0)
        return f"worst {n} {r:.3g} (limit {th:.3g})"


def _record(k, title, outcome, extra=""):
    verdict = "PASS" if outcome.passed else "FAIL"
    line = f"CRITERION {k}: {verdict}  {title}  [{outcome.worst()}]{extra}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return outcome


def _moments_triple(out, t):
    m_sum = np.array([moment_sum(n, t) for n in range(1, NMAX + 1)])
    m_con = np.array([moment_contour(n, t) for n in range(1, NMAX + 1)])
    m_den = np.array([moment_density(n, get_table(t)) for n in range(1, NMAX + 1)])
    out.add(f"contour t={t:g}", np.max(np.abs(m_con - m_sum)), 1e-9)
    out.add(f"density t={t:g}", np.max(np.abs(m_den - m_sum)), 1e-6)


def _curve_fidelity(out, t):
    checks = {c.name: c.residual for c in curve_checks(get_curve(t), 1e-8)}
    out.add(f"|h|-1 t={t:g}", checks["abs_h_unit"], 1e-9)
    for name in ("passes_x_t", "passes_critical_point", "passes_imaginary_axis"):
        out.add(f"{name} t={t:g}", checks[name], 1e-8)
    out.add(f"samples on cut t={t:g}", checks["avoids_cut"], 0.0)


def _support_density(out, t):
    for c in density_checks(get_table(t), 1e-6):
        out.add(f"{c.name} t={t:g}", c.residual, c.threshold)
    curve = get_curve(t)
    out.add(f"min arg h + beta t={t:g}", abs(float(np.min(curve.phi)) + curve.beta), 1e-8)


def _branch_identities(out, t):
    for c in branch_checks(get_curve(t), 1e-9):
        out.add(f"{c.name} t={t:g}", c.residual, c.threshold)


def criterion_1():
    start = time.perf_counter()
    out = Outcome()
    for t in T_GRID:
        _moments_triple(out, t)
    elapsed = time.perf_counter() - start
    return _record(1, "moment triple agreement", out, f"  {elapsed:.1f}s")


def criterion_2():
    out = Outcome()
    for t in T_GRID:
        _curve_fidelity(out, t)
    return _record(2, "curve fidelity", out)


def criterion_3():
    out = Outcome()
    for t in T_GRID:
        _support_density(out, t)
    return _record(3, "support and density", out)


def criterion_4():
    out = Outcome()
    for t in T_GRID:
        _branch_identities(out, t)
    return _record(4, "branch and involution identities", out)


def criterion_5():
    out = Outcome()
    for t in T_GRID:
        m1 = math.exp(-t / 2)
        out.add(f"m1 sum t={t:g}", abs(moment_sum(1, t) - m1), 1e-12)
        out.add(f"m1 contour t={t:g}", abs(moment_contour(1, t) - m1), 1e-12)
        out.add(f"m1 density t={t:g}", abs(moment_density(1, get_table(t)) - m1), 1e-12)
    out.add("m2(1) sum", abs(moment_sum(2, 1.0)), 1e-10)
    out.add("m2(1) contour", abs(moment_contour(2, 1.0)), 1e-10)
    xs = np.array([solve_xt(t) for t in XT_GRID])
    lower = 3.0 - math.sqrt(5.0)
    for t, x in zip(XT_GRID, xs):
        # residual is how far x_t sits from the open interval, negative inside
        out.add(f"x_t > 3-sqrt5 t={t:g}", lower - x, 0.0, strict=True)
        out.add(f"x_t < 1 t={t:g}", x - 1.0, 0.0, strict=True)
    out.add("x_t increasing", -float(np.min(np.diff(xs))), 0.0, strict=True)
    return _record(5, "known closed forms", out)


def criterion_6():
    out = Outcome()
    for t in T_GRID:
        gap = max(abs(moment_contour(n, t, 0.3) - moment_contour(n, t, 0.7)) for n in range(1, NMAX + 1))
        out.add(f"radius 0.3 vs 0.7 t={t:g}", gap, 1e-10)
    return _record(6, "contour-radius independence", out)


def criterion_7():
    out = Outcome()
    for t in T_GRID:
        a = herglotz_re(0.9, HERGLOTZ_THETAS, t, 500)
        b = poisson_integral(get_table(t), 0.9, HERGLOTZ_THETAS)
        out.add(f"herglotz vs poisson t={t:g}", np.max(np.abs(a - b)), 1e-6)
    return _record(7, "Herglotz consistency", out)


def criterion_8():
    out = Outcome()
    for t in (1.0, 2.0, 3.0):
        series = sum(m * 0.3**n for n, m in enumerate(moment_sequence(t, 200), start=1))
        out.add(f"mgf t={t:g}", abs(mgf_contour(0.3 + 0j, get_curve(t)) - series), 1e-8)
    return _record(8, "M_t(w) representation", out)


def criterion_9():
    out = Outcome()
    for t in THRESHOLD_GRID:
        _moments_triple(out, t)
        _curve_fidelity(out, t)
        _support_density(out, t)
        _branch_identities(out, t)
    try:
        build_curve(4.0, SAMPLES)
        rejected = False
    except DomainError:
        rejected = True
    out.add("t=4 rejected", 0.0 if rejected else 1.0, 0.0)
    return _record(9, "regime-threshold sanity", out)


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9)


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda f: f.__name__)
def test_acceptance(criterion):
    outcome = criterion()
    assert outcome.passed, outcome.worst()


if __name__ == "__main__":
    print(f"samples {SAMPLES}, density grid {GRID}")
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(r.passed for r in results) else 1)
