"""
Crossing t = 2 + sqrt(3)
========================

Above 2 + sqrt(3) the inner arc is no longer a graph over the polar angle,
so it is traced as a graph over x instead. The landmarks and the density
look the same on either side of the switch.
"""

import math

import numpy as np

from fubm import build_curve, density_table
from fubm.errors import DomainError
from fubm.kernel import h_eval

for t in (2 + math.sqrt(3) - 0.05, 2 + math.sqrt(3) + 0.05, 3.99):
    curve = build_curve(t, 4096)
    table = density_table(curve, 2001)
    err = np.max(np.abs(np.abs(h_eval(curve.z, t)) - 1))
    print(f"t = {t:.4f}  inner arc {curve.inner_regime:13s}  ||h|-1| {err:.1e}  normalization {table.normalization:.15f}")

try:
    build_curve(4.0)
except DomainError as exc:
    print("t = 4:", exc)
