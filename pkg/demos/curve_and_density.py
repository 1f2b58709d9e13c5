"""
The spectral curve and the density at a single time
====================================================

Trace the level set |h_t| = 1, read off its landmarks, then turn the outer
branch into the density on the support [-beta, beta].
"""

import math

import numpy as np

from fubm import build_curve, density_table, split_curve
from fubm.kernel import h_eval

t = 2.0
curve = build_curve(t, 4096)
print(f"t = {t}: theta_t = {curve.theta_t:.12f}, beta = {curve.beta:.12f}, x_t = {curve.x_t:.12f}")

# the curve crosses the real axis at x_t, passes sqrt(t) e^{i theta_t} and hits the imaginary axis at i sqrt(e^t - 1)
print("worst ||h| - 1| on the samples:", np.max(np.abs(np.abs(h_eval(curve.z, t)) - 1)))
print("distance to sqrt(t) e^{i theta_t}:", np.min(np.abs(curve.z - math.sqrt(t) * np.exp(1j * curve.theta_t))))
print("distance to i sqrt(e^t - 1):", np.min(np.abs(curve.z - 1j * math.sqrt(math.expm1(t)))))

# arg h runs monotonically on each side of |z - 1| = 1 and bottoms out at -beta
inner, outer = split_curve(curve)
print(f"{inner.stop - inner.start} inner and {outer.stop - outer.start} outer samples, min arg h = {curve.phi.min():.12f}")

table = density_table(curve, 2001)
print("normalization:", table.normalization)
print("rho at the centre, closed form:", table.rho[1000], math.log(1 / (1 - curve.x_t)) / (math.pi * t))

# a coarse text picture of the density
for theta, rho in zip(table.thetas[::200], table.rho[::200]):
    print(f"{theta:+.3f} {'#' * int(round(60 * rho))}")
