"""
Herglotz transform and moment generating function
=================================================

Inside the disk the density is seen through the Poisson kernel. The moment
series gives the same smoothed density, and the generating function
M_t(w) = sum m_n w^n can be evaluated directly as a contour integral over the
spectral curve.
"""

import numpy as np

from fubm import build_curve, density_table, herglotz_re, mgf_contour, moment_sequence, poisson_integral

t = 1.0
curve = build_curve(t, 4096)
table = density_table(curve, 2001)

theta = np.linspace(-np.pi, np.pi, 9)
for r in (0.5, 0.9):
    series = herglotz_re(r, theta, t, 500)
    smoothed = poisson_integral(table, r, theta)
    print(f"r = {r}: max |series - Poisson| = {np.max(np.abs(series - smoothed)):.2e}")

for w in (0.3, -0.6, 0.4 + 0.3j):
    series = sum(m * w**n for n, m in enumerate(moment_sequence(t, 200), start=1))
    print(f"M_t({w}) = {mgf_contour(w, curve):.15f}, series gap {abs(mgf_contour(w, curve) - series):.1e}")
