"""
Moments three ways
==================

The trigonometric moments m_n(t) come from an exact finite sum, from a
residue integral around the origin and from integrating the density. The
three agree, and the residue integral does not care about its radius.
"""

from fubm import build_curve, density_table, moment_contour, moment_density, moment_sum

t = 3.0
table = density_table(build_curve(t, 4096), 2001)

print(" n          m_sum         contour-sum     density-sum")
for n in (1, 2, 5, 10, 20, 30):
    s = moment_sum(n, t)
    c = moment_contour(n, t)
    d = moment_density(n, table)
    print(f"{n:2d} {s:+.15e} {abs(c - s):.2e}        {abs(d - s):.2e}")

# the finite sum alternates with huge terms, so it is done in exact integers
print("m_64(3.9) =", moment_sum(64, 3.9))

# any radius inside the unit disk gives the same contour value
print("radius 0.3 vs 0.7 at n = 30:", abs(moment_contour(30, t, 0.3) - moment_contour(30, t, 0.7)))
