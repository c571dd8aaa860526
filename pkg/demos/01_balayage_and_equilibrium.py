"""
Balayage of a point mass and the equilibrium measure
=====================================================

A unit mass at ``zeta = 3`` is swept onto [-1, 1]. The swept measure keeps
the arcsine-type endpoint behaviour but leans towards the side facing the
mass. Mixing it with the arcsine law gives the equilibrium measure whose
quantiles are the quadrature nodes.
"""

import numpy as np

from quadgen.measures import (
    DiscreteMeasure,
    EquilibriumMeasure,
    balayage_density,
    balayage_potential,
    balayage_tail,
    green_constant,
    potential,
)

m = DiscreteMeasure.single(3.0)

# density and right tail on a few interior points
x = np.array([-0.9, -0.5, 0.0, 0.5, 0.9])
print("x        density   tail")
for xi, d, t in zip(x, balayage_density(m, x), balayage_tail(m, x)):
    print(f"{xi:5.2f}  {d:9.6f}  {t:8.6f}")

# more than half of the mass sits on the right half of the interval
print("mass of [0, 1]:", balayage_tail(m, 0.0))

# The potential of the swept measure differs from that of the point mass by
# a constant on the interval: the Green function of the exterior domain
# evaluated at the mass.
for xi in (-0.7, 0.2, 0.95):
    print(f"x={xi:5.2f}  V_bal - V_src = {balayage_potential(m, xi) - potential(m, xi):.12f}")
print("log|phi(3)| =", green_constant(m))

# A conjugate pair behaves the same way, one constant for the whole pair.
pair = DiscreteMeasure((2 + 2j, 2 - 2j))
print("pair offset:", balayage_potential(pair, 0.3) - potential(pair, 0.3), "vs", green_constant(pair))

# Equilibrium measures for the three classical mixing weights.
for a in ("0", "1/2", "1"):
    em = EquilibriumMeasure.from_measure(m, a)
    print(f"a={a:>3}: mass of [0, 1] = {em.cdf(0.0):.6f}")
