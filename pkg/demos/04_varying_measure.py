"""
Gauss rules for a varying measure
==================================

Dividing the arcsine measure by ``q(x) = |x - 3| ** (2 (1 - a) n)`` and
taking the n-point Gauss rule of the result gives nodes that, rescaled by
``q``, integrate polynomials of degree ``2an - 1`` against the arcsine
measure with positive weights.

Whenever ``a > 0`` the polynomial ``q`` has degree below ``2n``, so the
weight is of Bernstein-Szego type: the degree-n orthogonal polynomial equals
its leading-order asymptotic form exactly, and the Gauss nodes coincide with
the phase nodes up to rounding. The exponential closeness between the two
node sets therefore shows up as a gap at machine precision.
"""

import numpy as np

from quadgen.measures import DiscreteMeasure, EquilibriumMeasure
from quadgen.nodes import PhaseFunction, phase_nodes
from quadgen.orthopoly import compare_asymptotics, stieltjes_recurrence
from quadgen.quadrature import PositivePolynomial, exactness_degree, varying_measure_weights

m = DiscreteMeasure.single(3.0)

print(" a     n  deg q  nominal  measured  min w")
for a in ("0", "1/4", "1/2", "3/4", "1"):
    for n in (8, 16):
        pp = PositivePolynomial(m, a, n)
        rule = varying_measure_weights(pp)
        print(f"{a:>4} {n:3d}  {pp.degree:5d}  {pp.nominal_exactness:7d}  {exactness_degree(rule):8d}"
              f"  {min(rule.weights):.3e}")

# The first recurrence coefficients; beta_0 carries an arbitrary scale.
rc = stieltjes_recurrence(PositivePolynomial(m, "1/2", 6), 6)
print("\nalpha:", np.array2string(rc.alpha, precision=6))
print("beta :", np.array2string(rc.beta[1:], precision=6))

# Zeros against phase nodes, and the envelope ratio q_n exp(nV) / K1.
rep = compare_asymptotics(m, "1/2", [4, 8, 12, 16, 20])
print("\n n   d_n        sup |ratio - 1|")
for n, d, s in zip(rep.n, rep.d_n, rep.sup_dev):
    print(f"{n:3d}  {d:.2e}   {s:.2e}")

# A conjugate pair behaves the same way.
pair = DiscreteMeasure((2 + 2j, 2 - 2j))
rep = compare_asymptotics(pair, "1/2", [4, 8, 12, 16, 20])
print("\npair 2+-2i, a=1/2:  d_n =", ", ".join(f"{d:.2e}" for d in rep.d_n))
em = EquilibriumMeasure.from_measure(pair, "1/2")
y = phase_nodes(PhaseFunction(em), 8)
print("phase nodes n=8:", np.array2string(y, precision=5))
