"""
Interpolatory weights on phase nodes
=====================================

The interpolatory rule on phase nodes has positive weights, so the sum of
absolute weights stays at 1 and the rules converge for every continuous
integrand. Equally spaced nodes are the classical counterexample.

For ``a = 0`` the nodes crowd towards +1 and the Chebyshev moment matrix
becomes nearly singular around ``n = 64`` (condition number near 1e17). The
weights themselves are harmless, but double precision cannot recover them, so
``interpolatory_rule`` regenerates nodes and weights in extended precision.
"""

import warnings

from quadgen.measures import DiscreteMeasure
from quadgen.nodes import NodeScheme
from quadgen.quadrature import exactness_degree, interpolatory_rule, polya_statistics

m = DiscreteMeasure.single(3.0)

print(" a    n   sum|w|     min w      negatives  exactness  digits")
for a in ("0", "1/2", "1"):
    for n in (8, 16, 32, 64):
        rule = interpolatory_rule(NodeScheme("phase", a, m), n)
        s = polya_statistics(rule)
        print(f"{a:>3} {n:4d}  {s.sum_abs:.12f}  {s.min_weight:.3e}  {s.num_negative:4d}"
              f"       {exactness_degree(rule):4d}     {rule.meta['dps'] or 'double'}")

# What plain double precision gives for the hardest case.
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    bad = interpolatory_rule(NodeScheme("phase", "0", m), 64, precision="double")
print("\ndouble precision, a=0, n=64: min weight", min(bad.weights),
      "| warning:", caught[0].message if caught else None)

# Equally spaced nodes: Runge's phenomenon in the weights.
for n in (8, 16, 24, 32):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        s = polya_statistics(interpolatory_rule(NodeScheme("equispaced", 1), n))
    print(f"equispaced n={n:2d}: sum|w| = {s.sum_abs:.3e}, negatives = {s.num_negative}")
