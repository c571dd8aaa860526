"""
Node families from the phase equation
======================================

Nodes are placed where the phase ``Phi(x) = pi * nu([x, 1])`` hits the
odd multiples of ``pi / (2n)``. For a single real mass the equation has
explicit solutions when ``a`` is 0, 1/2 or 1; for anything else it is solved
numerically. This script compares the two and shows what the admissibility
check does with node sets that follow the wrong distribution.
"""

import numpy as np

from quadgen.measures import DiscreteMeasure
from quadgen.nodes import (
    NodeScheme,
    PhaseFunction,
    admissibility_check,
    closed_form_nodes,
    interlaces,
    phase_nodes,
)

m = DiscreteMeasure.single(3.0)
n = 8

for a in ("0", "1/2", "1"):
    pf = PhaseFunction.from_measure(m, a)
    num = phase_nodes(pf, n)
    exact = closed_form_nodes(a, 3.0, n)
    print(f"a={a:>3}  nodes {np.array2string(num, precision=4)}  "
          f"max diff {np.max(np.abs(num - exact)):.1e}")

# Smaller a pushes the nodes towards the mass at +3.
print("mean node, a=0 / 1/2 / 1:",
      [round(float(np.mean(closed_form_nodes(a, 3.0, 40))), 4) for a in ("0", "1/2", "1")])

# Consecutive node sets interlace.
pf = PhaseFunction.from_measure(m, "1/2")
print("interlacing up to n=64:", all(interlaces(phase_nodes(pf, k - 1), phase_nodes(pf, k)) for k in range(2, 65)))

# A mass that is not real, and a mixing weight without explicit formulas.
pair = DiscreteMeasure((2 + 2j, 2 - 2j))
pf_pair = PhaseFunction.from_measure(pair, "2/5")
print("pair, a=2/5:", np.array2string(phase_nodes(pf_pair, 6), precision=5))

# Node sets with the wrong limit distribution are rejected.
arcsine = PhaseFunction.from_measure(None, 1)
for k in (8, 16, 32):
    rep = admissibility_check(NodeScheme("equispaced", 1).nodes(k), arcsine, n=k)
    print(f"equispaced n={k}: max phase deviation {rep.max_deviation:.3f}, admissible={rep.passed}")
swept = PhaseFunction.from_measure(m, 0)
rep = admissibility_check(NodeScheme("chebyshev", 1).nodes(16), swept, n=16)
print(f"Chebyshev nodes under the a=0 phase: deviation {rep.max_deviation:.3f}, admissible={rep.passed}")
