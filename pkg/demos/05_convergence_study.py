"""
Convergence study
==================

``run_study`` builds the interpolatory rule for each ``n`` and records the
Polya statistic, the measured degree of exactness and the errors on three
test integrands: ``exp``, the Runge function and ``|x|``. Pass a path to
write the report as CSV.
"""

import sys

from quadgen.diagnostics import run_study
from quadgen.measures import DiscreteMeasure
from quadgen.nodes import NodeScheme

m = DiscreteMeasure.single(3.0)
n_values = [8, 16, 32, 64]

schemes = {
    "phase a=0": NodeScheme("phase", 0, m),
    "phase a=1/2": NodeScheme("phase", "1/2", m),
    "chebyshev": NodeScheme("chebyshev", 1),
    "equispaced": NodeScheme("equispaced", 1),
}

for name, scheme in schemes.items():
    rep = run_study(scheme, n_values)
    print(f"\n{name}: polya_bounded={rep.polya_bounded} "
          f"positive_beyond={rep.all_positive_beyond_N} errors_decreasing={rep.errors_decreasing}")
    for r in rep.records:
        errs = "  ".join(f"{k}={v:.1e}" for k, v in r.errors.items())
        print(f"  n={r.n:3d}  sum|w|={r.sum_abs_weights:.3e}  exact={r.measured_exactness:3d}  {errs}")
    if len(sys.argv) > 1:
        with open(f"{sys.argv[1]}_{name.replace(' ', '_').replace('/', '-')}.csv", "w") as fh:
            fh.write(rep.to_csv())
