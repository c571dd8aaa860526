"""Convergence studies over a range of ``n`` for a node scheme."""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Mapping

import numpy as np

from .measures import EquilibriumMeasure
from .nodes import NodeScheme, admissibility_check
from .quadrature import (
    QuadratureRule,
    apply,
    exactness_degree,
    gauss_chebyshev_rule,
    interpolatory_rule,
    nominal_degree,
    polya_statistics,
)

__all__ = [
    "DEFAULT_INTEGRANDS",
    "NRecord",
    "ConvergenceReport",
    "reference_integral",
    "run_study",
    "weak_star_distance",
]

REFERENCE_POINTS = 10_000
POLYA_SLACK = 1e-6


def _runge(x):
    return 1.0 / (1.0 + 25.0 * np.asarray(x) ** 2)


DEFAULT_INTEGRANDS: dict[str, Callable] = {
    "exp": np.exp,
    "runge": _runge,
    "abs": np.abs,
}

_REFERENCE_RULE: QuadratureRule | None = None


def reference_integral(f: Callable, points: int = REFERENCE_POINTS) -> float:
    """``int f d lambda_0`` by a ``points``-node Gauss-Chebyshev rule."""
    global _REFERENCE_RULE
    if points == REFERENCE_POINTS:
        if _REFERENCE_RULE is None:
            _REFERENCE_RULE = gauss_chebyshev_rule(points)
        return apply(_REFERENCE_RULE, f)
    return apply(gauss_chebyshev_rule(points), f)


def weak_star_distance(nodes, em: EquilibriumMeasure, grid_points: int = 2048) -> float:
    """Sup over a uniform grid of ``|#{x_j >= x}/n - nu([x, 1])|``."""
    x = np.sort(np.asarray(nodes, dtype=float))
    grid = np.linspace(-1.0, 1.0, grid_points)
    empirical = (x.size - np.searchsorted(x, grid, side="left")) / x.size
    return float(np.max(np.abs(empirical - np.asarray(em.cdf(grid)))))


@dataclass
class NRecord:
    n: int
    sum_abs_weights: float = math.nan
    min_weight: float = math.nan
    num_negative: int = -1
    measured_exactness: int = -2
    nominal_exactness: int = -1
    errors: dict = field(default_factory=dict)
    cdf_distance: float = math.nan
    phase_deviation: float = math.nan
    weight_sum: float = math.nan
    dps: int | None = None
    failure: str | None = None

    @property
    def ok(self) -> bool:
        return self.failure is None


@dataclass
class ConvergenceReport:
    scheme: dict
    records: list[NRecord]
    integrands: list[str]
    polya_bounded: bool
    all_positive_beyond_N: int | None
    errors_decreasing: bool

    @property
    def passed(self) -> bool:
        return (self.polya_bounded and self.all_positive_beyond_N is not None
                and self.errors_decreasing and all(r.ok for r in self.records))

    def record(self, n: int) -> NRecord:
        for r in self.records:
            if r.n == n:
                return r
        raise KeyError(n)

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "integrands": self.integrands,
            "verdicts": {
                "polya_bounded": self.polya_bounded,
                "all_positive_beyond_N": self.all_positive_beyond_N,
                "errors_decreasing": self.errors_decreasing,
            },
            "records": [asdict(r) for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["n", "integrand", "error", "sum_abs_weights", "min_weight", "num_negative",
                     "measured_exactness", "nominal_exactness", "cdf_distance", "phase_deviation"])
        for r in self.records:
            for name in self.integrands:
                wr.writerow([r.n, name, _fmt(r.errors.get(name, math.nan)), _fmt(r.sum_abs_weights),
                             _fmt(r.min_weight), r.num_negative, r.measured_exactness,
                             r.nominal_exactness, _fmt(r.cdf_distance), _fmt(r.phase_deviation)])
        return buf.getvalue()


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _one_record(scheme: NodeScheme, n: int, refs: Mapping[str, float],
                integrands: Mapping[str, Callable], precision: str) -> NRecord:
    rec = NRecord(n)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            rule = interpolatory_rule(scheme, n, precision=precision)
        stats = polya_statistics(rule)
        rec.sum_abs_weights = stats.sum_abs
        rec.min_weight = stats.min_weight
        rec.num_negative = stats.num_negative
        rec.weight_sum = math.fsum(rule.weights)
        rec.measured_exactness = exactness_degree(rule)
        rec.nominal_exactness = nominal_degree(scheme.a, n)
        rec.dps = rule.meta.get("dps")
        rec.errors = {k: abs(apply(rule, f) - refs[k]) for k, f in integrands.items()}
        if scheme.measure is not None or scheme.a == 1:
            pf = scheme.phase_function()
            rec.cdf_distance = weak_star_distance(rule.nodes, pf.em)
            rec.phase_deviation = admissibility_check(rule.nodes, pf, scheme.A, scheme.ell, n).max_deviation
    except Exception as exc:  # recorded, the study goes on
        rec.failure = f"{type(exc).__name__}: {exc}"
    return rec


def run_study(scheme: NodeScheme, n_values, integrands: Mapping[str, Callable] | None = None,
              precision: str = "auto", workers: int | None = None) -> ConvergenceReport:
    """Build the interpolatory rule for each ``n`` and collect diagnostics.

    Verdicts: ``polya_bounded`` (every ``sum |w| <= 1 + 1e-6``),
    ``all_positive_beyond_N`` (smallest ``n`` after which every rule has
    positive weights, ``None`` if the last one does not) and
    ``errors_decreasing`` (last error below the first, per integrand).
    """
    n_values = sorted(int(n) for n in n_values)
    if not n_values or n_values[0] < 1:
        raise ValueError("n_values must be positive integers")
    integrands = dict(DEFAULT_INTEGRANDS if integrands is None else integrands)
    refs = {k: reference_integral(f) for k, f in integrands.items()}
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            records = list(pool.map(lambda n: _one_record(scheme, n, refs, integrands, precision), n_values))
    else:
        records = [_one_record(scheme, n, refs, integrands, precision) for n in n_values]

    good = [r for r in records if r.ok]
    polya = bool(good) and all(r.sum_abs_weights <= 1.0 + POLYA_SLACK for r in good)
    beyond = None
    for r in reversed(records):
        if not r.ok or r.num_negative != 0:
            break
        beyond = r.n
    decreasing = len(good) >= 2 and all(good[-1].errors[k] < good[0].errors[k] for k in integrands)
    return ConvergenceReport(scheme.describe(), records, list(integrands), polya, beyond, decreasing)
