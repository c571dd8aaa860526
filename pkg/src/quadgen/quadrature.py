"""Quadrature rules against the arcsine measure ``lambda_0``.

Two constructions are provided:

* interpolatory weights on arbitrary distinct nodes, from the moment system
  ``sum_j w_j T_k(x_j) = delta_{k0}`` in the Chebyshev basis;
* Gauss-type weights for the varying measure ``d lambda_0 / q``, rescaled by
  ``q(x_j)`` so that they integrate against ``lambda_0``.

Node sets that cluster towards the masses (small ``a``) make the moment system
very ill-conditioned at moderate ``n``. For those, :func:`interpolatory_rule`
switches to extended precision, regenerating the nodes and integrating the
Lagrange basis exactly with an ``(n + 1)``-point Gauss-Chebyshev rule.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, NamedTuple

import mpmath as mp
import numpy as np
from numpy.polynomial import chebyshev as C

from .measures import DiscreteMeasure, as_rational
from .nodes import NodeScheme

__all__ = [
    "IllConditionedWarning",
    "QuadratureRule",
    "PositivePolynomial",
    "PolyaStatistics",
    "interpolatory_weights",
    "interpolatory_rule",
    "varying_measure_weights",
    "exactness_degree",
    "chebyshev_moment_residuals",
    "apply",
    "polya_statistics",
    "gauss_chebyshev_rule",
]

COND_WARN = 1e12
# Above this the double-precision weights lose more digits than the
# acceptance tolerances allow, so "auto" goes to extended precision.
COND_AUTO = 1e8
_MP_START_DPS = 40
_MP_STEP = 20
_MP_MAX_DPS = 400


class IllConditionedWarning(RuntimeWarning):
    """The Chebyshev moment matrix is close to singular."""


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of an n-point rule for ``lambda_0``.

    Negative weights are allowed so that bad schemes can be studied; the
    diagnostics flag them.
    """

    nodes: tuple[float, ...]
    weights: tuple[float, ...]
    nominal_exactness: int | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        x = tuple(float(v) for v in self.nodes)
        w = tuple(float(v) for v in self.weights)
        if len(x) != len(w) or not x:
            raise ValueError("nodes and weights must be non-empty and of equal length")
        if not all(math.isfinite(v) for v in x + w):
            raise ValueError("nodes and weights must be finite")
        if any(b <= a for a, b in zip(x, x[1:])):
            raise ValueError("nodes must be strictly increasing")
        object.__setattr__(self, "nodes", x)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def x(self) -> np.ndarray:
        return np.array(self.nodes)

    @property
    def w(self) -> np.ndarray:
        return np.array(self.weights)

    def to_dict(self) -> dict:
        return {"nodes": list(self.nodes), "weights": list(self.weights),
                "m": self.nominal_exactness, "meta": self.meta}

    def to_json(self) -> str:
        # repr of a float round-trips exactly; json uses it.
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "QuadratureRule":
        doc = json.loads(text)
        return cls(tuple(doc["nodes"]), tuple(doc["weights"]), doc.get("m"), doc.get("meta") or {})

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["j", "x_j", "w_j"])
        for j, (x, w) in enumerate(zip(self.nodes, self.weights), start=1):
            wr.writerow([j, f"{x:.17g}", f"{w:.17g}"])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "QuadratureRule":
        rows = list(csv.DictReader(io.StringIO(text)))
        return cls(tuple(float(r["x_j"]) for r in rows), tuple(float(r["w_j"]) for r in rows))

    def save(self, path, fmt: str | None = None) -> None:
        path = Path(path)
        fmt = fmt or ("csv" if path.suffix == ".csv" else "json")
        path.write_text(self.to_csv() if fmt == "csv" else self.to_json())

    @classmethod
    def load(cls, path) -> "QuadratureRule":
        path = Path(path)
        text = path.read_text()
        return cls.from_csv(text) if path.suffix == ".csv" else cls.from_json(text)


class PositivePolynomial:
    """``q(x) = prod_k |x - zeta_k| ** e`` with ``e = 2 (1 - a) n / kappa``.

    ``e`` must be a non-negative integer. For conjugate-symmetric masses the
    product is the real polynomial ``prod_k (x - zeta_k) ** e`` up to sign, and
    the absolute value keeps it positive when ``kappa * e`` is odd. Values are
    handled in log space since ``q`` spans hundreds of orders of magnitude.
    """

    def __init__(self, measure: DiscreteMeasure | None, a, n: int):
        self.a = as_rational(a)
        if n < 1:
            raise ValueError("n must be a positive integer")
        self.n = int(n)
        if measure is None and self.a != 1:
            raise ValueError("a source measure is required when a < 1")
        self.measure = measure
        kappa = 1 if measure is None else measure.kappa
        e = 2 * (1 - self.a) * self.n / kappa
        if e.denominator != 1:
            raise ValueError(
                f"n={n} is off the integrality lattice: 2(1-a)n/kappa = {e} is not an integer"
            )
        self.exponent = int(e)
        self._zeta = None if measure is None else measure.zeta

    @property
    def degree(self) -> int:
        return 0 if self.measure is None else self.measure.kappa * self.exponent

    @property
    def nominal_exactness(self) -> int:
        return 2 * self.n - 1 - self.degree

    def log_value(self, x):
        x = np.asarray(x, dtype=float)
        if self.exponent == 0:
            return np.zeros_like(x)
        return self.exponent * np.sum(np.log(np.abs(x[..., None] - self._zeta)), axis=-1)

    def __call__(self, x):
        val = np.exp(self.log_value(x))
        return val if np.ndim(val) else float(val)

    def reference_log(self) -> float:
        """Minimum of ``log q`` on a fixed grid; used as a scale so that the
        discretized measure stays near unit size."""
        return float(np.min(self.log_value(np.linspace(-1.0, 1.0, 2049))))

    def is_positive(self, samples: int = 1000) -> bool:
        return bool(np.all(np.isfinite(self.log_value(np.linspace(-1.0, 1.0, samples)))))

    def __repr__(self):
        return f"PositivePolynomial(a={self.a}, n={self.n}, exponent={self.exponent})"


def _check_nodes(nodes) -> np.ndarray:
    x = np.asarray(nodes, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("nodes must be a non-empty 1-d sequence")
    if np.any(np.abs(x) >= 1.0):
        raise ValueError("nodes must lie in the open interval (-1, 1)")
    if np.unique(x).size != x.size:
        raise ValueError("duplicate nodes")
    return x


def interpolatory_weights(nodes, dps: int | None = None) -> np.ndarray:
    """Weights of the interpolatory rule on ``nodes`` for ``lambda_0``.

    Double precision solves ``V^T w = e_0`` with ``V`` the Chebyshev-Vandermonde
    matrix (LU with partial pivoting) and emits :class:`IllConditionedWarning`
    when its condition number exceeds 1e12. With ``dps`` the nodes are taken as
    exact and the Lagrange basis is integrated in ``dps``-digit arithmetic.
    """
    if dps is not None:
        x = _check_nodes([float(v) for v in nodes])
        with mp.workdps(dps):
            w, _ = _lagrange_weights_mp([mp.mpf(v) for v in x])
            return np.array([float(v) for v in w])
    w, cond = _weights_double(_check_nodes(nodes))
    if cond > COND_WARN:
        warnings.warn(f"Chebyshev moment matrix condition number {cond:.2e}; weights may be inaccurate",
                      IllConditionedWarning, stacklevel=2)
    return w


def _weights_double(x: np.ndarray):
    n = x.size
    V = C.chebvander(x, n - 1)
    rhs = np.zeros(n)
    rhs[0] = 1.0
    w = np.linalg.solve(V.T, rhs)
    return w, float(np.linalg.cond(V))


def _lagrange_weights_mp(x: list):
    """Integrate each Lagrange basis polynomial with the (n+1)-point
    Gauss-Chebyshev rule, which is exact for degree ``n - 1``. Returns the
    weights and the worst cancellation ratio ``sum |terms| / |sum|``."""
    n = len(x)
    N = n + 1
    while True:
        t = [mp.cos((2 * i - 1) * mp.pi / (2 * N)) for i in range(1, N + 1)]
        gap = min(abs(ti - xj) for ti in t for xj in x)
        if gap > mp.mpf(10) ** (-mp.mp.dps // 2):
            break
        N += 1
    dl = []
    for j in range(n):
        p = mp.mpf(1)
        for k in range(n):
            if k != j:
                p *= x[j] - x[k]
        dl.append(p)
    ell = []
    for ti in t:
        p = mp.mpf(1)
        for xk in x:
            p *= ti - xk
        ell.append(p)
    weights = []
    worst = mp.mpf(1)
    for j in range(n):
        terms = [ell[i] / ((t[i] - x[j]) * dl[j]) for i in range(N)]
        s = mp.fsum(terms)
        a = mp.fsum(abs(v) for v in terms)
        worst = max(worst, a / abs(s)) if s != 0 else mp.inf
        weights.append(s / N)
    return weights, worst


def _extended_weights(scheme: NodeScheme, n: int, tol: float = 1e-18):
    """Regenerate nodes and weights at increasing precision until two
    successive precisions agree to ``tol`` relative to the largest weight."""
    dps = _MP_START_DPS
    prev = None
    while dps <= _MP_MAX_DPS:
        with mp.workdps(dps):
            x = [mp.mpf(v) for v in scheme.nodes(n, dps=dps)]
            w, _ = _lagrange_weights_mp(x)
            xf = np.array([float(v) for v in x])
            wf = np.array([float(v) for v in w])
            if prev is not None:
                scale = max(abs(v) for v in w)
                if max(abs(a - b) for a, b in zip(w, prev)) <= tol * scale:
                    return xf, wf, dps
            prev = w
        dps += _MP_STEP
    raise RuntimeError(f"interpolatory weights did not stabilise up to {_MP_MAX_DPS} digits")


def interpolatory_rule(scheme: NodeScheme, n: int, precision: str = "auto") -> QuadratureRule:
    """Interpolatory rule on the nodes of ``scheme``.

    ``precision`` is ``"double"``, ``"extended"`` or ``"auto"``; the latter
    uses double precision unless the moment matrix condition number exceeds
    1e8, in which case the extended-precision path is taken.
    """
    if precision not in ("auto", "double", "extended"):
        raise ValueError(f"unknown precision {precision!r}")
    meta = dict(scheme.describe(), construction="interpolatory", dps=None)
    if precision != "extended":
        x = _check_nodes(scheme.nodes(n))
        w, cond = _weights_double(x)
        meta["cond"] = cond
        if precision == "double" or cond <= COND_AUTO:
            if cond > COND_WARN:
                warnings.warn(f"Chebyshev moment matrix condition number {cond:.2e}",
                              IllConditionedWarning, stacklevel=2)
            return QuadratureRule(tuple(x), tuple(w), n - 1, meta)
    x, w, dps = _extended_weights(scheme, n)
    meta["dps"] = dps
    return QuadratureRule(tuple(x), tuple(w), n - 1, meta)


def varying_measure_weights(pp: PositivePolynomial, n: int | None = None,
                            n_disc: int | None = None) -> QuadratureRule:
    """Gaussian rule for ``d lambda_0 / q`` turned into a rule for ``lambda_0``.

    The returned weights are ``q(x_j) * w~_j``; they are positive and the rule
    is exact for polynomials of degree ``2n - 1 - deg q``.
    """
    from .orthopoly import gauss_rule_from_recurrence, stieltjes_recurrence

    if n is not None and n != pp.n:
        raise ValueError(f"polynomial was built for n={pp.n}, got n={n}")
    n = pp.n
    rc = stieltjes_recurrence(pp, n, n_disc=n_disc)
    x, wt = gauss_rule_from_recurrence(rc, n)
    w = wt * np.exp(pp.log_value(x) - rc.log_scale)
    meta = {
        "a": str(pp.a),
        "masses": None if pp.measure is None else pp.measure.to_json(),
        "kind": "varying-measure",
        "exponent": pp.exponent,
        "n_disc": rc.n_disc,
    }
    return QuadratureRule(tuple(x), tuple(w), pp.nominal_exactness, meta)


def gauss_chebyshev_rule(n: int) -> QuadratureRule:
    """n-point Gauss rule for ``lambda_0``: Chebyshev zeros, weights ``1/n``."""
    x = np.sort(np.cos((2 * np.arange(1, n + 1) - 1) * math.pi / (2 * n)))
    return QuadratureRule(tuple(x), (1.0 / n,) * n, 2 * n - 1, {"kind": "gauss-chebyshev"})


def chebyshev_moment_residuals(rule: QuadratureRule, kmax: int | None = None) -> np.ndarray:
    """``|sum_j w_j T_k(x_j) - delta_{k0}|`` for ``k = 0..kmax`` (default ``2n - 1``)."""
    kmax = 2 * rule.n - 1 if kmax is None else kmax
    # chebvander builds T_k(x_j) by the three-term recurrence
    V = C.chebvander(rule.x, kmax)
    res = np.abs(rule.w @ V)
    res[0] = abs(math.fsum(rule.weights) - 1.0)
    return res


def exactness_degree(rule: QuadratureRule, tol: float | None = None) -> int:
    """Largest ``m <= 2n - 1`` with all Chebyshev moment residuals up to ``T_m``
    within ``tol``; ``-1`` if even the mass is off. ``tol`` defaults to
    ``1e-9 * sum |w_j|``."""
    if tol is None:
        tol = 1e-9 * float(np.sum(np.abs(rule.w)))
    res = chebyshev_moment_residuals(rule)
    bad = np.nonzero(res > tol)[0]
    return int(bad[0]) - 1 if bad.size else 2 * rule.n - 1


def apply(rule: QuadratureRule, f: Callable) -> float:
    """``sum_j w_j f(x_j)`` with exactly rounded summation."""
    x = rule.x
    try:
        vals = np.asarray(f(x), dtype=float)
        if vals.shape != x.shape:
            raise ValueError
    except (TypeError, ValueError):
        vals = np.array([float(f(v)) for v in rule.nodes])
    return math.fsum(w * v for w, v in zip(rule.weights, vals.tolist()))


class PolyaStatistics(NamedTuple):
    sum_abs: float
    min_weight: float
    num_negative: int


def polya_statistics(rule: QuadratureRule) -> PolyaStatistics:
    w = rule.weights
    return PolyaStatistics(math.fsum(abs(v) for v in w), min(w), sum(v < 0 for v in w))


def nominal_degree(a: Fraction, n: int) -> int:
    """``2 a n - 1`` rounded down; ``-1`` when ``a = 0``."""
    return math.floor(2 * as_rational(a) * n) - 1
