"""Orthogonal polynomials for the varying measure ``d lambda_0 / q``.

Recurrence coefficients come from a discretized Stieltjes procedure on a
Gauss-Chebyshev grid (exact for the arcsine factor, so only ``1/q`` is being
approximated). Gaussian nodes and weights are eigen-data of the Jacobi
matrix, extracted with an implicit-shift QL iteration that tracks only the
first row of the eigenvector matrix.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .measures import DiscreteMeasure, EquilibriumMeasure, as_rational
from .nodes import PhaseFunction, phase_nodes

if TYPE_CHECKING:
    from .quadrature import PositivePolynomial

__all__ = [
    "MomentDegeneracyError",
    "RecurrenceCoefficients",
    "AsymptoticEnvelope",
    "DecayReport",
    "discretize",
    "stieltjes",
    "stieltjes_recurrence",
    "tridiagonal_eigen",
    "gauss_rule_from_recurrence",
    "monic_values",
    "orthogonality_residuals",
    "envelope_K1",
    "envelope_K2",
    "compare_asymptotics",
]

_DISC_FLOOR = 200
_MAX_DISC = 1 << 18


class MomentDegeneracyError(ArithmeticError):
    """A non-positive recurrence coefficient beta_k appeared."""


@dataclass(frozen=True)
class RecurrenceCoefficients:
    """Monic recurrence ``p_{k+1} = (x - alpha_k) p_k - beta_k p_{k-1}``.

    ``beta[0]`` is the total mass of the measure scaled by ``exp(log_scale)``;
    the scaling cancels in every quadrature rule built from the coefficients.
    """

    alpha: np.ndarray
    beta: np.ndarray
    log_scale: float = 0.0
    n_disc: int | None = None

    def __len__(self):
        return len(self.alpha)

    @property
    def mass(self) -> float:
        return float(self.beta[0] * math.exp(-self.log_scale))

    def to_json(self) -> dict:
        return {
            "alpha": [float(v) for v in self.alpha],
            "beta": [float(v) for v in self.beta],
            "log_scale": self.log_scale,
            "n_disc": self.n_disc,
        }


def _disc_floor() -> int:
    raw = os.environ.get("QUADGEN_DISC_POINTS")
    if raw is None:
        return _DISC_FLOOR
    try:
        val = int(raw)
    except ValueError as exc:
        raise ValueError(f"QUADGEN_DISC_POINTS must be an integer, got {raw!r}") from exc
    if val < 1:
        raise ValueError("QUADGEN_DISC_POINTS must be positive")
    return val


def discretize(pp: "PositivePolynomial", n_disc: int, log_scale: float | None = None):
    """Gauss-Chebyshev abscissas ``t`` and weights ``exp(log_scale) / (N q(t))``."""
    i = np.arange(1, n_disc + 1)
    t = np.cos((2 * i - 1) * math.pi / (2 * n_disc))
    if log_scale is None:
        log_scale = pp.reference_log()
    w = np.exp(log_scale - pp.log_value(t)) / n_disc
    return t, w, log_scale


def stieltjes(t: np.ndarray, w: np.ndarray, n: int):
    """Stieltjes procedure for the discrete measure ``sum_i w_i delta_{t_i}``.

    Returns ``n + 1`` coefficient pairs. Polynomial vectors are rescaled each
    step so that high degrees do not underflow.
    """
    if n + 1 > len(t):
        raise ValueError("discrete measure has too few points for the requested degree")
    alpha = np.empty(n + 1)
    beta = np.empty(n + 1)
    p_prev = np.zeros_like(t)
    p = np.ones_like(t)
    norm2 = float(np.dot(w, p * p))
    beta[0] = norm2
    for k in range(n + 1):
        alpha[k] = np.dot(w, t * p * p) / norm2
        if k == n:
            break
        b = beta[k] if k else 0.0
        p_next = (t - alpha[k]) * p - b * p_prev
        norm2_next = float(np.dot(w, p_next * p_next))
        # a norm at rounding level of its own terms means the support is exhausted
        size = np.abs(t - alpha[k]) * np.abs(p) + b * np.abs(p_prev)
        floor = 64 * np.finfo(float).eps ** 2 * float(np.dot(w, size * size))
        if not norm2_next > floor or not math.isfinite(norm2_next):
            raise MomentDegeneracyError(f"moment degeneracy at k={k + 1} (beta={norm2_next / norm2:.3e})")
        beta[k + 1] = norm2_next / norm2
        c = 1.0 / math.sqrt(norm2_next)
        p_prev, p, norm2 = p * c, p_next * c, 1.0
    return alpha, beta


def stieltjes_recurrence(pp: "PositivePolynomial", n: int, n_disc: int | None = None,
                         tol: float = 1e-12) -> RecurrenceCoefficients:
    """Recurrence coefficients of ``d lambda_0 / q`` up to degree ``n``.

    The discretization starts at ``max(floor, 8n, n_disc)`` points (floor 200,
    overridable through ``QUADGEN_DISC_POINTS``) and doubles until alpha and
    beta change by less than ``tol`` (beta relatively).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    N = max(_disc_floor(), 8 * n, n_disc or 0, n + 1)
    log_scale = pp.reference_log()
    t, w, _ = discretize(pp, N, log_scale)
    alpha, beta = stieltjes(t, w, n)
    while True:
        N2 = 2 * N
        if N2 > _MAX_DISC:
            raise RuntimeError("discretized Stieltjes procedure did not converge")
        t, w, _ = discretize(pp, N2, log_scale)
        alpha2, beta2 = stieltjes(t, w, n)
        change = max(np.max(np.abs(alpha2 - alpha)), np.max(np.abs(beta2 / beta - 1.0)))
        alpha, beta, N = alpha2, beta2, N2
        if change < tol:
            break
    return RecurrenceCoefficients(alpha, beta, log_scale, N)


def tridiagonal_eigen(diag, offdiag, max_sweeps: int = 50):
    """Eigenvalues and first eigenvector components of a symmetric tridiagonal matrix.

    Implicit-shift QL (Wilkinson shift). Only the first row of the eigenvector
    matrix is accumulated, which is all Golub-Welsch needs. Results are sorted
    ascending.
    """
    d = [float(v) for v in diag]
    n = len(d)
    if len(offdiag) != max(n - 1, 0):
        raise ValueError("off-diagonal must have length n - 1")
    e = [float(v) for v in offdiag] + [0.0]
    z = [0.0] * n
    if n:
        z[0] = 1.0
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            if sweeps == max_sweeps:
                raise RuntimeError(f"QL iteration did not converge for eigenvalue {l}")
            sweeps += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                f = z[i + 1]
                z[i + 1] = s * z[i] + c * f
                z[i] = c * z[i] - s * f
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    order = np.argsort(d, kind="stable")
    return np.asarray(d)[order], np.asarray(z)[order]


def gauss_rule_from_recurrence(rc: RecurrenceCoefficients, n: int):
    """n-point Gaussian rule (nodes ascending, weights ``beta_0 * v_0**2``)."""
    if n < 1 or n > len(rc.alpha):
        raise ValueError(f"need 1 <= n <= {len(rc.alpha)}")
    offdiag = np.sqrt(rc.beta[1:n])
    nodes, first = tridiagonal_eigen(rc.alpha[:n], offdiag)
    return nodes, rc.beta[0] * first**2


def monic_values(rc: RecurrenceCoefficients, k: int, x):
    """Value of the monic orthogonal polynomial of degree ``k`` at ``x``."""
    x = np.asarray(x, dtype=float)
    p_prev = np.zeros_like(x)
    p = np.ones_like(x)
    for j in range(k):
        p_prev, p = p, (x - rc.alpha[j]) * p - (rc.beta[j] if j else 0.0) * p_prev
    return p


def orthogonality_residuals(pp: "PositivePolynomial", rc: RecurrenceCoefficients, k: int):
    """``|<q_k, x^v>| / ||q_k||^2`` for ``v = 0..k-1`` on the refined grid."""
    N = rc.n_disc or max(_disc_floor(), 8 * k)
    t, w, _ = discretize(pp, N, rc.log_scale)
    qk = monic_values(rc, k, t)
    norm2 = float(np.dot(w, qk * qk))
    return np.array([abs(np.dot(w, qk * t**v)) / norm2 for v in range(k)])


@dataclass(frozen=True)
class AsymptoticEnvelope:
    """Leading-order forms of the degree ``n`` and ``n - 1`` polynomials.

    ``K1 = 2 cos(n Phi(x))`` and ``K2 = cos(n Phi(x) - arccos x)``; the
    amplitude is ``exp(-n V(x))`` with ``V`` the equilibrium potential.
    """

    em: EquilibriumMeasure
    n: int

    @property
    def phase(self) -> PhaseFunction:
        return PhaseFunction(self.em)

    def K1(self, x):
        return 2.0 * np.cos(self.n * np.asarray(self.phase(x)))

    def K2(self, x):
        x = np.asarray(x, dtype=float)
        return np.cos(self.n * np.asarray(self.phase(x)) - np.arccos(x))

    def log_amplitude(self, x):
        return -self.n * np.asarray(self.em.potential(x))


def envelope_K1(env: AsymptoticEnvelope, x):
    val = env.K1(x)
    return val if np.ndim(val) else float(val)


def envelope_K2(env: AsymptoticEnvelope, x):
    val = env.K2(x)
    return val if np.ndim(val) else float(val)


@dataclass
class DecayReport:
    a: str
    masses: list
    n: list[int] = field(default_factory=list)
    d_n: list[float] = field(default_factory=list)
    sup_dev: list[float] = field(default_factory=list)
    ratio_min: list[float] = field(default_factory=list)
    ratio_max: list[float] = field(default_factory=list)
    slope: float = float("nan")
    skipped: list[int] = field(default_factory=list)

    @property
    def strictly_decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.d_n, self.d_n[1:]))

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, default=_jsonable)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "d_n", "sup_dev", "ratio_min", "ratio_max"])
        for row in zip(self.n, self.d_n, self.sup_dev, self.ratio_min, self.ratio_max):
            w.writerow([row[0]] + [f"{v:.17g}" for v in row[1:]])
        return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def compare_asymptotics(measure: DiscreteMeasure | None, a, n_list, grid_points: int = 2001,
                        interior: float = 0.95, n_disc: int | None = None) -> DecayReport:
    """Zeros of the varying-measure orthogonal polynomials against phase nodes.

    For each ``n`` on the integrality lattice records
    ``d_n = max_j |x_{j,n} - y_{j,n}|`` and the sup over ``|x| <= interior``,
    ``|K1(x)| > 1/2`` of ``|q_n(x) exp(n V(x)) / K1(x) - 1|``. The slope of
    ``log d_n`` against ``n`` is fitted by least squares.
    """
    from .quadrature import PositivePolynomial

    a = as_rational(a)
    em = EquilibriumMeasure.from_measure(measure, a)
    pf = PhaseFunction(em)
    rep = DecayReport(str(a), None if measure is None else measure.to_json())
    grid = np.linspace(-interior, interior, grid_points)
    for n in n_list:
        try:
            pp = PositivePolynomial(measure, a, n)
        except ValueError:
            rep.skipped.append(n)
            continue
        rc = stieltjes_recurrence(pp, n, n_disc=n_disc)
        zeros, _ = gauss_rule_from_recurrence(rc, n)
        y = phase_nodes(pf, n)
        env = AsymptoticEnvelope(em, n)
        k1 = env.K1(grid)
        keep = np.abs(k1) > 0.5
        diff = grid[keep][:, None] - zeros[None, :]
        sign = np.where(np.sum(diff < 0, axis=1) % 2, -1.0, 1.0)
        log_q = np.sum(np.log(np.abs(diff)), axis=1)
        ratio = sign * np.exp(log_q + n * np.asarray(em.potential(grid[keep]))) / k1[keep]
        rep.n.append(n)
        rep.d_n.append(float(np.max(np.abs(zeros - y))))
        rep.sup_dev.append(float(np.max(np.abs(ratio - 1.0))) if ratio.size else float("nan"))
        rep.ratio_min.append(float(ratio.min()) if ratio.size else float("nan"))
        rep.ratio_max.append(float(ratio.max()) if ratio.size else float("nan"))
    if len(rep.n) < 3:
        raise ValueError("insufficient data for rate fit")
    logs = np.log(np.maximum(rep.d_n, np.finfo(float).tiny))
    rep.slope = float(np.polyfit(rep.n, logs, 1)[0])
    return rep
