"""Node systems defined by level sets of the equilibrium phase.

The phase is ``Phi(x) = pi * nu([x, 1])``, strictly decreasing from ``pi`` at
``x = -1`` to ``0`` at ``x = 1``. Node ``x_j`` (ascending) solves
``Phi(x_j) = (2(n - j) + 1) pi / (2n)``, i.e. the nodes are the midpoint
quantiles of the equilibrium measure. Solving is done in the angle
``theta = arccos(x)`` where the phase is smooth with derivative bounded away
from zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp
import numpy as np

from .measures import DiscreteMeasure, EquilibriumMeasure, as_rational

__all__ = [
    "PhaseFunction",
    "NodeScheme",
    "AdmissibilityReport",
    "phase_targets",
    "phase_nodes",
    "closed_form_nodes",
    "perturb_nodes",
    "admissibility_check",
    "interlaces",
]

_NEWTON_TOL = 1e-15
_MAX_ITER = 200


@dataclass(frozen=True)
class PhaseFunction:
    """``Phi(x) = (1 - a) pi sigma_tilde([x, 1]) + a arccos(x)``."""

    em: EquilibriumMeasure

    @classmethod
    def from_measure(cls, m: DiscreteMeasure | None, a) -> "PhaseFunction":
        return cls(EquilibriumMeasure.from_measure(m, a))

    @property
    def a(self) -> Fraction:
        return self.em.a

    def __call__(self, x):
        val = math.pi * np.asarray(self.em.cdf(x))
        return val if val.ndim else float(val)

    def of_theta(self, theta):
        return math.pi * np.asarray(self.em.cdf_theta(theta))

    def dtheta(self, theta):
        """Derivative with respect to the angle; equals ``pi`` times the
        equilibrium density in that variable."""
        return math.pi * np.asarray(self.em.theta_density(theta))

    def derivative(self, x):
        """``dPhi/dx = -pi * nu'(x)`` on (-1, 1)."""
        return -math.pi * np.asarray(self.em.density(x))

    # extended precision, via the closed-form primitive of the Poisson kernel

    def _mp_data(self):
        m = self.em.source
        if m is None:
            return []
        out = []
        for z in m.points:
            zz = mp.mpc(z.real, z.imag)
            phi = zz + mp.exp((mp.log(zz - 1) + mp.log(zz + 1)) / 2)
            out.append(1 / phi)
        return out

    def of_theta_mp(self, theta, rs=None):
        a = mp.mpf(self.a.numerator) / self.a.denominator
        val = a * theta
        if a != 1:
            rs = self._mp_data() if rs is None else rs
            e = mp.expj(theta)
            acc = mp.mpf(0)
            for r in rs:
                acc += (theta + 1j * (mp.log(1 - r * e) - mp.log(1 - r / e))).real
            val += (1 - a) * acc / len(rs)
        return val

    def dtheta_mp(self, theta, rs=None):
        a = mp.mpf(self.a.numerator) / self.a.denominator
        val = a
        if a != 1:
            rs = self._mp_data() if rs is None else rs
            e = mp.expj(theta)
            acc = mp.mpf(0)
            for r in rs:
                acc += ((1 - r * r) / ((1 - r * e) * (1 - r / e))).real
            val += (1 - a) * acc / len(rs)
        return val


def phase_targets(n: int, shift: float = 0.0) -> np.ndarray:
    """Phase values of the ascending nodes: ``(2(n - j) + 1) pi / (2n) + shift``."""
    j = np.arange(1, n + 1)
    return (2 * (n - j) + 1) * math.pi / (2 * n) + shift


def phase_nodes(pf: PhaseFunction, n: int, shift: float = 0.0, dps: int | None = None):
    """Solve ``Phi(x_j) = (2(n - j) + 1) pi / (2n) + shift`` for ``j = 1..n``.

    Returns an ascending float array, or a list of ``mpf`` when ``dps`` is
    given (the nodes are then accurate to roughly ``dps`` digits).
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    if not 0.0 <= shift < math.pi / (2 * n):
        raise ValueError("shift must lie in [0, pi/(2n))")
    if dps is not None:
        return _phase_nodes_mp(pf, n, shift, dps)

    targets = phase_targets(n, shift)
    lo = np.zeros(n)
    hi = np.full(n, math.pi)
    theta = targets.copy()
    for _ in range(_MAX_ITER):
        f = pf.of_theta(theta) - targets
        below = f < 0
        lo = np.where(below, theta, lo)
        hi = np.where(below, hi, theta)
        step = f / pf.dtheta(theta)
        new = theta - step
        bad = (new <= lo) | (new >= hi) | ~np.isfinite(new)
        new = np.where(bad, 0.5 * (lo + hi), new)
        done = np.abs(new - theta) <= _NEWTON_TOL * np.maximum(1.0, theta)
        theta = new
        if np.all(done):
            break
    else:
        raise RuntimeError("phase equation solver did not converge")
    dev = np.max(np.abs(pf.of_theta(theta) - targets))
    if dev >= 1e-13:
        raise RuntimeError(f"phase residual {dev:.3e} above 1e-13")
    return np.cos(theta)


def _phase_nodes_mp(pf, n, shift, dps):
    with mp.workdps(dps + 10):
        rs = pf._mp_data()
        tol = mp.mpf(10) ** (-dps - 3)
        out = []
        for j in range(1, n + 1):
            target = (2 * (n - j) + 1) * mp.pi / (2 * n) + shift
            lo, hi = mp.mpf(0), +mp.pi
            theta = +target
            for _ in range(_MAX_ITER):
                f = pf.of_theta_mp(theta, rs) - target
                if f < 0:
                    lo = theta
                else:
                    hi = theta
                new = theta - f / pf.dtheta_mp(theta, rs)
                if not lo < new < hi:
                    new = (lo + hi) / 2
                if abs(new - theta) <= tol:
                    theta = new
                    break
                theta = new
            else:
                raise RuntimeError("extended-precision phase solver did not converge")
            out.append(mp.cos(theta))
    with mp.workdps(dps):
        return [+x for x in out]


_CLOSED_FORM_A = (Fraction(0), Fraction(1, 2), Fraction(1))


def closed_form_nodes(a, zeta: float, n: int, A: float = 0.0, ell: float = 1.0, dps: int | None = None):
    """Explicit node families for one real mass ``zeta > 2``.

    With ``k_j = (2j - 1) pi / (2n) + A exp(-ell n)`` and ``phi = zeta + sqrt(zeta**2 - 1)``:

    * ``a = 1``:   ``x_j = cos k_j``
    * ``a = 1/2``: ``x_j = (sin(k_j)**2 + cos(k_j) sqrt(phi**2 - sin(k_j)**2)) / phi``
    * ``a = 0``:   ``x_j = (1 + zeta cos k_j) / (zeta + cos k_j)``

    Returned in ascending order.
    """
    a = as_rational(a)
    if a not in _CLOSED_FORM_A:
        raise ValueError(f"closed forms exist only for a in {{0, 1/2, 1}}, got {a}")
    zeta = float(zeta)
    if not zeta > 2.0:
        raise ValueError(f"closed forms require a real mass zeta > 2, got {zeta}")
    if n < 1:
        raise ValueError("n must be a positive integer")
    shift = A * math.exp(-ell * n)
    if A < 0 or not shift < math.pi / (2 * n):
        raise ValueError("A exp(-ell n) must lie in [0, pi/(2n))")

    if dps is not None:
        with mp.workdps(dps + 10):
            z = mp.mpf(zeta)
            phi = z + mp.sqrt(z * z - 1)
            k = [(2 * j - 1) * mp.pi / (2 * n) + shift for j in range(1, n + 1)]
            xs = [_closed_form_one(a, z, phi, kj, mp.sin, mp.cos, mp.sqrt) for kj in k]
        with mp.workdps(dps):
            return sorted(+x for x in xs)

    phi = zeta + math.sqrt(zeta * zeta - 1.0)
    k = (2 * np.arange(1, n + 1) - 1) * math.pi / (2 * n) + shift
    x = _closed_form_one(a, zeta, phi, k, np.sin, np.cos, np.sqrt)
    return np.sort(x)


def _closed_form_one(a, zeta, phi, k, sin, cos, sqrt):
    if a == 1:
        return cos(k)
    if a == Fraction(1, 2):
        s2 = sin(k) ** 2
        return (s2 + cos(k) * sqrt(phi * phi - s2)) / phi
    c = cos(k)
    return (1 + zeta * c) / (zeta + c)


def perturb_nodes(nodes, n: int, A: float, ell: float, seed: int) -> np.ndarray:
    """Add seeded uniform offsets in ``[-A e^{-ell n}, A e^{-ell n}]``.

    The budget must stay below half of the smallest gap (gaps to the
    endpoints included), so ordering and containment survive.
    """
    x = np.asarray(nodes, dtype=float)
    if A < 0 or ell <= 0:
        raise ValueError("need A >= 0 and ell > 0")
    budget = A * math.exp(-ell * n)
    if budget == 0.0:
        return x.copy()
    gaps = np.diff(np.concatenate(([-1.0], x, [1.0])))
    if budget >= 0.5 * gaps.min():
        raise ValueError(
            f"perturbation budget {budget:.3e} exceeds half the minimal gap {0.5 * gaps.min():.3e}"
        )
    rng = np.random.default_rng(seed)
    return x + rng.uniform(-budget, budget, size=x.shape)


@dataclass(frozen=True)
class AdmissibilityReport:
    max_deviation: float
    budget: float
    passed: bool
    deviations: np.ndarray = field(repr=False)


def admissibility_check(nodes, pf: PhaseFunction, A: float = 0.0, ell: float = 1.0,
                        n: int | None = None, floor: float = 1e-12) -> AdmissibilityReport:
    """Largest ``|Phi(x_j) - target_j|`` against the budget ``A e^{-ell n}``.

    ``floor`` is added to the budget so that rounding in the phase itself
    does not fail exact node sets once ``A e^{-ell n}`` drops below machine
    precision.
    """
    x = np.asarray(nodes, dtype=float)
    n = len(x) if n is None else n
    if len(x) != n:
        raise ValueError(f"expected {n} nodes, got {len(x)}")
    dev = np.abs(pf(x) - phase_targets(n))
    budget = A * math.exp(-ell * n)
    worst = float(dev.max()) if n else 0.0
    return AdmissibilityReport(worst, budget, worst <= budget + floor, dev)


def interlaces(coarse, fine) -> bool:
    """True when ``fine[0] < coarse[0] < fine[1] < ... < coarse[-1] < fine[-1]``."""
    c = np.asarray(coarse, dtype=float)
    f = np.asarray(fine, dtype=float)
    if len(f) != len(c) + 1:
        return False
    return bool(np.all(f[:-1] < c) and np.all(c < f[1:]))


_KINDS = ("phase", "closed-form", "equispaced", "chebyshev")


@dataclass(frozen=True)
class NodeScheme:
    """A rule for producing ``n`` nodes for every ``n``.

    ``kind`` is one of ``phase`` (numerical phase solve, any admissible
    measure and rational ``a``), ``closed-form`` (explicit families for one
    real mass), or the two reference sets ``equispaced`` and ``chebyshev``
    which ignore the measure and serve as controls.
    """

    kind: str
    a: Fraction
    measure: DiscreteMeasure | None = None
    A: float = 0.0
    ell: float = 1.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown scheme kind {self.kind!r}; expected one of {_KINDS}")
        object.__setattr__(self, "a", as_rational(self.a))
        if self.A < 0 or self.ell <= 0:
            raise ValueError("need A >= 0 and ell > 0")
        if self.kind in ("phase", "closed-form") and self.measure is None and self.a != 1:
            raise ValueError("a source measure is required when a < 1")
        if self.kind == "closed-form":
            if self.a not in _CLOSED_FORM_A:
                raise ValueError("closed-form schemes need a in {0, 1/2, 1}")
            if self.measure is not None and not (self.measure.is_single_real and self.measure.points[0].real > 2):
                raise ValueError("closed-form schemes need a single real mass zeta > 2")

    @property
    def zeta(self) -> float | None:
        if self.measure is not None and self.measure.is_single_real:
            return self.measure.points[0].real
        return None

    def phase_function(self) -> PhaseFunction:
        return PhaseFunction.from_measure(self.measure, self.a)

    def shift(self, n: int) -> float:
        return self.A * math.exp(-self.ell * n)

    def nodes(self, n: int, dps: int | None = None):
        if self.kind == "phase":
            return phase_nodes(self.phase_function(), n, self.shift(n), dps=dps)
        if self.kind == "closed-form":
            zeta = self.zeta if self.zeta is not None else 3.0
            return closed_form_nodes(self.a, zeta, n, self.A, self.ell, dps=dps)
        if self.kind == "equispaced":
            if dps is not None:
                with mp.workdps(dps):
                    return [mp.mpf(2 * j - 1 - n) / n for j in range(1, n + 1)]
            return (2 * np.arange(1, n + 1) - 1 - n) / n
        if dps is not None:
            with mp.workdps(dps):
                return sorted(mp.cos((2 * j - 1) * mp.pi / (2 * n)) for j in range(1, n + 1))
        return np.sort(np.cos((2 * np.arange(1, n + 1) - 1) * math.pi / (2 * n)))

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "a": str(self.a),
            "masses": None if self.measure is None else self.measure.to_json(),
            "A": self.A,
            "ell": self.ell,
        }
