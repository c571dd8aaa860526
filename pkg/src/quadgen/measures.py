"""Discrete source measures, their balayage onto [-1, 1] and the equilibrium measure.

A source measure is a uniform mass distribution on finitely many points
``zeta_k`` off the interval. Its balayage is the unit measure on [-1, 1]
whose density against ``dt`` is

    (1/kappa) * sum_k Re[ sqrt(zeta_k**2 - 1) / (pi (zeta_k - t) sqrt(1 - t**2)) ]

and the equilibrium measure mixes it with the arcsine law:
``nu = (1 - a) * balayage + a * lambda_0``.

All integrals are evaluated in the angle variable ``t = cos(theta)`` where the
``(1 - t**2)**-1/2`` endpoint singularity disappears.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy import integrate

__all__ = [
    "DiscreteMeasure",
    "BalayageMeasure",
    "EquilibriumMeasure",
    "as_rational",
    "joukowski_inverse",
    "balayage_density",
    "balayage_tail",
    "balayage_tail_closed_form",
    "balayage_potential",
    "green_constant",
    "potential",
    "equilibrium_potential_on_interval",
    "equilibrium_cdf",
    "load_measure_config",
]

LOG2 = math.log(2.0)

# Gauss-Legendre panel used for all tail integrals in the angle variable.
_GL_ORDER = 16
_GL_X, _GL_W = np.polynomial.legendre.leggauss(_GL_ORDER)
_PANEL_TOL = 1e-14
_MAX_PANELS = 1 << 12


def as_rational(a) -> Fraction:
    """Coerce ``a`` to an exact rational in [0, 1].

    Strings such as ``"1/2"`` and ``Fraction`` instances are taken as exact;
    floats go through their shortest decimal representation.
    """
    if isinstance(a, Fraction):
        r = a
    elif isinstance(a, int):
        r = Fraction(a)
    elif isinstance(a, float):
        r = Fraction(repr(a))
    elif isinstance(a, str):
        try:
            r = Fraction(a.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse rational a={a!r}") from exc
    else:
        raise TypeError(f"unsupported type for a: {type(a).__name__}")
    if not 0 <= r <= 1:
        raise ValueError(f"a must lie in [0, 1], got {r}")
    return r


def _sqrt_z2m1(z):
    # Branch analytic off [-1, 1] and positive for real z > 1.
    z = np.asarray(z, dtype=complex)
    return np.exp(0.5 * (np.log(z - 1.0) + np.log(z + 1.0)))


def joukowski_inverse(z):
    """Exterior Joukowski inverse ``z + sqrt(z**2 - 1)``, with ``|phi(z)| > 1``."""
    z = np.asarray(z, dtype=complex)
    out = z + _sqrt_z2m1(z)
    return out if out.ndim else complex(out)


def _distance_to_interval(z: complex) -> float:
    x = min(max(z.real, -1.0), 1.0)
    return abs(z - x)


@dataclass(frozen=True)
class DiscreteMeasure:
    """Uniform probability measure on ``points`` (each mass ``1/kappa``).

    The point set must be closed under complex conjugation and stay at
    distance strictly greater than 1 from [-1, 1].
    """

    points: tuple[complex, ...]

    def __post_init__(self):
        pts = tuple(complex(p) for p in self.points)
        if not pts:
            raise ValueError("a discrete measure needs at least one mass point")
        object.__setattr__(self, "points", pts)
        for p in pts:
            if not (math.isfinite(p.real) and math.isfinite(p.imag)):
                raise ValueError(f"mass point {p} is not finite")
            if _distance_to_interval(p) <= 1.0:
                raise ValueError(
                    f"mass point {p} lies within distance 1 of [-1, 1]"
                )
        if not _is_conjugate_symmetric(pts):
            raise ValueError("mass points are not symmetric with respect to the real axis")

    @classmethod
    def single(cls, zeta: float) -> "DiscreteMeasure":
        return cls((complex(zeta),))

    @property
    def kappa(self) -> int:
        return len(self.points)

    @property
    def zeta(self) -> np.ndarray:
        return np.array(self.points, dtype=complex)

    @property
    def is_single_real(self) -> bool:
        return self.kappa == 1 and self.points[0].imag == 0.0

    def to_json(self) -> list[list[float]]:
        return [[p.real, p.imag] for p in self.points]


def _is_conjugate_symmetric(pts, tol=1e-12) -> bool:
    remaining = list(pts)
    while remaining:
        p = remaining.pop()
        scale = max(1.0, abs(p))
        if abs(p.imag) <= tol * scale:
            continue
        for i, q in enumerate(remaining):
            if abs(q - p.conjugate()) <= tol * scale:
                del remaining[i]
                break
        else:
            return False
    return True


def _theta_density(zeta: np.ndarray, theta):
    """Balayage density with respect to ``d theta`` (t = cos theta), times pi."""
    theta = np.asarray(theta, dtype=float)
    s = _sqrt_z2m1(zeta)
    c = np.cos(theta)[..., None]
    return np.mean((s / (zeta - c)).real, axis=-1)


def _panel_tail(zeta, theta, panels):
    """pi * integral_0^theta of the angle density with ``panels`` GL panels."""
    theta = np.asarray(theta, dtype=float)
    h = theta / panels
    # nodes: (..., panels, order)
    k = np.arange(panels)[:, None]
    u = (k + 0.5 * (_GL_X[None, :] + 1.0))
    pts = h[..., None, None] * u
    vals = _theta_density(zeta, pts)
    return 0.5 * h * np.einsum("...po,o->...", vals, _GL_W)


@dataclass(frozen=True)
class BalayageMeasure:
    """Balayage of a discrete measure onto [-1, 1].

    The number of Gauss-Legendre panels used for tail integrals is fixed at
    construction by doubling until the full-range integral is stable.
    """

    source: DiscreteMeasure
    panels: int = field(init=False, repr=False)

    def __post_init__(self):
        zeta = self.source.zeta
        probe = np.linspace(0.0, math.pi, 9)[1:]
        panels = 1
        prev = _panel_tail(zeta, probe, panels)
        while True:
            panels *= 2
            cur = _panel_tail(zeta, probe, panels)
            if np.max(np.abs(cur - prev)) < _PANEL_TOL or panels >= _MAX_PANELS:
                break
            prev = cur
        object.__setattr__(self, "panels", panels)

    def density(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(np.abs(t) >= 1.0):
            raise ValueError("balayage density is defined on the open interval (-1, 1)")
        zeta = self.source.zeta
        s = _sqrt_z2m1(zeta)
        tt = t[..., None]
        val = np.mean((s / (zeta - tt)).real, axis=-1) / (math.pi * np.sqrt(1.0 - t * t))
        return val if val.ndim else float(val)

    def theta_density(self, theta):
        """Density of the balayage in the angle variable (integrates to 1 on [0, pi])."""
        val = _theta_density(self.source.zeta, theta) / math.pi
        return val if np.ndim(val) else float(val)

    def tail_theta(self, theta):
        """Mass of ``[cos(theta), 1]``."""
        val = _panel_tail(self.source.zeta, theta, self.panels) / math.pi
        return val if np.ndim(val) else float(val)

    def tail(self, x):
        x = _check_closed(x)
        return self.tail_theta(np.arccos(x))


def _check_closed(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise ValueError("argument must lie in [-1, 1]")
    return x


@lru_cache(maxsize=64)
def _balayage(m: DiscreteMeasure) -> BalayageMeasure:
    return BalayageMeasure(m)


def balayage_density(m: DiscreteMeasure, t):
    """Density of the balayage of ``m`` at ``t`` in (-1, 1)."""
    return _balayage(m).density(t)


def balayage_tail(m: DiscreteMeasure, x):
    """Balayage mass of ``[x, 1]``, by panel quadrature in the angle variable."""
    return _balayage(m).tail(x)


def balayage_tail_closed_form(m: DiscreteMeasure, x):
    """Closed-form balayage mass of ``[x, 1]``.

    With ``r = 1/phi(zeta)`` the angle density is a Poisson kernel, whose
    primitive is ``theta + i*(log(1 - r e^{i theta}) - log(1 - r e^{-i theta}))``.
    Kept independent of :func:`balayage_tail` as a cross-check.
    """
    x = _check_closed(x)
    theta = np.arccos(x)[..., None]
    r = 1.0 / joukowski_inverse(m.zeta)
    e = np.exp(1j * theta)
    prim = theta + 1j * (np.log(1.0 - r * e) - np.log(1.0 - r / e))
    val = np.mean(prim.real, axis=-1) / math.pi
    return val if val.ndim else float(val)


def potential(m: DiscreteMeasure, x):
    """Logarithmic potential ``(1/kappa) sum_k log(1/|x - zeta_k|)``."""
    x = np.asarray(x, dtype=float)
    val = -np.mean(np.log(np.abs(x[..., None] - m.zeta)), axis=-1)
    return val if val.ndim else float(val)


def green_constant(m: DiscreteMeasure) -> float:
    """Mean of ``log|phi(zeta_k)|``: the Green function of the exterior of
    [-1, 1] with pole at infinity, integrated against ``m``.

    On [-1, 1] the balayage potential exceeds the source potential by exactly
    this constant.
    """
    return float(np.mean(np.log(np.abs(joukowski_inverse(m.zeta)))))


def balayage_potential(m: DiscreteMeasure, x: float, epsabs: float = 1e-13) -> float:
    """Logarithmic potential of the balayage at ``x`` in [-1, 1], by adaptive
    quadrature split at the logarithmic singularity."""
    x = float(x)
    if abs(x) > 1.0:
        raise ValueError("argument must lie in [-1, 1]")
    zeta = m.zeta

    def integrand(theta):
        c = math.cos(theta)
        dens = float(_theta_density(zeta, theta)) / math.pi
        return -math.log(abs(x - c)) * dens

    theta_x = math.acos(x)
    total = 0.0
    for lo, hi in ((0.0, theta_x), (theta_x, math.pi)):
        if hi - lo > 0.0:
            val, _ = integrate.quad(integrand, lo, hi, epsabs=epsabs, epsrel=1e-13, limit=400)
            total += val
    return total


@dataclass(frozen=True)
class EquilibriumMeasure:
    """``(1 - a) * balayage + a * lambda_0`` for rational ``a`` in [0, 1].

    ``sigma_tilde`` may be omitted only when ``a == 1``.
    """

    a: Fraction
    sigma_tilde: BalayageMeasure | None = None

    def __post_init__(self):
        object.__setattr__(self, "a", as_rational(self.a))
        if self.sigma_tilde is None and self.a != 1:
            raise ValueError("a source measure is required when a < 1")

    @classmethod
    def from_measure(cls, m: DiscreteMeasure | None, a) -> "EquilibriumMeasure":
        return cls(as_rational(a), None if m is None else _balayage(m))

    @property
    def source(self) -> DiscreteMeasure | None:
        return None if self.sigma_tilde is None else self.sigma_tilde.source

    def density(self, t):
        t = np.asarray(t, dtype=float)
        a = float(self.a)
        arcsine = 1.0 / (math.pi * np.sqrt(1.0 - t * t))
        if a == 1.0:
            if np.any(np.abs(t) >= 1.0):
                raise ValueError("density is defined on the open interval (-1, 1)")
            return arcsine if arcsine.ndim else float(arcsine)
        val = (1.0 - a) * np.asarray(self.sigma_tilde.density(t)) + a * arcsine
        return val if val.ndim else float(val)

    def theta_density(self, theta):
        a = float(self.a)
        val = a / math.pi
        if a != 1.0:
            val = val + (1.0 - a) * np.asarray(self.sigma_tilde.theta_density(theta))
        return val if np.ndim(val) else float(val)

    def cdf_theta(self, theta):
        """Mass of ``[cos(theta), 1]``."""
        theta = np.asarray(theta, dtype=float)
        a = float(self.a)
        val = a * theta / math.pi
        if a != 1.0:
            val = val + (1.0 - a) * np.asarray(self.sigma_tilde.tail_theta(theta))
        return val if np.ndim(val) else float(val)

    def cdf(self, x):
        x = _check_closed(x)
        return self.cdf_theta(np.arccos(x))

    def potential(self, x):
        return equilibrium_potential_on_interval(self, x)


def equilibrium_potential_on_interval(em: EquilibriumMeasure, x):
    """Potential of the equilibrium measure at ``x`` in [-1, 1].

    ``(1 - a) * (V_sigma(x) + g) + a * log 2`` where ``g`` is
    :func:`green_constant`. Only valid on the interval.
    """
    x = _check_closed(x)
    a = float(em.a)
    if a == 1.0:
        val = np.full_like(x, LOG2)
    else:
        m = em.source
        val = a * LOG2 + (1.0 - a) * (np.asarray(potential(m, x)) + green_constant(m))
    return val if np.ndim(val) else float(val)


def equilibrium_cdf(em: EquilibriumMeasure, x):
    """Equilibrium mass of ``[x, 1]``."""
    return em.cdf(x)


def load_measure_config(source) -> tuple[DiscreteMeasure, Fraction | None]:
    """Read ``{"masses": [[re, im], ...], "a": "p/q"}`` from a path, a JSON
    string or an already-parsed mapping."""
    if isinstance(source, dict):
        doc = source
    else:
        text = Path(source).read_text() if not str(source).lstrip().startswith("{") else str(source)
        doc = json.loads(text)
    try:
        masses = doc["masses"]
    except KeyError as exc:
        raise ValueError("measure config needs a 'masses' list") from exc
    pts = []
    for item in masses:
        if isinstance(item, (int, float)):
            pts.append(complex(item))
        elif len(item) == 2:
            pts.append(complex(float(item[0]), float(item[1])))
        else:
            raise ValueError(f"bad mass entry {item!r}")
    a = doc.get("a")
    return DiscreteMeasure(tuple(pts)), (as_rational(a) if a is not None else None)
