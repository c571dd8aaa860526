import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quadgen.measures import (
    DiscreteMeasure,
    EquilibriumMeasure,
    as_rational,
    balayage_density,
    balayage_potential,
    balayage_tail,
    balayage_tail_closed_form,
    equilibrium_cdf,
    equilibrium_potential_on_interval,
    green_constant,
    joukowski_inverse,
    load_measure_config,
    potential,
)

D3 = DiscreteMeasure.single(3.0)
PAIR = DiscreteMeasure((2 + 2j, 2 - 2j))

# Reference values from 30-digit mpmath quadrature of the density in t
TAIL_D3_0 = 0.608173447969392725
TAIL_PAIR_03 = 0.476756682144731882
EQ_CDF_HALF_D3_05 = 0.384619558242179198
VBAL_D3_04 = 0.807235729011649688
VNU_HALF_D3_0 = 0.678641032965460834


@pytest.mark.parametrize("a, expected", [
    ("1/2", Fraction(1, 2)), (1, Fraction(1)), (0.25, Fraction(1, 4)), (Fraction(2, 3), Fraction(2, 3)),
])
def test_as_rational(a, expected):
    assert as_rational(a) == expected


@pytest.mark.parametrize("bad", ["3/2", "-1/4", "x", 1.5])
def test_as_rational_rejects(bad):
    with pytest.raises(ValueError):
        as_rational(bad)


@pytest.mark.parametrize("points", [(1.5,), (0.5 + 0.9j, 0.5 - 0.9j), (2 + 2j,), (float("nan"),)])
def test_discrete_measure_validation(points):
    with pytest.raises(ValueError):
        DiscreteMeasure(points)


def test_joukowski_inverse():
    assert joukowski_inverse(3.0) == pytest.approx(3 + math.sqrt(8))
    phi = joukowski_inverse(np.array([2 + 2j, -3.0, 5j]))
    assert np.all(np.abs(phi) > 1)


def test_density_at_zero():
    assert balayage_density(D3, 0.0) == pytest.approx(2 * math.sqrt(2) / (3 * math.pi), rel=1e-14)


def test_density_domain():
    with pytest.raises(ValueError):
        balayage_density(D3, 1.0)


def test_density_blows_up_like_arcsine():
    t = 1 - np.array([1e-4, 1e-6, 1e-8])
    scaled = np.asarray(balayage_density(D3, t)) * np.sqrt(1 - t * t)
    assert np.ptp(scaled) < 1e-3 * scaled[0]


def test_density_large_zeta_is_arcsine():
    m = DiscreteMeasure.single(1e6)
    t = np.linspace(-0.9, 0.9, 7)
    np.testing.assert_allclose(balayage_density(m, t), 1 / (math.pi * np.sqrt(1 - t * t)), rtol=1e-5)


@pytest.mark.parametrize("m", [D3, PAIR, DiscreteMeasure((-2.5, 4.0))], ids=["d3", "pair", "two-real"])
def test_tail_endpoints_and_mass(m):
    assert balayage_tail(m, 1.0) == 0.0
    assert balayage_tail(m, -1.0) == pytest.approx(1.0, abs=1e-13)


def test_tail_matches_reference():
    assert balayage_tail(D3, 0.0) == pytest.approx(TAIL_D3_0, abs=1e-13)
    assert balayage_tail(PAIR, 0.3) == pytest.approx(TAIL_PAIR_03, abs=1e-13)


@pytest.mark.parametrize("m", [D3, PAIR, DiscreteMeasure((-1.0 + 1.5j, -1.0 - 1.5j, 2.5))])
def test_tail_quadrature_vs_primitive(m):
    x = np.linspace(-1, 1, 201)
    np.testing.assert_allclose(balayage_tail(m, x), balayage_tail_closed_form(m, x), atol=1e-14)


def test_tail_large_zeta_degenerates_to_arcsine():
    m = DiscreteMeasure.single(1e6)
    x = np.linspace(-1, 1, 1000)
    assert np.max(np.abs(np.asarray(balayage_tail(m, x)) - np.arccos(x) / math.pi)) < 1e-4


@given(st.floats(-1, 1), st.floats(-1, 1))
def test_tail_monotone(x, y):
    lo, hi = min(x, y), max(x, y)
    assert balayage_tail(PAIR, lo) >= balayage_tail(PAIR, hi) - 1e-15


@pytest.mark.parametrize("m, x, expected", [
    (DiscreteMeasure.single(1 + math.e), 1.0, -1.0),
    (D3, 0.0, -math.log(3)),
    (DiscreteMeasure((2 + 1j, 2 - 1j)), 0.0, -0.5 * math.log(5)),
])
def test_potential(m, x, expected):
    assert potential(m, x) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("m, g", [(D3, 1.762747174039086), (PAIR, 1.7343245214879664)])
def test_green_constant(m, g):
    assert green_constant(m) == pytest.approx(g, rel=1e-14)


@pytest.mark.parametrize("m", [D3, PAIR])
@pytest.mark.parametrize("x", [-0.97, -0.3, 0.0, 0.4, 0.999])
def test_balayage_potential_is_source_potential_plus_constant(m, x):
    assert balayage_potential(m, x) - potential(m, x) == pytest.approx(green_constant(m), abs=1e-10)


def test_balayage_potential_reference():
    assert balayage_potential(D3, 0.4) == pytest.approx(VBAL_D3_04, abs=1e-11)


def test_equilibrium_requires_measure():
    with pytest.raises(ValueError):
        EquilibriumMeasure(Fraction(1, 2))
    assert EquilibriumMeasure.from_measure(None, 1).cdf(0.0) == pytest.approx(0.5)


@pytest.mark.parametrize("x", [-1.0, -0.2, 0.7])
def test_equilibrium_potential_a1(x):
    em = EquilibriumMeasure.from_measure(None, 1)
    assert equilibrium_potential_on_interval(em, x) == pytest.approx(math.log(2))


def test_equilibrium_potential_a0_is_balayage_potential():
    em = EquilibriumMeasure.from_measure(D3, 0)
    assert equilibrium_potential_on_interval(em, 0.0) == pytest.approx(-math.log(3) + green_constant(D3))


def test_equilibrium_potential_half_reference():
    em = EquilibriumMeasure.from_measure(D3, "1/2")
    assert equilibrium_potential_on_interval(em, 0.0) == pytest.approx(VNU_HALF_D3_0, abs=1e-13)


def test_equilibrium_potential_domain():
    with pytest.raises(ValueError):
        equilibrium_potential_on_interval(EquilibriumMeasure.from_measure(D3, 0), 1.5)


def test_equilibrium_cdf():
    em = EquilibriumMeasure.from_measure(D3, "1/2")
    assert equilibrium_cdf(em, -1.0) == pytest.approx(1.0, abs=1e-14)
    assert equilibrium_cdf(em, 0.5) == pytest.approx(EQ_CDF_HALF_D3_05, abs=1e-13)


def test_equilibrium_density_integrates_to_cdf():
    em = EquilibriumMeasure.from_measure(PAIR, "1/3")
    theta = np.linspace(0, math.pi, 4001)
    dens = np.asarray(em.theta_density(theta))
    trap = np.concatenate(([0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(theta))))
    np.testing.assert_allclose(trap, em.cdf_theta(theta), atol=1e-6)


def test_load_measure_config(tmp_path):
    p = tmp_path / "m.json"
    p.write_text('{"masses": [[2, 2], [2, -2]], "a": "1/2"}')
    m, a = load_measure_config(p)
    assert m == PAIR and a == Fraction(1, 2)
    m, a = load_measure_config({"masses": [3]})
    assert m == D3 and a is None
    with pytest.raises(ValueError):
        load_measure_config({"points": []})
