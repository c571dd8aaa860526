import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quadgen.measures import DiscreteMeasure, EquilibriumMeasure, balayage_tail_closed_form
from quadgen.nodes import (
    NodeScheme,
    PhaseFunction,
    admissibility_check,
    closed_form_nodes,
    interlaces,
    perturb_nodes,
    phase_nodes,
    phase_targets,
)

D3 = DiscreteMeasure.single(3.0)
PAIR = DiscreteMeasure((2 + 2j, 2 - 2j))


def chebyshev(n):
    return np.sort(np.cos((2 * np.arange(1, n + 1) - 1) * math.pi / (2 * n)))


@pytest.mark.parametrize("m, a", [(None, 1), (D3, "1/2"), (D3, 0), (PAIR, "1/3")])
def test_phase_endpoints_and_monotone(m, a):
    pf = PhaseFunction.from_measure(m, a)
    assert pf(-1.0) == pytest.approx(math.pi, abs=1e-13)
    assert pf(1.0) == 0.0
    x = np.linspace(-1, 1, 501)
    assert np.all(np.diff(pf(x)) < 0)


def test_phase_derivative_matches_finite_difference():
    pf = PhaseFunction.from_measure(PAIR, "1/3")
    x = np.linspace(-0.9, 0.9, 9)
    h = 1e-6
    np.testing.assert_allclose(pf.derivative(x), (pf(x + h) - pf(x - h)) / (2 * h), rtol=1e-7)


@pytest.mark.parametrize("n, expected", [(1, [0.0]), (2, [-math.sqrt(2) / 2, math.sqrt(2) / 2])])
def test_phase_nodes_a1_small(n, expected):
    np.testing.assert_allclose(phase_nodes(PhaseFunction.from_measure(None, 1), n), expected, atol=1e-14)


@pytest.mark.parametrize("m, a", [(D3, "1/2"), (PAIR, "1/3"), (DiscreteMeasure((-2.5, 4.0)), "1/4")])
@pytest.mark.parametrize("n", [1, 5, 32])
def test_phase_nodes_hit_targets(m, a, n):
    pf = PhaseFunction.from_measure(m, a)
    x = phase_nodes(pf, n)
    assert np.all(np.diff(x) > 0) and np.all(np.abs(x) < 1)
    assert np.max(np.abs(pf(x) - phase_targets(n))) < 1e-13


def test_phase_nodes_extended_precision_agree():
    pf = PhaseFunction.from_measure(D3, 0)
    xs = phase_nodes(pf, 24, dps=40)
    np.testing.assert_allclose([float(v) for v in xs], phase_nodes(pf, 24), atol=1e-15)


@pytest.mark.parametrize("a", [0, "1/2", 1])
@pytest.mark.parametrize("zeta", [2.5, 3.0, 5.0])
def test_closed_form_matches_phase(a, zeta):
    pf = PhaseFunction.from_measure(DiscreteMeasure.single(zeta), a)
    for n in (1, 2, 7, 16):
        np.testing.assert_allclose(closed_form_nodes(a, zeta, n), phase_nodes(pf, n), atol=1e-12)


def test_closed_form_half_midpoint():
    # n = 1 puts the only angle at pi/2
    assert closed_form_nodes("1/2", 3.0, 1)[0] == pytest.approx(1 / (3 + math.sqrt(8)), rel=1e-14)


def test_closed_form_a0_midpoint():
    # the a = 0 node at angle pi/2 is 1/zeta; it carries half the balayage mass on each side
    x = closed_form_nodes(0, 3.0, 1)[0]
    assert x == pytest.approx(1 / 3, rel=1e-14)
    assert balayage_tail_closed_form(D3, x) == pytest.approx(0.5, abs=1e-15)


def test_closed_form_half_large_zeta():
    np.testing.assert_allclose(closed_form_nodes("1/2", 1e6, 4), chebyshev(4), atol=1e-5)


@pytest.mark.parametrize("a, zeta", [("1/3", 3.0), (1, 2.0), (0, 1.5)])
def test_closed_form_rejects(a, zeta):
    with pytest.raises(ValueError):
        closed_form_nodes(a, zeta, 4)


def test_closed_form_shift_matches_phase_shift():
    A, ell, n = 0.5, 0.3, 6
    s = A * math.exp(-ell * n)
    pf = PhaseFunction.from_measure(D3, "1/2")
    np.testing.assert_allclose(closed_form_nodes("1/2", 3.0, n, A, ell), phase_nodes(pf, n, s), atol=1e-13)
    rep = admissibility_check(closed_form_nodes("1/2", 3.0, n, A, ell), pf, A, ell, n)
    assert rep.passed and rep.max_deviation == pytest.approx(s, rel=1e-9)


def test_perturb_identity():
    x = chebyshev(10)
    np.testing.assert_array_equal(perturb_nodes(x, 10, 0.0, 1.0, seed=3), x)


def test_perturb_below_double_precision():
    x = chebyshev(40)
    y = perturb_nodes(x, 40, 1.0, 1.0, seed=1)
    assert np.max(np.abs(y - x)) <= math.exp(-40) + 1e-16


def test_perturb_is_seeded():
    x = phase_nodes(PhaseFunction.from_measure(D3, "1/2"), 20)
    a = perturb_nodes(x, 20, 1.0, 0.5, seed=7)
    np.testing.assert_array_equal(a, perturb_nodes(x, 20, 1.0, 0.5, seed=7))
    assert not np.array_equal(a, perturb_nodes(x, 20, 1.0, 0.5, seed=8))


def test_perturb_phase_deviation_bounded_by_slope():
    pf = PhaseFunction.from_measure(D3, "1/2")
    n, A, ell = 20, 1.0, 0.5
    x = phase_nodes(pf, n)
    y = perturb_nodes(x, n, A, ell, seed=7)
    budget = A * math.exp(-ell * n)
    assert np.all(np.diff(y) > 0) and np.max(np.abs(y - x)) <= budget
    slope = np.max(np.abs(pf.derivative(np.concatenate([x, y]))))
    assert admissibility_check(y, pf, n=n).max_deviation <= 1.01 * slope * budget


def test_perturb_rejects_budget_over_half_gap():
    x = phase_nodes(PhaseFunction.from_measure(D3, "1/2"), 20)
    with pytest.raises(ValueError):
        perturb_nodes(x, 20, 1.0, 0.1, seed=7)


def test_admissibility_of_phase_nodes():
    pf = PhaseFunction.from_measure(PAIR, "1/2")
    rep = admissibility_check(phase_nodes(pf, 17), pf, n=17)
    assert rep.passed and rep.max_deviation < 1e-12


@pytest.mark.parametrize("n", [4, 8, 16])
def test_chebyshev_nodes_fail_under_a0(n):
    assert not admissibility_check(chebyshev(n), PhaseFunction.from_measure(D3, 0), n=n).passed


@pytest.mark.parametrize("n", [8, 16, 64])
def test_equispaced_nodes_fail_under_a1(n):
    x = NodeScheme("equispaced", 1).nodes(n)
    assert not admissibility_check(x, PhaseFunction.from_measure(None, 1), n=n).passed


@pytest.mark.parametrize("a", [0, "1/2", 1])
def test_interlacing(a):
    for n in range(2, 65):
        coarse = closed_form_nodes(a, 3.0, n - 1)
        assert interlaces(coarse, closed_form_nodes(a, 3.0, n)), n


def test_interlaces_rejects():
    assert not interlaces([0.0], [0.1, 0.5])
    assert not interlaces([0.0, 0.1], [0.5])


def test_symmetry_a1():
    x = phase_nodes(PhaseFunction.from_measure(None, 1), 11)
    np.testing.assert_allclose(x, -x[::-1], atol=1e-14)


def test_nodes_biased_away_from_mass():
    # for a mass at +3 the nodes drift to the right (balayage piles up near +1)
    x = closed_form_nodes(0, 3.0, 9)
    assert x[4] > 0 and np.mean(x) > 0


def test_counting_measure_distance_shrinks():
    from quadgen.diagnostics import weak_star_distance

    em = EquilibriumMeasure.from_measure(D3, "1/2")
    pf = PhaseFunction(em)
    d8 = weak_star_distance(phase_nodes(pf, 8), em)
    d128 = weak_star_distance(phase_nodes(pf, 128), em)
    assert d128 < d8


@pytest.mark.parametrize("kind", ["phase", "closed-form", "equispaced", "chebyshev"])
def test_scheme_nodes_ordered(kind):
    s = NodeScheme(kind, "1/2", D3)
    x = s.nodes(12)
    assert len(x) == 12 and np.all(np.diff(x) > 0) and np.all(np.abs(x) < 1)
    xs = s.nodes(12, dps=30)
    np.testing.assert_allclose([float(v) for v in xs], x, atol=1e-15)


@pytest.mark.parametrize("kwargs", [
    dict(kind="bogus", a=1), dict(kind="phase", a="1/2"), dict(kind="closed-form", a="1/3", measure=D3),
    dict(kind="closed-form", a=0, measure=PAIR), dict(kind="phase", a=1, A=-1.0),
])
def test_scheme_validation(kwargs):
    with pytest.raises(ValueError):
        NodeScheme(**kwargs)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 40), st.fractions(0, 1, max_denominator=6), st.floats(2.1, 20))
def test_phase_nodes_property(n, a, zeta):
    pf = PhaseFunction.from_measure(DiscreteMeasure.single(zeta), a)
    x = phase_nodes(pf, n)
    assert np.all(np.diff(x) > 0) and np.all(np.abs(x) < 1)
    assert admissibility_check(x, pf, n=n).passed
