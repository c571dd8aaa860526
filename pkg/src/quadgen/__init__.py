"""Convergent interpolatory quadrature for the arcsine measure on [-1, 1].

Nodes are quantiles of an equilibrium measure that mixes the arcsine law with
the balayage of a discrete measure off the interval. The package builds those
nodes, the corresponding quadrature rules, the varying-measure orthogonal
polynomials that explain them, and convergence diagnostics.
"""

from .diagnostics import ConvergenceReport, reference_integral, run_study, weak_star_distance
from .measures import (
    BalayageMeasure,
    DiscreteMeasure,
    EquilibriumMeasure,
    balayage_density,
    balayage_potential,
    balayage_tail,
    equilibrium_cdf,
    equilibrium_potential_on_interval,
    green_constant,
    potential,
)
from .nodes import (
    NodeScheme,
    PhaseFunction,
    admissibility_check,
    closed_form_nodes,
    interlaces,
    perturb_nodes,
    phase_nodes,
)
from .orthopoly import (
    AsymptoticEnvelope,
    RecurrenceCoefficients,
    compare_asymptotics,
    envelope_K1,
    envelope_K2,
    gauss_rule_from_recurrence,
    stieltjes_recurrence,
)
from .quadrature import (
    IllConditionedWarning,
    PositivePolynomial,
    QuadratureRule,
    apply,
    exactness_degree,
    interpolatory_rule,
    interpolatory_weights,
    polya_statistics,
    varying_measure_weights,
)

__version__ = "0.1.0"
