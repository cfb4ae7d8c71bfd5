"""Probability that three uniform random points in a convex body form an
obtuse triangle, computed three ways: Monte Carlo sampling, numerical
quadrature over auxiliary-variable densities, and exact closed forms
assembled through a Crofton reduction of the unit cube."""

from .distributions import Aux, AuxiliaryDistribution
from .exact import ClosedFormValue, Const, catalan, cf_eval, published_value
from .geometry import CONFIGURATIONS, Body, CubeConfiguration, obtuse_parts
from .montecarlo import EstimateResult, estimate_auxiliary_event, estimate_body, estimate_configuration

__version__ = "0.1.0"

__all__ = [
    "Aux",
    "AuxiliaryDistribution",
    "Body",
    "CONFIGURATIONS",
    "ClosedFormValue",
    "Const",
    "CubeConfiguration",
    "EstimateResult",
    "catalan",
    "cf_eval",
    "estimate_auxiliary_event",
    "estimate_body",
    "estimate_configuration",
    "obtuse_parts",
    "published_value",
]
