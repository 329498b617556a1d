"""Exact stratifications of toric hyperplane arrangements and rational points in them."""

from .arrangement import (
    Coverage,
    Lift,
    NonSpanningError,
    Stratification,
    Stratum,
    VectorSet,
    canonical_orbit_key,
    coverage,
    determinant_lcm,
    enumerate_lifts,
    grid_orbit_census,
    minimal_working_set,
    smallest_area_strata,
    stratify,
    theorem_bound,
    working_denominators,
)
from .polytope import HPolytope, VertexSet
from .svg import render_svg
from .toric import (
    DivisorClass,
    Fan,
    class_of,
    frobenius_summands,
    hirzebruch,
    projective_space,
    summand_of_point,
    thomsen_collection,
    validate_fan,
    verify_corollary,
)

__version__ = "0.1.0"
