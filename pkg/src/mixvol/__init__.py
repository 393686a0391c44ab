"""Exact mixed volumes, Bezout ratios and facet isoperimetric checks for polytopes."""

from .bodies import (ball, box, corner_simplex, cross_polytope, cube, cylinder, half_ball,
                     make_body, regular_simplex)
from .bezout import b2_lower_bound, bezout_form, bezout_ratio
from .isoperimetric import excluding_check, facet_ratios, isop
from .mixed import cross_validate, mixed_volume, segment_mixed_volume
from .polytope import AffineMap, GeometryError, HPolytope, VPolytope, minkowski_sum
from .search import affine_search
from .wulff import SphereFunction, WulffFamily, alexandrov_check, counterexample_construct

__version__ = "0.1.0"

__all__ = [
    "AffineMap", "GeometryError", "HPolytope", "SphereFunction", "VPolytope", "WulffFamily",
    "affine_search", "alexandrov_check", "b2_lower_bound", "ball", "bezout_form", "bezout_ratio",
    "box", "corner_simplex", "counterexample_construct", "cross_polytope", "cross_validate", "cube",
    "cylinder", "excluding_check", "facet_ratios", "half_ball", "isop", "make_body",
    "minkowski_sum", "mixed_volume", "regular_simplex", "segment_mixed_volume",
]
