"""Geometry of the taxicab Poincare disk: distances, minimisers, circles,
isometries and Gromov hyperbolicity."""

from .metric import (BOUNDARY_GUARD, ORIGIN, Beyond, DiskError, Point, distance,
                     lies_beyond, minimal_point, radius_of)
from .curves import PolyCurve, doubly_monotonic_shadow, l_shaped, length
from .circles import CircleSpec, Region, boundary, decompose, intersects_region
from .isometries import Isometry, apply, compose, inverse
from .hyperbolicity import (GeodesicLine, delta_scan, four_point_check, gromov_product,
                            line_through, lines_intersect, playfair_witnesses)

__all__ = [
    "BOUNDARY_GUARD", "ORIGIN", "Beyond", "DiskError", "Point", "distance",
    "lies_beyond", "minimal_point", "radius_of",
    "PolyCurve", "doubly_monotonic_shadow", "l_shaped", "length",
    "CircleSpec", "Region", "boundary", "decompose", "intersects_region",
    "Isometry", "apply", "compose", "inverse",
    "GeodesicLine", "delta_scan", "four_point_check", "gromov_product",
    "line_through", "lines_intersect", "playfair_witnesses",
]
