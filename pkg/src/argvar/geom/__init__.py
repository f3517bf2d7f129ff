"""Planar curves, regions, gaps, intrinsic diameters and Poincare distances."""

from .conformal import ConformalMapEntry, conformal_to_disk
from .curves import Analytic, Arc, Curve, Line, curve_extremum, curve_length, total_curvature
from .metric import Estimate, GridParams, gap, gap_curve, intrinsic_diameter
from .poincare import poincare_distance_disk, poincare_distance_halfplane
from .regions import AnnulusSector, Disk, HalfPlane, Polygon, Rectangle, Region, region_from_dict

__all__ = [
    "Analytic", "AnnulusSector", "Arc", "ConformalMapEntry", "Curve", "Disk", "Estimate",
    "GridParams", "HalfPlane", "Line", "Polygon", "Rectangle", "Region", "conformal_to_disk",
    "curve_extremum", "curve_length", "gap", "gap_curve", "intrinsic_diameter",
    "poincare_distance_disk", "poincare_distance_halfplane", "region_from_dict",
    "total_curvature",
]
