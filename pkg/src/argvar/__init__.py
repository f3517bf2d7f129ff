"""Numerical verification of variation-of-argument and zero-count bounds.

Subpackages
-----------
holo
    Holomorphic expressions with exact first and second derivatives.
geom
    Curves, regions, gaps, intrinsic diameters, Poincare distances, conformal maps.
cover
    Covering surfaces branched over a point: sheets, lifted curves and regions.
bounds
    Bernstein index, argument tracking, zero counting and the inequality checks.
cli
    Scenario files, random suites, reports and the ``argvar`` command.
"""

__version__ = "0.1.0"
