"""Numerical geometry of the SL(n, R) symmetric space.

Chamber-valued distances and Busemann calculus on the space of unit-volume
scalar products, pencils of tangent vectors and their flag-manifold bases,
nearly geodesic surfaces, and fibered domains in flag manifolds.
"""

__version__ = "0.1.0"

from . import busemann, domain, finsler, flags, immersions, pencils, rootsys, symspace  # noqa: F401
