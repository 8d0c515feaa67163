"""Kinetic Voronoi diagrams and Delaunay triangulations under a convex
polygonal distance function."""

from kinvd.polygon import ConvexPolygon, validate_polygon, q_distance

__all__ = ["ConvexPolygon", "validate_polygon", "q_distance"]
__version__ = "0.1.0"
