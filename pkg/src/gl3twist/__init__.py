"""Numerical verification toolkit for a GL(3) subconvexity argument in the depth aspect."""

__version__ = "0.1.0"
