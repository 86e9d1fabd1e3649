"""Numerical toolkit for intrinsically periodic (cyclic) spacetime dynamics."""

__version__ = "0.1.0"
