"""Twist flows and Dehn twists on Deroin-Tholozan representations of punctured spheres."""

__version__ = "0.1.0"
