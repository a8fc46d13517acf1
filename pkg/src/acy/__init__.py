"""Graded quotient algebras of SU(3) ADE graphs and their Hochschild,
cyclic, and Hochschild cohomology, computed by exact linear algebra."""

__version__ = "0.1.0"

from .scalar import FieldTower, Scalar

__all__ = ["FieldTower", "Scalar", "__version__"]
