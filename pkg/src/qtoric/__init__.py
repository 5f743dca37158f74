"""Rational cohomology, Pontrjagin-class certificates and symmetry bounds for quasitoric manifolds."""

__version__ = "0.1.0"
