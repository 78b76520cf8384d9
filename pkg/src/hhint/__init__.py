"""Derivations, first Hochschild cohomology and Hasse-Schmidt integrability
for finite-dimensional algebras over prime fields."""

__version__ = "0.1.0"
