"""Primitive roots, batched modular square roots and quadratic-form prime densities."""

__version__ = "0.1.0"
