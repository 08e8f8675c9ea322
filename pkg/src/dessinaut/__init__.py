"""Realize finite groups as automorphism groups of hyperbolic dessins."""

__version__ = "0.1.0"
