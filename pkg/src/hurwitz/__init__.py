"""Braid orbits on Nielsen classes, Hurwitz-curve invariants, and exact
verification of explicit Galois polynomials over Q(t)."""

__version__ = "0.1.0"
