"""Driven-dissipative flat-band lattice simulator with engineered nonlocal dissipation."""

__version__ = "0.1.0"
