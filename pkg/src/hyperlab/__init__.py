"""Lattice-point angle statistics for SL2(Z) and the quaternion group Gamma(2,5)."""

__version__ = "0.1.0"
