"""Numerical Berezin quantization of SU(2) coadjoint orbits and friends."""

__version__ = "0.1.0"
