"""Compactly supported separable shearlet systems and numerical certificates
of their structural properties."""

__version__ = "0.1.0"
