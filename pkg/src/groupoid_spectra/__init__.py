"""Spectral workbench for twisted groupoid convolution operators on lattices."""

__version__ = "0.1.0"
