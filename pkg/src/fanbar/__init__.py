"""Bars, fans, continuous functions and constructive reals, executable."""

__version__ = "0.1.0"
