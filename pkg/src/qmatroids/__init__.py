"""Exact computations with q-matroids over small finite fields."""

__version__ = "0.1.0"
