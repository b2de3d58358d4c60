"""Exact invariants of complete toric varieties and of toric families over a base."""

__version__ = "0.1.0"
