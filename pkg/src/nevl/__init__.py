"""Evaluation toolkit for gender-neutral English-Italian machine translation."""

__version__ = "0.1.0"
