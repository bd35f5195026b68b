"""Finite rings, their Jacobson radicals, and bounded checks of the
Armendariz, weak Armendariz and J-Armendariz conditions."""

__version__ = "0.1.0"
