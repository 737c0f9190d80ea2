"""Exact tropicalization of moduli spaces of rational graphically stable curves."""

__version__ = "0.1.0"
