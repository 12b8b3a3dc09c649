"""Topological closures of finitely generated groups of algebraic points."""

__version__ = "0.1.0"
