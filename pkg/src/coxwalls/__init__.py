"""Exact wall combinatorics for Coxeter groups: roots, walls, chains of roots and cube complexes."""

__version__ = "0.1.0"
