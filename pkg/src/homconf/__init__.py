"""Exact symbolic calculus for Hom-Lie conformal algebras over C[d],
their representations, cochain complexes, O-operators, and deformations."""

__version__ = "0.1.0"
