"""Centrally extended preprojective algebras of ADE quivers.

Exact construction of the graded quotient algebras, their trace functional,
center and commutator quotient, and the Lie-theoretic side built on the
maximal nilpotent subalgebra of the matching simple Lie algebra.
"""
__version__ = "0.1.0"
