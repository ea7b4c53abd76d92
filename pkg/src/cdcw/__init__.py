"""Workbench for constant dimension subspace codes.

Constructs codes over small finite fields, evaluates polynomial-in-q code
sizes, computes upper bounds (anticode, Johnson, exact rational LP/ILP),
and verifies every constructed object by exact computation.
"""

__version__ = "0.1.0"
