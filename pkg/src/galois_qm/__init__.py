"""Finite-field analogues of two-level quantum mechanics.

Two models are provided: ``gqm`` (probabilities from absolute values of
brackets over GF(q)) and ``bqm`` (expectation values over GF(p^2) with a
conjugate dual).  ``lhv`` tests correlation tables for local
hidden-variable models.
"""

from .field import FieldElement, FieldSpec, field_new, field_of_order

__all__ = ["FieldElement", "FieldSpec", "field_new", "field_of_order"]
__version__ = "0.1.0"
