"""Exact dynamics of binary expansions in non-integer bases."""
from .algebraic import CONSTANTS, Q2, FieldElement, FieldSpec, isolate_root, sign, to_decimal

__all__ = ["CONSTANTS", "Q2", "FieldElement", "FieldSpec", "isolate_root", "sign", "to_decimal"]
__version__ = "0.1.0"
