"""SLOCC classification of extended GHZ-symmetric three-qubit states."""

from .classify import Class, ClassVerdict, WitnessKind, classify_extended
from .states import ExtSymParams, GhzSymParams, make_extended, make_ghz_symmetric

__all__ = [
    "Class",
    "ClassVerdict",
    "ExtSymParams",
    "GhzSymParams",
    "WitnessKind",
    "classify_extended",
    "make_extended",
    "make_ghz_symmetric",
]
