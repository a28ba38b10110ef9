"""Exact arithmetic for d-orthogonal polynomial sequences."""
from .core import Family, PolySeq, RecCoeffs, associated, generate
from .dsym import SymData
from .errors import DopsError
from .poly import Poly

__all__ = ["DopsError", "Family", "Poly", "PolySeq", "RecCoeffs", "SymData", "associated", "generate"]
__version__ = "0.1.0"
