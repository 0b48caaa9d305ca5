"""Tableau combinatorics, crystals, Kazhdan-Lusztig bases and Gelfand-Tsetlin
characters for finite W-algebras of type A, with an explicit matrix engine for
two-row shifted Yangian modules."""

from .errors import WCharError
from .pyramid import Pyramid, RowTabloid, Tableau

__all__ = ["Pyramid", "RowTabloid", "Tableau", "WCharError"]
__version__ = "0.1.0"
