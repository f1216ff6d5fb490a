"""Concrete operational theories."""

from .pfun import PFunTheory
from .matrix import MatrixTheory, SubStochTheory
from .cpsu import CpsuTheory, FinHilbTheory

__all__ = ["PFunTheory", "MatrixTheory", "SubStochTheory", "CpsuTheory",
           "FinHilbTheory"]
